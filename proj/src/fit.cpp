// SPDX-License-Identifier: Apache-2.0
#include "fluxring/fit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "fluxring/errors.hpp"
#include "fluxring/sweep.hpp"

namespace fluxring {

namespace {

using Point = std::array<double, 2>; // (beta, phi_fe)

struct Vertex {
  Point x;
  double f;
};

constexpr double kAbsSpreadFloor = 1e-24;
constexpr double kFlatThreshold = 1e-12;
constexpr double kProbeFraction = 0.05;

Point clamp_to(const Point& x, const FitBounds& b) {
  return {std::clamp(x[0], b.beta_min, b.beta_max),
          std::clamp(x[1], b.phi_fe_min, b.phi_fe_max)};
}

// Schedule indices: for every protocol point, the waypoint at which it is read.
SweepSchedule build_schedule(const Protocol& protocol, std::vector<std::size_t>& read_at) {
  SweepSchedule s;
  s.step = protocol.step;
  s.waypoints.push_back(0.0);
  read_at.clear();
  for (double pt : protocol.points) {
    if (!std::isfinite(pt)) throw InvalidParameter("protocol points must be finite");
    if (protocol.kind == ObservableKind::RemnantFlux) {
      if (pt != 0.0) {
        s.waypoints.push_back(pt);
        s.waypoints.push_back(0.0);
      }
    } else if (pt != s.waypoints.back()) {
      s.waypoints.push_back(pt);
    }
    read_at.push_back(s.waypoints.size() - 1);
  }
  return s;
}

class Objective {
public:
  Objective(const std::vector<Observation>& data, double step, double tol)
      : data_(data), tol_(tol) {
    protocol_.kind = data.front().kind;
    protocol_.step = step;
    for (const auto& o : data) protocol_.points.push_back(o.phi_ext);
  }

  double operator()(const Point& x) {
    ++evaluations;
    const auto pred =
        simulate_observables(ReducedParams::from_beta(x[0], x[1]), protocol_, tol_);
    double sum = 0.0;
    for (std::size_t k = 0; k < data_.size(); ++k) {
      const double r = data_[k].observable - pred[k];
      sum += r * r;
    }
    if (!std::isfinite(sum)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "non-finite objective at beta=" << x[0] << " phi_fe=" << x[1]
          << "; last finite iterate beta=" << last_[0] << " phi_fe=" << last_[1];
      throw NumericalFailure(msg.str());
    }
    last_ = x;
    return sum;
  }

  std::size_t evaluations = 0;

private:
  const std::vector<Observation>& data_;
  Protocol protocol_;
  double tol_;
  Point last_{std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
};

struct SimplexRun {
  Vertex best;
  std::size_t iterations = 0;
  bool converged = false;
};

SimplexRun nelder_mead(Objective& f, const Point& start, const FitBounds& b,
                       const FitOptions& opt) {
  const Point width{b.beta_max - b.beta_min, b.phi_fe_max - b.phi_fe_min};
  std::array<Vertex, 3> s;
  s[0] = {start, f(start)};
  for (int d = 0; d < 2; ++d) {
    Point x = start;
    double delta = d == 0 ? 0.1 * std::max(std::abs(start[0]), 0.1 * width[0]) : 0.1 * width[1];
    if (delta == 0.0) delta = 1e-3;
    x[d] = start[d] + delta > (d == 0 ? b.beta_max : b.phi_fe_max) ? start[d] - delta
                                                                    : start[d] + delta;
    x = clamp_to(x, b);
    s[d + 1] = {x, f(x)};
  }

  SimplexRun run;
  const std::size_t eval_start = f.evaluations;
  const auto by_f = [](const Vertex& a, const Vertex& c) { return a.f < c.f; };
  while (true) {
    std::stable_sort(s.begin(), s.end(), by_f);
    const double spread = s[2].f - s[0].f;
    double diameter = 0.0;
    for (int v = 1; v < 3; ++v) {
      for (int d = 0; d < 2; ++d) {
        const double w = width[d] > 0.0 ? width[d] : 1.0;
        diameter = std::max(diameter, std::abs(s[v].x[d] - s[0].x[d]) / w);
      }
    }
    if (spread <= opt.tol * std::abs(s[0].f) + kAbsSpreadFloor || diameter <= 1e-13) {
      run.converged = true;
      break;
    }
    if (f.evaluations - eval_start >= opt.max_evaluations) break;
    ++run.iterations;

    const Point c{0.5 * (s[0].x[0] + s[1].x[0]), 0.5 * (s[0].x[1] + s[1].x[1])};
    const auto along = [&](const Point& from, double t) {
      return clamp_to(Point{c[0] + t * (from[0] - c[0]), c[1] + t * (from[1] - c[1])}, b);
    };

    const Point xr = along(s[2].x, -1.0);
    const double fr = f(xr);
    if (fr < s[0].f) {
      const Point xe = along(s[2].x, -2.0);
      const double fe = f(xe);
      s[2] = fe < fr ? Vertex{xe, fe} : Vertex{xr, fr};
    } else if (fr < s[1].f) {
      s[2] = {xr, fr};
    } else {
      const bool outside = fr < s[2].f;
      const Point xc = outside ? along(s[2].x, -0.5) : along(s[2].x, 0.5);
      const double fc = f(xc);
      if (fc < std::min(fr, s[2].f)) {
        s[2] = {xc, fc};
      } else {
        for (int v = 1; v < 3; ++v) {
          const Point x = clamp_to(Point{s[0].x[0] + 0.5 * (s[v].x[0] - s[0].x[0]),
                                         s[0].x[1] + 0.5 * (s[v].x[1] - s[0].x[1])},
                                   b);
          s[v] = {x, f(x)};
        }
      }
    }
  }
  std::stable_sort(s.begin(), s.end(), by_f);
  run.best = s[0];
  return run;
}

void validate_fit_inputs(const std::vector<Observation>& data, const ReducedParams& initial,
                         const FitBounds& b, const FitOptions& opt) {
  if (data.empty()) throw InvalidParameter("no observations to fit");
  if (data.size() < 3) throw InvalidParameter("fitting needs at least 3 observations");
  for (std::size_t k = 0; k < data.size(); ++k) {
    if (data[k].kind != data.front().kind) {
      throw InvalidParameter("observation kinds must agree across the dataset");
    }
    if (!std::isfinite(data[k].phi_ext) || !std::isfinite(data[k].observable)) {
      throw InvalidParameter("observation " + std::to_string(k) + " is not finite");
    }
  }
  if (!(b.beta_min > 0.0) || !(b.beta_min <= b.beta_max) || !(b.phi_fe_min <= b.phi_fe_max) ||
      !std::isfinite(b.beta_max) || !std::isfinite(b.phi_fe_min) ||
      !std::isfinite(b.phi_fe_max)) {
    throw InvalidParameter("fit bounds must satisfy 0 < beta_min <= beta_max, "
                           "phi_fe_min <= phi_fe_max");
  }
  const double beta = initial.beta();
  // beta() is recomputed from lambda, allow for the last-ulp round trip.
  const double slack = 1e-12 * std::max(1.0, b.beta_max);
  if (beta < b.beta_min - slack || beta > b.beta_max + slack ||
      initial.phi_fe() < b.phi_fe_min || initial.phi_fe() > b.phi_fe_max) {
    throw InvalidParameter("initial point lies outside the fit bounds");
  }
  if (!(opt.tol > 0.0)) throw InvalidParameter("fit tol must be positive");
  if (opt.restarts < 0) throw InvalidParameter("restarts must be nonnegative");
  if (!(opt.step > 0.0)) throw InvalidParameter("fit step must be positive");
}

} // namespace

std::vector<double> simulate_observables(const ReducedParams& p, const Protocol& protocol,
                                         double tol) {
  std::vector<std::size_t> read_at;
  const auto schedule = build_schedule(protocol, read_at);
  const auto traj = run_sweep(p, schedule, tol);

  // The last sample of each leg sits exactly on its waypoint.
  std::vector<const SweepSample*> at_waypoint(schedule.waypoints.size(), nullptr);
  for (const auto& s : traj.samples) at_waypoint[s.leg] = &s;

  std::vector<double> out;
  out.reserve(read_at.size());
  for (std::size_t idx : read_at) {
    const SweepSample& s = *at_waypoint[idx];
    out.push_back(protocol.kind == ObservableKind::RemnantFlux ? s.phi : s.i);
  }
  return out;
}

double fit_objective(const std::vector<Observation>& data, const ReducedParams& p, double step,
                     double tol) {
  if (data.empty()) throw InvalidParameter("no observations");
  Objective f(data, step, tol);
  return f({p.beta(), p.phi_fe()});
}

FitResult fit_parameters(const std::vector<Observation>& data, const ReducedParams& initial,
                         const FitBounds& bounds, const FitOptions& options) {
  validate_fit_inputs(data, initial, bounds, options);
  Objective f(data, options.step, kDefaultRootTol);

  const Point x0 = clamp_to({initial.beta(), initial.phi_fe()}, bounds);
  FitResult result;
  result.initial_objective = f(x0);

  Vertex best{x0, result.initial_objective};
  bool converged = false;
  const auto absorb = [&](const SimplexRun& run) {
    result.iterations += run.iterations;
    if (run.best.f < best.f) {
      best = run.best;
      converged = run.converged;
    } else if (run.best.f == best.f) {
      converged = converged || run.converged;
    }
  };

  absorb(nelder_mead(f, x0, bounds, options));

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int r = 0; r < options.restarts; ++r) {
    const Point start{bounds.beta_min + u01(rng) * (bounds.beta_max - bounds.beta_min),
                      bounds.phi_fe_min + u01(rng) * (bounds.phi_fe_max - bounds.phi_fe_min)};
    absorb(nelder_mead(f, start, bounds, options));
  }
  if (options.restarts > 0) {
    // Fresh simplex around the incumbent.
    absorb(nelder_mead(f, best.x, bounds, options));
  }

  // Identifiability probe: a fixed-size simplex around the optimum.
  const Point width{bounds.beta_max - bounds.beta_min, bounds.phi_fe_max - bounds.phi_fe_min};
  std::array<bool, 2> flat{true, true};
  for (int d = 0; d < 2; ++d) {
    for (double sign : {-1.0, 1.0}) {
      Point x = best.x;
      x[d] += sign * kProbeFraction * width[d];
      x = clamp_to(x, bounds);
      if (x == best.x) continue;
      if (std::abs(f(x) - best.f) >= kFlatThreshold) flat[d] = false;
    }
  }

  result.params = ReducedParams::from_beta(best.x[0], best.x[1]);
  result.objective = best.f;
  result.evaluations = f.evaluations;
  result.converged = converged;
  result.beta_flat = flat[0];
  result.phi_fe_flat = flat[1];
  result.flat_objective = flat[0] || flat[1];
  result.L_times_I_J = result.params.lambda() * options.Phi0;
  result.Phi_Fe = result.params.phi_fe() * options.Phi0;
  return result;
}

std::vector<Observation> observations_from_si(const std::vector<double>& H,
                                              const std::vector<double>& observable,
                                              ObservableKind kind, double Phi0,
                                              double coupling_area, double I_J) {
  if (H.size() != observable.size()) throw InvalidParameter("column lengths differ");
  if (!(Phi0 > 0.0)) throw InvalidParameter("Phi0 must be positive");
  if (!(coupling_area > 0.0)) throw InvalidParameter("coupling_area must be positive");
  if (kind == ObservableKind::Current && !(I_J > 0.0)) {
    throw InvalidParameter("I_J must be positive to reduce currents");
  }
  std::vector<Observation> out;
  out.reserve(H.size());
  for (std::size_t k = 0; k < H.size(); ++k) {
    const double phi_ext = kVacuumPermeability * H[k] * coupling_area / Phi0;
    const double obs =
        kind == ObservableKind::RemnantFlux ? observable[k] / Phi0 : observable[k] / I_J;
    out.push_back({phi_ext, obs, kind});
  }
  return out;
}

} // namespace fluxring
