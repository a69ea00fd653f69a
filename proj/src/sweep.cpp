// SPDX-License-Identifier: Apache-2.0
#include "fluxring/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

#include "fluxring/errors.hpp"
#include "fluxring/wide_ring.hpp"

namespace fluxring {

namespace {

// Landing-site ordering: distance to target, then |i|, then phi.
bool closer(const FixedPoint& a, const FixedPoint& b, double target) {
  return std::make_tuple(std::abs(a.phi - target), std::abs(a.i), a.phi) <
         std::make_tuple(std::abs(b.phi - target), std::abs(b.i), b.phi);
}

std::int64_t branch_id_of(double phi, const ReducedParams& p) {
  const auto band = stable_band_containing(phi, p);
  return band ? band->id : 0;
}

// Roots of g at a given bias (phi_ext + phi_fe already summed).
std::vector<FixedPoint> roots_at_bias(double bias, const ReducedParams& p, double tol) {
  return find_fixed_points(bias, p.with_phi_fe(0.0), tol);
}

// Continuation in bias space. The band is monotone for g, so the branch
// exists at `bias` iff g changes sign across the band edges.
ContinuationResult continue_at_bias(double phi, double bias, const ReducedParams& p,
                                    double phi_fe) {
  const auto band = stable_band_containing(phi, p);
  if (!band) {
    throw InvalidParameter("continuation must start on a stable branch, phi = " +
                           std::to_string(phi));
  }
  const double lambda = p.lambda();
  const auto g = [bias, lambda](double x) { return x - bias - lambda * sin_two_pi(x); };

  double lo;
  double hi;
  if (band->bounded) {
    lo = band->lo;
    hi = band->hi;
    const double glo = g(lo);
    const double ghi = g(hi);
    if (!(glo < 0.0) || !(ghi > 0.0)) {
      const double edge = !(glo < 0.0) ? lo : hi;
      FoldSignal fold;
      fold.phi_before = edge;
      fold.bias_at_fold = edge - lambda * sin_two_pi(edge);
      fold.phi_ext_at_fold = fold.bias_at_fold - phi_fe;
      fold.branch_id = band->id;
      fold.direction = edge == hi ? +1 : -1;
      return fold;
    }
  } else {
    lo = bias - lambda - kWindowMargin;
    hi = bias + lambda + kWindowMargin;
  }

  double glo = g(lo);
  for (int it = 0; it < 2000; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const double gm = g(mid);
    if (gm == 0.0) {
      lo = hi = mid;
      break;
    }
    if ((gm < 0.0) == (glo < 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  const double root = std::abs(g(lo)) <= std::abs(g(hi)) ? lo : hi;
  if (!std::isfinite(root)) throw NumericalFailure("continuation produced a non-finite root");
  return FixedPoint{root, josephson_current(root), classify_stability(root, p)};
}

FixedPoint resolve_at_bias(const FoldSignal& fold, const ReducedParams& p, double tol) {
  const auto roots = roots_at_bias(fold.bias_at_fold, p, tol);
  const FixedPoint* best = nullptr;
  for (const auto& r : roots) {
    if (r.stability != Stability::Stable) continue;
    const auto band = stable_band_containing(r.phi, p);
    if (!band || band->id == fold.branch_id) continue;
    if (!best || closer(r, *best, fold.phi_before)) best = &r;
  }
  if (!best) throw NumericalFailure("no stable landing site after fold");
  FixedPoint out = *best;
  out.stability = classify_stability(out.phi, p);
  return out;
}

FixedPoint nearest_stable(double bias, double target, const ReducedParams& p, double tol) {
  const auto roots = roots_at_bias(bias, p, tol);
  const FixedPoint* best = nullptr;
  for (const auto& r : roots) {
    if (r.stability != Stability::Stable) continue;
    if (!best || closer(r, *best, target)) best = &r;
  }
  // beta == 1 exactly: the unique root can be marginal.
  if (!best) {
    for (const auto& r : roots) {
      if (r.stability == Stability::Unstable) continue;
      if (!best || closer(r, *best, target)) best = &r;
    }
  }
  if (!best) throw NumericalFailure("no stable fixed point at the initial applied flux");
  return *best;
}

void validate_schedule(const SweepSchedule& s) {
  if (!(s.step > 0.0) || !std::isfinite(s.step)) {
    throw InvalidParameter("sweep step must be positive and finite");
  }
  if (s.waypoints.empty()) throw InvalidParameter("sweep schedule has no waypoints");
  for (std::size_t k = 0; k < s.waypoints.size(); ++k) {
    if (!std::isfinite(s.waypoints[k])) throw InvalidParameter("waypoints must be finite");
    if (k > 0 && s.waypoints[k] == s.waypoints[k - 1]) {
      throw InvalidParameter("consecutive waypoints must differ");
    }
  }
}

SweepSample make_sample(double phi_ext, const FixedPoint& fp, const ReducedParams& p,
                        std::size_t leg, bool jump) {
  return {phi_ext, fp.phi, fp.i, branch_id_of(fp.phi, p), leg, jump};
}

SweepTrajectory select_legs(const SweepTrajectory& full, bool ascending) {
  SweepTrajectory out;
  std::vector<std::size_t> remap(full.samples.size(), full.samples.size());
  for (std::size_t k = 0; k < full.samples.size(); ++k) {
    const auto& s = full.samples[k];
    // Legs alternate direction within a hysteresis cycle: 1 and 4 ascend.
    const bool leg_ascends = s.leg == 1 || s.leg == 4;
    if (s.leg == 0 || leg_ascends != ascending) continue;
    remap[k] = out.samples.size();
    out.samples.push_back(s);
  }
  for (const auto& e : full.events) {
    if (remap[e.sample_index] == full.samples.size()) continue;
    JumpEvent ev = e;
    ev.sample_index = remap[e.sample_index];
    out.events.push_back(ev);
  }
  return out;
}

} // namespace

ContinuationResult continue_branch(const BranchState& state, double phi_ext_next,
                                   const ReducedParams& p, double /*tol*/) {
  if (!std::isfinite(phi_ext_next)) throw InvalidParameter("phi_ext must be finite");
  if (phi_ext_next == state.phi_ext) {
    return FixedPoint{state.phi, josephson_current(state.phi),
                      classify_stability(state.phi, p)};
  }
  return continue_at_bias(state.phi, phi_ext_next + p.phi_fe(), p, p.phi_fe());
}

FixedPoint resolve_jump(const FoldSignal& fold, const ReducedParams& p, double tol) {
  return resolve_at_bias(fold, p, tol);
}

FixedPoint virgin_state(double phi_ext, const ReducedParams& p, double tol) {
  return nearest_stable(phi_ext + p.phi_fe(), 0.0, p, tol);
}

SweepTrajectory run_sweep(const ReducedParams& p, const SweepSchedule& schedule, double tol,
                          std::optional<double> initial_phi) {
  validate_schedule(schedule);
  const double phi_fe = p.phi_fe();
  const auto& w = schedule.waypoints;

  std::vector<double> bias(w.size());
  for (std::size_t k = 0; k < w.size(); ++k) bias[k] = w[k] + phi_fe;

  SweepTrajectory traj;
  FixedPoint cur = nearest_stable(bias[0], initial_phi.value_or(0.0), p, tol);
  traj.samples.push_back(make_sample(w[0], cur, p, 0, false));
  double c_cur = bias[0];

  for (std::size_t leg = 1; leg < w.size(); ++leg) {
    const double x0 = w[leg - 1];
    const double x1 = w[leg];
    const double c0 = bias[leg - 1];
    const double c1 = bias[leg];
    // Sub-steps are laid out in bias space so that moving flux between
    // phi_ext and phi_fe reproduces the same path bit for bit.
    const auto n = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(std::abs(c1 - c0) / schedule.step)));

    for (std::size_t j = 1; j <= n; ++j) {
      const double frac = static_cast<double>(j) / static_cast<double>(n);
      const double x = j == n ? x1 : x0 + (x1 - x0) * frac;
      const double c = j == n ? c1 : c0 + (c1 - c0) * frac;

      for (int guard = 0;; ++guard) {
        if (guard > 10000) throw NumericalFailure("too many jumps within one sub-step");
        auto step = continue_at_bias(cur.phi, c, p, phi_fe);
        if (auto* fp = std::get_if<FixedPoint>(&step)) {
          cur = *fp;
          traj.samples.push_back(make_sample(x, cur, p, leg, false));
          c_cur = c;
          break;
        }
        auto fold = std::get<FoldSignal>(step);
        // The closed-form fold lies between the two sub-step biases up to
        // rounding; keep it there.
        fold.bias_at_fold = std::clamp(fold.bias_at_fold, std::min(c_cur, c),
                                       std::max(c_cur, c));
        fold.phi_ext_at_fold = fold.bias_at_fold - phi_fe;
        const FixedPoint landed = resolve_at_bias(fold, p, tol);
        traj.samples.push_back(make_sample(fold.phi_ext_at_fold, landed, p, leg, true));
        traj.events.push_back({fold.phi_ext_at_fold, fold.phi_before, landed.phi, true,
                               traj.samples.size() - 1});
        cur = landed;
        c_cur = fold.bias_at_fold;
      }
    }
  }
  return traj;
}

double enclosed_area(const SweepTrajectory& traj) {
  const auto& s = traj.samples;
  if (s.size() < 2) return 0.0;
  std::vector<const JumpEvent*> at(s.size(), nullptr);
  for (const auto& e : traj.events) {
    if (e.sample_index < s.size()) at[e.sample_index] = &e;
  }
  double sum = 0.0; // sum of i d(phi_ext)
  double x = s[0].phi_ext;
  double y = s[0].i;
  for (std::size_t k = 1; k < s.size(); ++k) {
    if (at[k]) {
      const double xf = at[k]->phi_ext_at_jump;
      const double yf = josephson_current(at[k]->phi_before);
      sum += 0.5 * (y + yf) * (xf - x);
      x = xf;
      y = yf;
    }
    sum += 0.5 * (y + s[k].i) * (s[k].phi_ext - x);
    x = s[k].phi_ext;
    y = s[k].i;
  }
  return -sum;
}

HysteresisLoop run_hysteresis(const ReducedParams& p, double amplitude, double step,
                              double tol) {
  if (!(amplitude > 0.0) || !std::isfinite(amplitude)) {
    throw InvalidParameter("amplitude must be positive and finite");
  }
  if (!(step > 0.0) || !std::isfinite(step)) throw InvalidParameter("step must be positive");

  HysteresisLoop loop;
  loop.cycle = run_sweep(p, {{0.0, amplitude, 0.0, -amplitude, 0.0}, step}, tol);
  for (const auto& s : loop.cycle.samples) {
    if (s.leg == 2) loop.remnant_down = s.phi;
    if (s.leg == 4) loop.remnant_up = s.phi;
  }
  loop.up = select_legs(loop.cycle, true);
  loop.down = select_legs(loop.cycle, false);
  loop.loop_area = enclosed_area(loop.cycle);
  return loop;
}

RemnantReport remnant_report(const HysteresisLoop& loop, const RingParams& params) {
  RemnantReport r;
  r.phi_up = loop.remnant_up;
  r.phi_down = loop.remnant_down;
  r.n_up = static_cast<std::int64_t>(std::llround(loop.remnant_up));
  r.n_down = static_cast<std::int64_t>(std::llround(loop.remnant_down));
  r.B_remnant_up = remnant_field(r.n_up, params);
  r.B_remnant_down = remnant_field(r.n_down, params);
  return r;
}

} // namespace fluxring
