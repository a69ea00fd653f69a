// SPDX-License-Identifier: Apache-2.0
#include "fluxring/fluxring.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <limits>
#include <memory>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include "fluxring/bloch_cpr.hpp"
#include "fluxring/csv.hpp"
#include "fluxring/errors.hpp"
#include "fluxring/fit.hpp"
#include "fluxring/fixed_points.hpp"
#include "fluxring/ring_model.hpp"
#include "fluxring/sweep.hpp"
#include "fluxring/wide_ring.hpp"

struct fluxring_fixed_points {
  std::vector<fluxring::FixedPointRow> rows;
};

struct fluxring_sweep {
  fluxring::ReducedParams params;
  fluxring::SweepTrajectory traj;
  bool is_loop = false;
  fluxring::HysteresisLoop loop;
};

struct fluxring_bloch_model {
  fluxring::FreeEnergyModel model;
};

struct fluxring_observations {
  std::vector<fluxring::Observation> data;
};

namespace {

thread_local std::string g_last_error;

template <class F>
fluxring_status guarded(F&& body) noexcept {
  try {
    g_last_error.clear();
    body();
    return FLUXRING_OK;
  } catch (const fluxring::InvalidParameter& e) {
    g_last_error = e.what();
    return FLUXRING_ERR_INVALID_ARGUMENT;
  } catch (const fluxring::NumericalFailure& e) {
    g_last_error = e.what();
    return FLUXRING_ERR_NUMERICAL;
  } catch (const fluxring::IoError& e) {
    g_last_error = e.what();
    return FLUXRING_ERR_IO;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return FLUXRING_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return FLUXRING_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return FLUXRING_ERR_INTERNAL;
  }
}

template <class T>
void require(const T* ptr, const char* name) {
  if (ptr == nullptr) throw fluxring::InvalidParameter(std::string(name) + " is null");
}

// snprintf-style: *length gets the full size, buf gets as much as fits.
void copy_out(const std::string& text, char* buf, size_t capacity, size_t* length) {
  require(length, "length");
  *length = text.size();
  if (buf == nullptr || capacity == 0) return;
  const size_t n = std::min(capacity - 1, text.size());
  std::memcpy(buf, text.data(), n);
  buf[n] = '\0';
}

fluxring::ReducedParams from_c(const fluxring_reduced_params* p) {
  require(p, "reduced params");
  return p->lambda > 0.0 ? fluxring::ReducedParams::from_lambda(p->lambda, p->phi_fe)
                         : fluxring::ReducedParams::from_beta(p->beta, p->phi_fe);
}

fluxring_reduced_params to_c(const fluxring::ReducedParams& p) {
  return {p.beta(), p.lambda(), p.phi_fe()};
}

fluxring::RingParams from_c(const fluxring_ring_params* p) {
  require(p, "ring params");
  return {p->L, p->I_J, p->Phi0, p->Phi_Fe, p->area_A};
}

fluxring_stability to_c(fluxring::Stability s) {
  switch (s) {
  case fluxring::Stability::Stable: return FLUXRING_STABLE;
  case fluxring::Stability::Unstable: return FLUXRING_UNSTABLE;
  case fluxring::Stability::Marginal: return FLUXRING_MARGINAL;
  }
  return FLUXRING_MARGINAL;
}

fluxring::ObservableKind from_c(fluxring_observable_kind k) {
  switch (k) {
  case FLUXRING_REMNANT_FLUX: return fluxring::ObservableKind::RemnantFlux;
  case FLUXRING_CURRENT: return fluxring::ObservableKind::Current;
  }
  throw fluxring::InvalidParameter("unknown observable kind");
}

} // namespace

extern "C" {

const char* fluxring_last_error(void) { return g_last_error.c_str(); }

const char* fluxring_version(void) { return "0.1.0"; }

double fluxring_codata_flux_quantum(void) { return fluxring::kFluxQuantum; }

fluxring_status fluxring_reduce(const fluxring_ring_params* params,
                                fluxring_reduced_params* out) {
  return guarded([&] {
    require(out, "out");
    *out = to_c(fluxring::reduce(from_c(params)));
  });
}

fluxring_status fluxring_reduced_from_beta(double beta, double phi_fe,
                                           fluxring_reduced_params* out) {
  return guarded([&] {
    require(out, "out");
    *out = to_c(fluxring::ReducedParams::from_beta(beta, phi_fe));
  });
}

double fluxring_josephson_current(double phi) { return fluxring::josephson_current(phi); }

fluxring_status fluxring_fluxoid(double Phi, double kappa, double m, double q, double* out) {
  return guarded([&] {
    require(out, "out");
    fluxring::FluxoidState s;
    s.Phi = Phi;
    s.kappa = kappa;
    if (m != 0.0 || q != 0.0) {
      s.m = m;
      s.q = q;
    }
    *out = fluxring::fluxoid(s);
  });
}

fluxring_status fluxring_quantization_index(double fluxoid_value, double Phi0, double tol,
                                           int64_t* n, double* deviation) {
  return guarded([&] {
    require(n, "n");
    require(deviation, "deviation");
    const auto q = fluxring::quantization_index(fluxoid_value, Phi0, tol);
    *n = q.n;
    *deviation = q.deviation;
  });
}

double fluxring_residual(double phi, double phi_ext, const fluxring_reduced_params* p) {
  double out = 0.0;
  if (guarded([&] { out = fluxring::residual(phi, phi_ext, from_c(p)); }) != FLUXRING_OK) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

fluxring_stability fluxring_classify_stability(double phi_star,
                                               const fluxring_reduced_params* p,
                                               double marginal_tol) {
  fluxring_stability out = FLUXRING_MARGINAL;
  guarded([&] { out = to_c(fluxring::classify_stability(phi_star, from_c(p), marginal_tol)); });
  return out;
}

fluxring_status fluxring_find_fixed_points(const double* phi_ext, size_t n,
                                           const fluxring_reduced_params* p, double tol,
                                           fluxring_fixed_points** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    if (n > 0) require(phi_ext, "phi_ext");
    const auto params = from_c(p);
    auto fps = std::make_unique<fluxring_fixed_points>();
    for (size_t k = 0; k < n; ++k) {
      for (const auto& fp : fluxring::find_fixed_points(phi_ext[k], params, tol)) {
        fps->rows.push_back({phi_ext[k], fp});
      }
    }
    *out = fps.release();
  });
}

size_t fluxring_fixed_points_count(const fluxring_fixed_points* fps) {
  return fps ? fps->rows.size() : 0;
}

fluxring_status fluxring_fixed_points_get(const fluxring_fixed_points* fps, size_t index,
                                          fluxring_fixed_point* out) {
  return guarded([&] {
    require(fps, "fixed points");
    require(out, "out");
    if (index >= fps->rows.size()) throw fluxring::InvalidParameter("index out of range");
    const auto& r = fps->rows[index];
    *out = {r.phi_ext, r.point.phi, r.point.i, to_c(r.point.stability)};
  });
}

fluxring_status fluxring_fixed_points_write_csv(const fluxring_fixed_points* fps,
                                                const char* path) {
  return guarded([&] {
    require(fps, "fixed points");
    require(path, "path");
    fluxring::write_fixed_points_csv(std::string(path), fps->rows);
  });
}

fluxring_status fluxring_fixed_points_format_csv(const fluxring_fixed_points* fps, char* buf,
                                                 size_t capacity, size_t* length) {
  return guarded([&] {
    require(fps, "fixed points");
    std::ostringstream os;
    fluxring::write_fixed_points_csv(os, fps->rows);
    copy_out(os.str(), buf, capacity, length);
  });
}

void fluxring_fixed_points_free(fluxring_fixed_points* fps) { delete fps; }

fluxring_status fluxring_fold_locations(const fluxring_reduced_params* p, double* phi_fold,
                                        double* phi_ext_fold, size_t capacity, size_t* count) {
  return guarded([&] {
    require(count, "count");
    const auto folds = fluxring::fold_locations(from_c(p));
    *count = folds.size();
    for (size_t k = 0; k < folds.size() && k < capacity; ++k) {
      if (phi_fold) phi_fold[k] = folds[k].phi;
      if (phi_ext_fold) phi_ext_fold[k] = folds[k].phi_ext;
    }
  });
}

fluxring_status fluxring_run_hysteresis(const fluxring_reduced_params* p, double amplitude,
                                        double step, double tol, fluxring_sweep** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    auto sw = std::make_unique<fluxring_sweep>();
    sw->params = from_c(p);
    sw->loop = fluxring::run_hysteresis(sw->params, amplitude, step, tol);
    sw->traj = sw->loop.cycle;
    sw->is_loop = true;
    *out = sw.release();
  });
}

fluxring_status fluxring_run_sweep(const fluxring_reduced_params* p, const double* waypoints,
                                   size_t n, double step, double tol, fluxring_sweep** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    if (n > 0) require(waypoints, "waypoints");
    auto sw = std::make_unique<fluxring_sweep>();
    sw->params = from_c(p);
    fluxring::SweepSchedule schedule{std::vector<double>(waypoints, waypoints + n), step};
    sw->traj = fluxring::run_sweep(sw->params, schedule, tol);
    *out = sw.release();
  });
}

fluxring_status fluxring_sweep_summary(const fluxring_sweep* sw, fluxring_loop_summary* out) {
  return guarded([&] {
    require(sw, "sweep");
    require(out, "out");
    *out = {};
    out->samples = sw->traj.samples.size();
    out->events = sw->traj.events.size();
    out->is_loop = sw->is_loop ? 1 : 0;
    if (sw->is_loop) {
      out->remnant_up = sw->loop.remnant_up;
      out->remnant_down = sw->loop.remnant_down;
      out->loop_area = sw->loop.loop_area;
    } else {
      out->loop_area = fluxring::enclosed_area(sw->traj);
    }
  });
}

fluxring_status fluxring_sweep_sample(const fluxring_sweep* sw, size_t index,
                                      fluxring_sample* out) {
  return guarded([&] {
    require(sw, "sweep");
    require(out, "out");
    if (index >= sw->traj.samples.size()) throw fluxring::InvalidParameter("index out of range");
    const auto& s = sw->traj.samples[index];
    const bool stable =
        fluxring::classify_stability(s.phi, sw->params) == fluxring::Stability::Stable;
    *out = {s.phi_ext, s.phi, s.i, s.branch_id, stable ? 1 : 0, s.jump ? 1 : 0};
  });
}

fluxring_status fluxring_sweep_event(const fluxring_sweep* sw, size_t index,
                                     fluxring_jump_event* out) {
  return guarded([&] {
    require(sw, "sweep");
    require(out, "out");
    if (index >= sw->traj.events.size()) throw fluxring::InvalidParameter("index out of range");
    const auto& e = sw->traj.events[index];
    *out = {e.phi_ext_at_jump, e.phi_before, e.phi_after, e.fold_refined ? 1 : 0,
            e.sample_index};
  });
}

fluxring_status fluxring_sweep_remnant_report(const fluxring_sweep* sw,
                                              const fluxring_ring_params* params,
                                              fluxring_remnant_report* out) {
  return guarded([&] {
    require(sw, "sweep");
    require(out, "out");
    if (!sw->is_loop) throw fluxring::InvalidParameter("remnant report needs a hysteresis loop");
    const auto r = fluxring::remnant_report(sw->loop, from_c(params));
    *out = {r.n_up, r.n_down, r.B_remnant_up, r.B_remnant_down, r.phi_up, r.phi_down};
  });
}

fluxring_status fluxring_sweep_write_csv(const fluxring_sweep* sw, const char* path) {
  return guarded([&] {
    require(sw, "sweep");
    require(path, "path");
    fluxring::write_sweep_csv(std::string(path), sw->traj, sw->params);
  });
}

fluxring_status fluxring_sweep_format_csv(const fluxring_sweep* sw, char* buf, size_t capacity,
                                          size_t* length) {
  return guarded([&] {
    require(sw, "sweep");
    std::ostringstream os;
    fluxring::write_sweep_csv(os, sw->traj, sw->params);
    copy_out(os.str(), buf, capacity, length);
  });
}

void fluxring_sweep_free(fluxring_sweep* sw) { delete sw; }

fluxring_status fluxring_wide_ring_currents(int64_t n, double H_over_Hc,
                                            const fluxring_ring_params* params,
                                            double* I_inner, double* I_outer) {
  return guarded([&] {
    require(I_inner, "I_inner");
    require(I_outer, "I_outer");
    const auto s = fluxring::currents_at(n, H_over_Hc, from_c(params));
    *I_inner = s.I_inner;
    *I_outer = s.I_outer;
  });
}

fluxring_status fluxring_remnant_field(int64_t n, const fluxring_ring_params* params,
                                       double* out) {
  return guarded([&] {
    require(out, "out");
    *out = fluxring::remnant_field(n, from_c(params));
  });
}

double fluxring_quantized_phase(int64_t n) { return fluxring::quantized_phase(n); }

fluxring_status fluxring_wide_ring_write_csv(int64_t n, size_t points,
                                             const fluxring_ring_params* params,
                                             const char* path) {
  return guarded([&] {
    require(path, "path");
    const auto rp = from_c(params);
    fluxring::write_wide_ring_csv(std::string(path), fluxring::wide_ring_table(n, points, rp),
                                  rp);
  });
}

fluxring_status fluxring_wide_ring_format_csv(int64_t n, size_t points,
                                              const fluxring_ring_params* params, char* buf,
                                              size_t capacity, size_t* length) {
  return guarded([&] {
    const auto rp = from_c(params);
    std::ostringstream os;
    fluxring::write_wide_ring_csv(os, fluxring::wide_ring_table(n, points, rp), rp);
    copy_out(os.str(), buf, capacity, length);
  });
}

fluxring_status fluxring_bloch_create(const double* coeffs, size_t k, double Phi0,
                                      fluxring_bloch_model** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    if (k > 0) require(coeffs, "coeffs");
    *out = new fluxring_bloch_model{
        fluxring::FreeEnergyModel(std::vector<double>(coeffs, coeffs + k), Phi0)};
  });
}

void fluxring_bloch_free(fluxring_bloch_model* model) { delete model; }

double fluxring_bloch_free_energy(const fluxring_bloch_model* model, double Phi) {
  return model ? model->model.free_energy(Phi) : std::numeric_limits<double>::quiet_NaN();
}

double fluxring_bloch_current(const fluxring_bloch_model* model, double Phi) {
  return model ? model->model.current(Phi) : std::numeric_limits<double>::quiet_NaN();
}

fluxring_status fluxring_bloch_fundamental(const fluxring_bloch_model* model, double* I0) {
  return guarded([&] {
    require(model, "model");
    require(I0, "I0");
    *I0 = fluxring::fundamental_harmonic(model->model);
  });
}

fluxring_status fluxring_bloch_check(const fluxring_bloch_model* model, size_t grid_size,
                                     fluxring_symmetry_report* out) {
  return guarded([&] {
    require(model, "model");
    require(out, "out");
    const auto sym = fluxring::validate_symmetries(model->model, grid_size);
    const auto fd = fluxring::check_current_derivative(model->model, grid_size);
    *out = {sym.grid_size,         sym.current_periodicity, sym.current_oddness,
            sym.energy_periodicity, sym.energy_evenness,    fd.max_relative_error,
            (sym.passed && fd.passed) ? 1 : 0};
  });
}

void fluxring_fit_defaults(fluxring_fit_bounds* bounds, fluxring_fit_options* options) {
  if (bounds) {
    const fluxring::FitBounds b;
    *bounds = {b.beta_min, b.beta_max, b.phi_fe_min, b.phi_fe_max};
  }
  if (options) {
    const fluxring::FitOptions o;
    *options = {o.tol, o.restarts, o.seed, o.step, o.max_evaluations, o.Phi0};
  }
}

fluxring_status fluxring_observations_create(const double* phi_ext, const double* observable,
                                             size_t n, fluxring_observable_kind kind,
                                             fluxring_observations** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    if (n > 0) {
      require(phi_ext, "phi_ext");
      require(observable, "observable");
    }
    const auto k = from_c(kind);
    auto obs = std::make_unique<fluxring_observations>();
    for (size_t j = 0; j < n; ++j) obs->data.push_back({phi_ext[j], observable[j], k});
    *out = obs.release();
  });
}

fluxring_status fluxring_observations_read_csv(const char* path, fluxring_observable_kind kind,
                                               double Phi0, double coupling_area, double I_J,
                                               fluxring_observations** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = nullptr;
    const auto k = from_c(kind);
    const auto rows = fluxring::read_observation_csv(std::string(path));
    auto obs = std::make_unique<fluxring_observations>();
    if (coupling_area > 0.0) {
      std::vector<double> H;
      std::vector<double> v;
      for (const auto& [a, b] : rows) {
        H.push_back(a);
        v.push_back(b);
      }
      obs->data = fluxring::observations_from_si(H, v, k, Phi0, coupling_area, I_J);
    } else {
      for (const auto& [a, b] : rows) obs->data.push_back({a, b, k});
    }
    *out = obs.release();
  });
}

size_t fluxring_observations_count(const fluxring_observations* obs) {
  return obs ? obs->data.size() : 0;
}

void fluxring_observations_free(fluxring_observations* obs) { delete obs; }

fluxring_status fluxring_simulate_observables(const fluxring_reduced_params* p,
                                              const fluxring_observations* obs, double step,
                                              double* out) {
  return guarded([&] {
    require(obs, "observations");
    if (obs->data.empty()) return;
    require(out, "out");
    fluxring::Protocol protocol;
    protocol.kind = obs->data.front().kind;
    protocol.step = step;
    for (const auto& o : obs->data) protocol.points.push_back(o.phi_ext);
    const auto pred = fluxring::simulate_observables(from_c(p), protocol);
    std::copy(pred.begin(), pred.end(), out);
  });
}

fluxring_status fluxring_fit(const fluxring_observations* obs,
                             const fluxring_reduced_params* initial,
                             const fluxring_fit_bounds* bounds,
                             const fluxring_fit_options* options, fluxring_fit_result* out) {
  return guarded([&] {
    require(obs, "observations");
    require(out, "out");
    fluxring::FitBounds b;
    if (bounds) b = {bounds->beta_min, bounds->beta_max, bounds->phi_fe_min, bounds->phi_fe_max};
    fluxring::FitOptions o;
    if (options) {
      o.tol = options->tol;
      o.restarts = options->restarts;
      o.seed = options->seed;
      o.step = options->step;
      o.max_evaluations = options->max_evaluations;
      o.Phi0 = options->Phi0;
    }
    const auto r = fluxring::fit_parameters(obs->data, from_c(initial), b, o);
    *out = {to_c(r.params),   r.objective,        r.initial_objective,
            r.iterations,     r.evaluations,      r.converged ? 1 : 0,
            r.flat_objective ? 1 : 0, r.beta_flat ? 1 : 0, r.phi_fe_flat ? 1 : 0,
            r.L_times_I_J,    r.Phi_Fe};
  });
}

} // extern "C"
