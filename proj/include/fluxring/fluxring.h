/* SPDX-License-Identifier: Apache-2.0 */
/*
 * C interface to the fluxring library.
 *
 * Every fallible call returns a fluxring_status; on failure a description is
 * available from fluxring_last_error() on the same thread until the next
 * call. Result sets are opaque handles owned by the caller and released with
 * the matching *_free function (passing NULL is a no-op).
 *
 * The *_format_csv functions follow snprintf: *length receives the full text
 * size (excluding the terminator) and at most capacity - 1 bytes plus a NUL
 * are stored in buf, which may be NULL when capacity is 0.
 *
 * Units: "reduced" flux is in units of the flux quantum, "reduced" current
 * in units of the junction critical current. Ring parameters are SI.
 */
#ifndef FLUXRING_H
#define FLUXRING_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(FLUXRING_BUILDING_LIBRARY)
#    define FLUXRING_API __declspec(dllexport)
#  else
#    define FLUXRING_API __declspec(dllimport)
#  endif
#else
#  define FLUXRING_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fluxring_status {
  FLUXRING_OK = 0,
  FLUXRING_ERR_INVALID_ARGUMENT = 1,
  FLUXRING_ERR_NUMERICAL = 2,
  FLUXRING_ERR_IO = 3,
  FLUXRING_ERR_INTERNAL = 4
} fluxring_status;

typedef enum fluxring_stability {
  FLUXRING_STABLE = 0,
  FLUXRING_UNSTABLE = 1,
  FLUXRING_MARGINAL = 2
} fluxring_stability;

typedef enum fluxring_observable_kind {
  FLUXRING_REMNANT_FLUX = 0,
  FLUXRING_CURRENT = 1
} fluxring_observable_kind;

typedef struct fluxring_ring_params {
  double L;      /* H */
  double I_J;    /* A */
  double Phi0;   /* Wb */
  double Phi_Fe; /* Wb, signed */
  double area_A; /* m^2 */
} fluxring_ring_params;

/* As input, lambda is used when positive and beta otherwise. */
typedef struct fluxring_reduced_params {
  double beta;   /* 2 pi lambda */
  double lambda; /* L I_J / Phi0 */
  double phi_fe; /* Phi_Fe / Phi0 */
} fluxring_reduced_params;

typedef struct fluxring_fixed_point {
  double phi_ext;
  double phi;
  double i;
  fluxring_stability stability;
} fluxring_fixed_point;

typedef struct fluxring_sample {
  double phi_ext;
  double phi;
  double i;
  int64_t branch_id;
  int stable;
  int jump;
} fluxring_sample;

typedef struct fluxring_jump_event {
  double phi_ext_at_jump;
  double phi_before;
  double phi_after;
  int fold_refined;
  size_t sample_index;
} fluxring_jump_event;

typedef struct fluxring_loop_summary {
  double remnant_up;
  double remnant_down;
  double loop_area;
  size_t samples;
  size_t events;
  int is_loop; /* 0 for a plain sweep, where the remnant fields are unset */
} fluxring_loop_summary;

typedef struct fluxring_remnant_report {
  int64_t n_up;
  int64_t n_down;
  double B_remnant_up;   /* T */
  double B_remnant_down; /* T */
  double phi_up;
  double phi_down;
} fluxring_remnant_report;

typedef struct fluxring_symmetry_report {
  size_t grid_size;
  double current_periodicity;
  double current_oddness;
  double energy_periodicity;
  double energy_evenness;
  double derivative_error; /* central difference vs analytic current */
  int passed;
} fluxring_symmetry_report;

typedef struct fluxring_fit_bounds {
  double beta_min;
  double beta_max;
  double phi_fe_min;
  double phi_fe_max;
} fluxring_fit_bounds;

typedef struct fluxring_fit_options {
  double tol;
  int restarts;
  uint64_t seed;
  double step;
  size_t max_evaluations;
  double Phi0;
} fluxring_fit_options;

typedef struct fluxring_fit_result {
  fluxring_reduced_params params;
  double objective;
  double initial_objective;
  size_t iterations;
  size_t evaluations;
  int converged;
  int flat_objective;
  int beta_flat;
  int phi_fe_flat;
  double L_times_I_J; /* Wb */
  double Phi_Fe;      /* Wb */
} fluxring_fit_result;

typedef struct fluxring_fixed_points fluxring_fixed_points;
typedef struct fluxring_sweep fluxring_sweep;
typedef struct fluxring_bloch_model fluxring_bloch_model;
typedef struct fluxring_observations fluxring_observations;

FLUXRING_API const char* fluxring_last_error(void);
FLUXRING_API const char* fluxring_version(void);

/* ring model */
FLUXRING_API double fluxring_codata_flux_quantum(void);
FLUXRING_API fluxring_status fluxring_reduce(const fluxring_ring_params* params,
                                             fluxring_reduced_params* out);
FLUXRING_API fluxring_status fluxring_reduced_from_beta(double beta, double phi_fe,
                                                        fluxring_reduced_params* out);
FLUXRING_API double fluxring_josephson_current(double phi);
/* Pass m = 0 and q = 0 to use Cooper-pair defaults (2 m_e, 2e). */
FLUXRING_API fluxring_status fluxring_fluxoid(double Phi, double kappa, double m, double q,
                                              double* out);
FLUXRING_API fluxring_status fluxring_quantization_index(double fluxoid_value, double Phi0,
                                                        double tol, int64_t* n,
                                                        double* deviation);

/* fixed points */
FLUXRING_API double fluxring_residual(double phi, double phi_ext,
                                      const fluxring_reduced_params* p);
FLUXRING_API fluxring_stability fluxring_classify_stability(double phi_star,
                                                            const fluxring_reduced_params* p,
                                                            double marginal_tol);
/* Roots at each of the n applied-flux values, concatenated in input order. */
FLUXRING_API fluxring_status fluxring_find_fixed_points(const double* phi_ext, size_t n,
                                                        const fluxring_reduced_params* p,
                                                        double tol,
                                                        fluxring_fixed_points** out);
FLUXRING_API size_t fluxring_fixed_points_count(const fluxring_fixed_points* fps);
FLUXRING_API fluxring_status fluxring_fixed_points_get(const fluxring_fixed_points* fps,
                                                       size_t index, fluxring_fixed_point* out);
FLUXRING_API fluxring_status fluxring_fixed_points_write_csv(const fluxring_fixed_points* fps,
                                                             const char* path);
FLUXRING_API fluxring_status fluxring_fixed_points_format_csv(const fluxring_fixed_points* fps,
                                                              char* buf, size_t capacity,
                                                              size_t* length);
FLUXRING_API void fluxring_fixed_points_free(fluxring_fixed_points* fps);
/* Up to `capacity` (phi_fold, phi_ext_fold) pairs; *count receives how many exist. */
FLUXRING_API fluxring_status fluxring_fold_locations(const fluxring_reduced_params* p,
                                                     double* phi_fold, double* phi_ext_fold,
                                                     size_t capacity, size_t* count);

/* sweeps */
FLUXRING_API fluxring_status fluxring_run_hysteresis(const fluxring_reduced_params* p,
                                                     double amplitude, double step, double tol,
                                                     fluxring_sweep** out);
FLUXRING_API fluxring_status fluxring_run_sweep(const fluxring_reduced_params* p,
                                                const double* waypoints, size_t n, double step,
                                                double tol, fluxring_sweep** out);
FLUXRING_API fluxring_status fluxring_sweep_summary(const fluxring_sweep* sw,
                                                    fluxring_loop_summary* out);
FLUXRING_API fluxring_status fluxring_sweep_sample(const fluxring_sweep* sw, size_t index,
                                                   fluxring_sample* out);
FLUXRING_API fluxring_status fluxring_sweep_event(const fluxring_sweep* sw, size_t index,
                                                  fluxring_jump_event* out);
FLUXRING_API fluxring_status fluxring_sweep_remnant_report(const fluxring_sweep* sw,
                                                           const fluxring_ring_params* params,
                                                           fluxring_remnant_report* out);
FLUXRING_API fluxring_status fluxring_sweep_write_csv(const fluxring_sweep* sw,
                                                      const char* path);
FLUXRING_API fluxring_status fluxring_sweep_format_csv(const fluxring_sweep* sw, char* buf,
                                                       size_t capacity, size_t* length);
FLUXRING_API void fluxring_sweep_free(fluxring_sweep* sw);

/* wide ring */
FLUXRING_API fluxring_status fluxring_wide_ring_currents(int64_t n, double H_over_Hc,
                                                         const fluxring_ring_params* params,
                                                         double* I_inner, double* I_outer);
FLUXRING_API fluxring_status fluxring_remnant_field(int64_t n,
                                                    const fluxring_ring_params* params,
                                                    double* out);
FLUXRING_API double fluxring_quantized_phase(int64_t n);
FLUXRING_API fluxring_status fluxring_wide_ring_write_csv(int64_t n, size_t points,
                                                          const fluxring_ring_params* params,
                                                          const char* path);

FLUXRING_API fluxring_status fluxring_wide_ring_format_csv(int64_t n, size_t points,
                                                           const fluxring_ring_params* params,
                                                           char* buf, size_t capacity,
                                                           size_t* length);

/* Bloch free-energy model */
FLUXRING_API fluxring_status fluxring_bloch_create(const double* coeffs, size_t k,
                                                   double Phi0, fluxring_bloch_model** out);
FLUXRING_API void fluxring_bloch_free(fluxring_bloch_model* model);
FLUXRING_API double fluxring_bloch_free_energy(const fluxring_bloch_model* model, double Phi);
FLUXRING_API double fluxring_bloch_current(const fluxring_bloch_model* model, double Phi);
FLUXRING_API fluxring_status fluxring_bloch_fundamental(const fluxring_bloch_model* model,
                                                        double* I0);
FLUXRING_API fluxring_status fluxring_bloch_check(const fluxring_bloch_model* model,
                                                  size_t grid_size,
                                                  fluxring_symmetry_report* out);

/* fitting */
FLUXRING_API void fluxring_fit_defaults(fluxring_fit_bounds* bounds,
                                        fluxring_fit_options* options);
FLUXRING_API fluxring_status fluxring_observations_create(const double* phi_ext,
                                                          const double* observable, size_t n,
                                                          fluxring_observable_kind kind,
                                                          fluxring_observations** out);
/* Reads a `phi_ext,observable` CSV. With coupling_area > 0 the columns are
 * taken as SI (H in A/m; flux in Wb or current in A) and reduced with Phi0,
 * coupling_area and I_J; otherwise they are already reduced. */
FLUXRING_API fluxring_status fluxring_observations_read_csv(const char* path,
                                                            fluxring_observable_kind kind,
                                                            double Phi0, double coupling_area,
                                                            double I_J,
                                                            fluxring_observations** out);
FLUXRING_API size_t fluxring_observations_count(const fluxring_observations* obs);
FLUXRING_API void fluxring_observations_free(fluxring_observations* obs);
/* `out` must hold fluxring_observations_count(obs) values. */
FLUXRING_API fluxring_status fluxring_simulate_observables(const fluxring_reduced_params* p,
                                                           const fluxring_observations* obs,
                                                           double step, double* out);
FLUXRING_API fluxring_status fluxring_fit(const fluxring_observations* obs,
                                          const fluxring_reduced_params* initial,
                                          const fluxring_fit_bounds* bounds,
                                          const fluxring_fit_options* options,
                                          fluxring_fit_result* out);

#ifdef __cplusplus
}
#endif

#endif /* FLUXRING_H */
