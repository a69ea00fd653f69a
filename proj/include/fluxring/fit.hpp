// SPDX-License-Identifier: Apache-2.0
//
// Estimation of (beta, phi_fe) from hysteresis measurements by least
// squares against the sweep forward model. The forward map jumps where the
// branch structure changes, so the optimizer is a bounded Nelder-Mead
// simplex with restarts.
#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fluxring/fixed_points.hpp"
#include "fluxring/ring_model.hpp"

namespace fluxring {

enum class ObservableKind {
  // Reduced flux read at zero applied field after an excursion to phi_ext.
  RemnantFlux,
  // Reduced current read while held at phi_ext.
  Current,
};

struct Observation {
  double phi_ext = 0.0;
  double observable = 0.0;
  ObservableKind kind = ObservableKind::RemnantFlux;
};

// A measurement run starting from the virgin state at zero field. For
// RemnantFlux each point is an excursion 0 -> point -> 0 read at the end;
// for Current the points are visited in order and read on arrival. History
// carries over between points in both cases.
struct Protocol {
  ObservableKind kind = ObservableKind::RemnantFlux;
  std::vector<double> points;
  double step = 0.5; // sub-step; the prediction does not depend on it
};

std::vector<double> simulate_observables(const ReducedParams& p, const Protocol& protocol,
                                         double tol = kDefaultRootTol);

struct FitBounds {
  double beta_min = 0.1;
  double beta_max = 20.0;
  double phi_fe_min = -0.5;
  double phi_fe_max = 0.5;
};

struct FitOptions {
  double tol = 1e-10;         // relative objective spread for convergence
  int restarts = 2;           // random restarts after the initial run
  std::uint64_t seed = 20121; // restart RNG seed
  double step = 0.5;
  std::size_t max_evaluations = 3000; // per simplex run
  double Phi0 = kFluxQuantum; // for the SI back-conversion
};

struct FitResult {
  ReducedParams params;
  double objective = 0.0;
  double initial_objective = 0.0;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  bool converged = false;
  // The objective changes by less than 1e-12 across a probe simplex around
  // the optimum along at least one axis.
  bool flat_objective = false;
  bool beta_flat = false;
  bool phi_fe_flat = false;
  // SI back-conversion. Only the product L * I_J is identifiable.
  double L_times_I_J = 0.0; // Wb
  double Phi_Fe = 0.0;      // Wb
};

// Sum of squared residuals of `data` against the forward model.
double fit_objective(const std::vector<Observation>& data, const ReducedParams& p,
                     double step = 0.5, double tol = kDefaultRootTol);

// Throws InvalidParameter for fewer than 3 observations, mixed kinds,
// inconsistent bounds or an initial point outside them. Throws
// NumericalFailure if the objective turns non-finite; the message carries
// the last finite iterate.
FitResult fit_parameters(const std::vector<Observation>& data, const ReducedParams& initial,
                         const FitBounds& bounds, const FitOptions& options = {});

// Converts SI rows (applied field H in A/m, observable in Wb or A) to reduced
// observations. The applied flux is mu0 H coupling_area.
std::vector<Observation> observations_from_si(const std::vector<double>& H,
                                              const std::vector<double>& observable,
                                              ObservableKind kind, double Phi0,
                                              double coupling_area, double I_J);

inline constexpr double kVacuumPermeability = 1.25663706212e-6; // CODATA 2018, N/A^2

} // namespace fluxring
