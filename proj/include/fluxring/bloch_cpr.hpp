// SPDX-License-Identifier: Apache-2.0
//
// Flux-periodic free energy of a thin ring as a cosine series,
//
//     F(Phi) = sum_k c_k cos(2 pi k Phi / Phi0),
//
// and the current it implies, I = -dF/dPhi. Only cosine terms are
// representable, so F is even and Phi0-periodic by construction and I is odd
// and periodic. The leading sine term of I is the Josephson relation with
// amplitude 2 pi c_1 / Phi0.
#pragma once

#include <cstddef>
#include <vector>

#include "fluxring/fixed_points.hpp"
#include "fluxring/ring_model.hpp"

namespace fluxring {

class FreeEnergyModel {
public:
  // coeffs[k-1] is c_k in joules. Throws InvalidParameter for Phi0 <= 0 or
  // non-finite coefficients. An empty series is allowed but has no
  // fundamental harmonic.
  FreeEnergyModel(std::vector<double> coeffs, double Phi0 = kFluxQuantum);

  const std::vector<double>& coeffs() const noexcept { return coeffs_; }
  double Phi0() const noexcept { return phi0_; }
  std::size_t harmonics() const noexcept { return coeffs_.size(); }

  double free_energy(double Phi) const noexcept;
  // Analytic -dF/dPhi.
  double current(double Phi) const noexcept;
  // dI/dPhi.
  double current_slope(double Phi) const noexcept;
  // sum_k |c_k| 2 pi k / Phi0, an upper bound on |I|.
  double current_scale() const noexcept;

private:
  std::vector<double> coeffs_;
  double phi0_;
};

// 2 pi c_1 / Phi0, signed. Throws InvalidParameter for an empty series.
double fundamental_harmonic(const FreeEnergyModel& model);

struct SymmetryReport {
  std::size_t grid_size = 0;
  // Max deviations, relative to current_scale() for I and sum |c_k| for F.
  double current_periodicity = 0.0; // I(Phi + Phi0) vs I(Phi)
  double current_oddness = 0.0;     // I(-Phi) vs -I(Phi)
  double energy_periodicity = 0.0;
  double energy_evenness = 0.0;
  double tolerance = 1e-12;
  bool passed = false;
};

// Uniform grid of grid_size points over [-Phi0, Phi0). Throws
// InvalidParameter when grid_size < 16.
SymmetryReport validate_symmetries(const FreeEnergyModel& model, std::size_t grid_size);

struct DerivativeReport {
  double step = 0.0;              // finite-difference step, Wb
  double max_relative_error = 0.0; // relative to current_scale()
  double tolerance = 1e-6;
  bool passed = false;
};

// Central difference of free_energy against the analytic current over two
// periods, step h = 1e-6 Phi0 unless given.
DerivativeReport check_current_derivative(const FreeEnergyModel& model, std::size_t grid_size,
                                          double step = 0.0);

// Self-induced reduced flux L I(Phi0 phi) / Phi0 of a ring with inductance
// L carrying this model's current, for use with the generic fixed-point
// finder.
FluxResponse flux_response(const FreeEnergyModel& model, double L);

} // namespace fluxring
