// SPDX-License-Identifier: Apache-2.0
//
// Lumped ring parameters, reduced (dimensionless) units, the sinusoidal
// current-phase relation and fluxoid arithmetic.
//
// Reduced units: flux in units of the flux quantum, current in units of the
// junction critical current. Everything downstream of reduce() works in
// these units; SI only appears at I/O boundaries.
#pragma once

#include <cstdint>
#include <numbers>

namespace fluxring {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

namespace codata {
// Exact SI defining constants (2019 redefinition).
inline constexpr double kPlanck = 6.62607015e-34;          // J s
inline constexpr double kElementaryCharge = 1.602176634e-19; // C
// CODATA 2018.
inline constexpr double kElectronMass = 9.1093837015e-31;  // kg
} // namespace codata

// h / (2e), about 2.067834e-15 Wb.
inline constexpr double kFluxQuantum =
    codata::kPlanck / (2.0 * codata::kElementaryCharge);

struct RingParams {
  double L = 0.0;           // self-inductance, H
  double I_J = 0.0;         // junction critical current, A
  double Phi0 = kFluxQuantum; // flux quantum, Wb
  double Phi_Fe = 0.0;      // shielded core flux, Wb (signed)
  double area_A = 0.0;      // inner ring area, m^2
};

// Dimensionless parameters. lambda = L I_J / Phi0 is stored; beta is always
// derived from it so that beta == 2 pi lambda holds exactly.
class ReducedParams {
public:
  ReducedParams() = default;

  static ReducedParams from_lambda(double lambda, double phi_fe);
  static ReducedParams from_beta(double beta, double phi_fe);

  double lambda() const noexcept { return lambda_; }
  double beta() const noexcept { return kTwoPi * lambda_; }
  double phi_fe() const noexcept { return phi_fe_; }

  // Same ring with a different bias flux.
  ReducedParams with_phi_fe(double phi_fe) const;

private:
  ReducedParams(double lambda, double phi_fe) : lambda_(lambda), phi_fe_(phi_fe) {}
  double lambda_ = 0.0;
  double phi_fe_ = 0.0;
};

// Throws InvalidParameter unless L, I_J and Phi0 are positive and finite
// and Phi_Fe is finite.
ReducedParams reduce(const RingParams& params);

// sin(2 pi x) and cos(2 pi x) with exact reduction of x to [-1/2, 1/2]:
// exactly periodic, exactly odd/even, and zero at integers.
double sin_two_pi(double x) noexcept;
double cos_two_pi(double x) noexcept;

// Reduced supercurrent i = sin(2 pi phi); the physical current is I_J * i.
inline double josephson_current(double phi) noexcept { return sin_two_pi(phi); }

struct FluxoidState {
  double Phi = 0.0;   // enclosed flux, Wb
  double kappa = 0.0; // superfluid circulation, m^2/s
  double m = 2.0 * codata::kElectronMass;         // carrier mass, kg
  double q = 2.0 * codata::kElementaryCharge;     // carrier charge, C
};

// Phi + (m/q) kappa. Throws InvalidParameter when q == 0.
double fluxoid(const FluxoidState& state);

struct QuantizationIndex {
  std::int64_t n = 0;
  double deviation = 0.0; // |value/Phi0 - n|, in [0, 0.5]
  bool within_tol = false; // deviation <= tol
};

// Nearest flux-quantum count and the distance from it. Throws
// InvalidParameter for Phi0 <= 0 or tol < 0.
QuantizationIndex quantization_index(double fluxoid_value, double Phi0,
                                     double tol = 0.0);

} // namespace fluxring
