// SPDX-License-Identifier: Apache-2.0
#include "fluxring/ring_model.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "fluxring/errors.hpp"

namespace fluxring {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw InvalidParameter(std::string(name) + " must be positive and finite, got " +
                           std::to_string(value));
  }
}

void require_finite(double value, const char* name) {
  if (!std::isfinite(value)) {
    throw InvalidParameter(std::string(name) + " must be finite");
  }
}

// x - round(x) is exact in binary floating point, so the reduced argument
// carries no extra rounding.
double reduce_period(double x) noexcept { return x - std::round(x); }

} // namespace

ReducedParams ReducedParams::from_lambda(double lambda, double phi_fe) {
  require_positive(lambda, "lambda");
  require_finite(phi_fe, "phi_fe");
  return ReducedParams(lambda, phi_fe);
}

ReducedParams ReducedParams::from_beta(double beta, double phi_fe) {
  require_positive(beta, "beta");
  return from_lambda(beta / kTwoPi, phi_fe);
}

ReducedParams ReducedParams::with_phi_fe(double phi_fe) const {
  require_finite(phi_fe, "phi_fe");
  return ReducedParams(lambda_, phi_fe);
}

ReducedParams reduce(const RingParams& params) {
  require_positive(params.L, "L");
  require_positive(params.I_J, "I_J");
  require_positive(params.Phi0, "Phi0");
  require_finite(params.Phi_Fe, "Phi_Fe");
  return ReducedParams::from_lambda(params.L * params.I_J / params.Phi0,
                                    params.Phi_Fe / params.Phi0);
}

double sin_two_pi(double x) noexcept {
  if (!std::isfinite(x)) return std::numeric_limits<double>::quiet_NaN();
  return std::sin(kTwoPi * reduce_period(x));
}

double cos_two_pi(double x) noexcept {
  if (!std::isfinite(x)) return std::numeric_limits<double>::quiet_NaN();
  return std::cos(kTwoPi * reduce_period(x));
}

double fluxoid(const FluxoidState& state) {
  if (state.q == 0.0) throw InvalidParameter("carrier charge q must be nonzero");
  return state.Phi + (state.m / state.q) * state.kappa;
}

QuantizationIndex quantization_index(double fluxoid_value, double Phi0, double tol) {
  require_positive(Phi0, "Phi0");
  if (!(tol >= 0.0)) throw InvalidParameter("tol must be nonnegative");
  require_finite(fluxoid_value, "fluxoid value");
  const double x = fluxoid_value / Phi0;
  const double n = std::round(x);
  QuantizationIndex out;
  out.n = static_cast<std::int64_t>(n);
  out.deviation = std::abs(x - n);
  out.within_tol = out.deviation <= tol;
  return out;
}

} // namespace fluxring
