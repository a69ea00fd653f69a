// SPDX-License-Identifier: Apache-2.0
#include "fluxring/wide_ring.hpp"

#include <cmath>
#include <string>

#include "fluxring/errors.hpp"

namespace fluxring {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InvalidParameter(std::string(name) + " must be positive and finite");
  }
}

} // namespace

WideRingState currents_at(std::int64_t n, double H_over_Hc, const RingParams& params) {
  if (!(H_over_Hc >= 0.0 && H_over_Hc <= 1.0)) {
    throw InvalidParameter("H_over_Hc must lie in [0, 1]");
  }
  require_positive(params.L, "L");
  require_positive(params.Phi0, "Phi0");
  const double trapped = static_cast<double>(n) * params.Phi0 / params.L;
  return {n, H_over_Hc, trapped, -trapped * H_over_Hc};
}

double remnant_field(std::int64_t n, const RingParams& params) {
  require_positive(params.area_A, "area_A");
  require_positive(params.Phi0, "Phi0");
  return static_cast<double>(n) * params.Phi0 / params.area_A;
}

double quantized_phase(std::int64_t n) noexcept { return kTwoPi * static_cast<double>(n); }

std::vector<WideRingState> wide_ring_table(std::int64_t n, std::size_t points,
                                           const RingParams& params) {
  if (points < 2) throw InvalidParameter("wide-ring table needs at least 2 points");
  std::vector<WideRingState> out;
  out.reserve(points);
  for (std::size_t k = 0; k < points; ++k) {
    const double h = k + 1 == points ? 1.0 : static_cast<double>(k) / (points - 1);
    out.push_back(currents_at(n, h, params));
  }
  return out;
}

} // namespace fluxring
