// SPDX-License-Identifier: Apache-2.0
//
// Wide-ring limit: screening currents on the inner and outer perimeters,
// with n flux quanta trapped at criticality and the remnant field left
// behind once the applied field is removed.
#pragma once

#include <cstdint>
#include <vector>

#include "fluxring/ring_model.hpp"

namespace fluxring {

struct WideRingState {
  std::int64_t n = 0;
  double H_over_Hc = 0.0; // applied field as a fraction of the critical field
  double I_inner = 0.0;   // A
  double I_outer = 0.0;   // A
};

// I_inner stays at n Phi0 / L for every field; I_outer ramps linearly from
// -n Phi0 / L at criticality (H/Hc = 1) to 0 at zero field. Throws
// InvalidParameter if H_over_Hc is outside [0, 1] or L, Phi0 are not positive.
WideRingState currents_at(std::int64_t n, double H_over_Hc, const RingParams& params);

// n Phi0 / A in tesla.
double remnant_field(std::int64_t n, const RingParams& params);

// 2 pi n.
double quantized_phase(std::int64_t n) noexcept;

// currents_at on `points` evenly spaced fractions from 0 to 1.
std::vector<WideRingState> wide_ring_table(std::int64_t n, std::size_t points,
                                           const RingParams& params);

} // namespace fluxring
