// SPDX-License-Identifier: Apache-2.0
//
// Solutions of the flux balance
//
//     g(phi) = phi - (phi_ext + phi_fe) - lambda * sin(2 pi phi) = 0,
//
// i.e. the intersections of the line I = (Phi - Phi_H - Phi_Fe) / L with the
// junction sinusoid, in reduced units. g depends on phi_ext and phi_fe only
// through their sum (the "bias"), which is formed once so that shifting
// flux between the two leaves every result bit-identical.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "fluxring/ring_model.hpp"

namespace fluxring {

inline constexpr double kDefaultRootTol = 1e-12;
inline constexpr double kDefaultMarginalTol = 1e-9;
// Slack added to the analytic root window |phi - bias| <= lambda.
inline constexpr double kWindowMargin = 1e-9;

enum class Stability { Stable, Unstable, Marginal };

std::string_view to_string(Stability s) noexcept;

struct FixedPoint {
  double phi = 0.0; // reduced total flux
  double i = 0.0;   // reduced supercurrent, sin(2 pi phi)
  Stability stability = Stability::Stable;
};

double residual(double phi, double phi_ext, const ReducedParams& p) noexcept;

// g'(phi) = 1 - beta cos(2 pi phi). Positive on stable branches.
double residual_slope(double phi, const ReducedParams& p) noexcept;

Stability classify_stability(double phi_star, const ReducedParams& p,
                             double marginal_tol = kDefaultMarginalTol) noexcept;

// All roots of g at the given applied flux, ascending in phi. Never empty.
// Throws InvalidParameter for tol <= 0 or a non-finite phi_ext.
std::vector<FixedPoint> find_fixed_points(double phi_ext, const ReducedParams& p,
                                          double tol = kDefaultRootTol,
                                          double marginal_tol = kDefaultMarginalTol);

struct Fold {
  double phi = 0.0;     // tangency point, in [0, 1)
  double phi_ext = 0.0; // applied flux at which the tangency occurs
};

// Saddle-node points within one period: cos(2 pi phi) = 1/beta. Empty for
// beta <= 1.
std::vector<Fold> fold_locations(const ReducedParams& p);

// Maximal phi-interval on which g' > 0, i.e. one stable branch. For
// beta <= 1 the whole line is a single branch with id 0; otherwise branch k
// is (k + theta, k + 1 - theta) with cos(2 pi theta) = 1/beta.
struct StableBand {
  std::int64_t id = 0;
  double lo = 0.0;
  double hi = 0.0;
  bool bounded = false;
};

// The stable band containing phi, or nullopt if phi is not strictly inside one.
std::optional<StableBand> stable_band_containing(double phi, const ReducedParams& p) noexcept;

// Generic current-phase relation, for checking other CPR models against the
// sinusoidal one. `value` is the self-induced reduced flux L I(phi) / Phi0 and
// `slope` its derivative in phi.
struct FluxResponse {
  std::function<double(double)> value;
  std::function<double(double)> slope;
  double amplitude = 0.0; // bound on |value|
  double max_slope = 0.0; // bound on |slope|
};

// Bracket scan with step 1/(8 (1 + max_slope)) followed by bisection.
// FixedPoint::i is reported as value(phi) / amplitude.
std::vector<FixedPoint> find_fixed_points(double phi_ext, double phi_fe,
                                          const FluxResponse& response,
                                          double tol = kDefaultRootTol,
                                          double marginal_tol = kDefaultMarginalTol);

} // namespace fluxring
