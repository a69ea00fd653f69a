// SPDX-License-Identifier: Apache-2.0
#include "fluxring/fixed_points.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fluxring/errors.hpp"

namespace fluxring {

namespace {

double theta_for(double beta) noexcept { return std::acos(1.0 / beta) / kTwoPi; }

// Bisection on a bracket with g(a) and g(b) of strictly opposite sign, run to
// the last representable midpoint. Returns the endpoint with smaller |g|.
template <class F>
double bisect(const F& g, double a, double b, double ga) {
  for (int it = 0; it < 2000; ++it) {
    const double mid = a + 0.5 * (b - a);
    if (mid <= a || mid >= b) break;
    const double gm = g(mid);
    if (gm == 0.0) return mid;
    if ((gm < 0.0) == (ga < 0.0)) {
      a = mid;
      ga = gm;
    } else {
      b = mid;
    }
  }
  return std::abs(g(a)) <= std::abs(g(b)) ? a : b;
}

Stability classify_slope(double s, double marginal_tol) noexcept {
  if (s > marginal_tol) return Stability::Stable;
  if (s < -marginal_tol) return Stability::Unstable;
  return Stability::Marginal;
}

void check_tolerances(double tol, double marginal_tol) {
  if (!(tol > 0.0) || !std::isfinite(tol)) throw InvalidParameter("tol must be positive");
  if (!(marginal_tol >= 0.0) || !std::isfinite(marginal_tol)) {
    throw InvalidParameter("marginal_tol must be nonnegative");
  }
}

// Uniform scan points from lo to hi inclusive with spacing at most h.
void append_grid(std::vector<double>& pts, double lo, double hi, double h) {
  const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / h));
  pts.reserve(pts.size() + n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    pts.push_back(k == n ? hi : lo + (hi - lo) * (static_cast<double>(k) / n));
  }
}

struct Breakpoint {
  double x;
  double g;
  bool critical;
};

// Root isolation over sorted breakpoints. Between consecutive breakpoints g
// is assumed monotone (exactly true when all critical points are included),
// so each strict sign change holds one root. A critical point with
// 0 < |g| <= tol and no sign change on either side is a tangency and is
// reported as a root itself.
template <class F>
std::vector<double> isolate_roots(const F& g, std::vector<Breakpoint>& bps, double tol) {
  std::sort(bps.begin(), bps.end(),
            [](const Breakpoint& a, const Breakpoint& b) { return a.x < b.x; });
  std::vector<double> roots;
  const std::size_t m = bps.size();
  std::vector<char> crossing(m > 0 ? m - 1 : 0, 0);
  for (std::size_t j = 0; j + 1 < m; ++j) {
    const auto& a = bps[j];
    const auto& b = bps[j + 1];
    if ((a.g < 0.0 && b.g > 0.0) || (a.g > 0.0 && b.g < 0.0)) {
      crossing[j] = 1;
      roots.push_back(bisect(g, a.x, b.x, a.g));
    }
  }
  for (std::size_t j = 0; j < m; ++j) {
    const auto& bp = bps[j];
    if (bp.g == 0.0) {
      roots.push_back(bp.x);
      continue;
    }
    if (bp.critical && std::abs(bp.g) <= tol) {
      const bool left = j > 0 && crossing[j - 1];
      const bool right = j + 1 < m && crossing[j];
      if (!left && !right) roots.push_back(bp.x);
    }
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

} // namespace

std::string_view to_string(Stability s) noexcept {
  switch (s) {
  case Stability::Stable: return "stable";
  case Stability::Unstable: return "unstable";
  case Stability::Marginal: return "marginal";
  }
  return "unknown";
}

double residual(double phi, double phi_ext, const ReducedParams& p) noexcept {
  const double bias = phi_ext + p.phi_fe();
  return phi - bias - p.lambda() * sin_two_pi(phi);
}

double residual_slope(double phi, const ReducedParams& p) noexcept {
  return 1.0 - p.beta() * cos_two_pi(phi);
}

Stability classify_stability(double phi_star, const ReducedParams& p,
                             double marginal_tol) noexcept {
  return classify_slope(residual_slope(phi_star, p), marginal_tol);
}

std::vector<FixedPoint> find_fixed_points(double phi_ext, const ReducedParams& p, double tol,
                                          double marginal_tol) {
  check_tolerances(tol, marginal_tol);
  if (!std::isfinite(phi_ext)) throw InvalidParameter("phi_ext must be finite");

  const double bias = phi_ext + p.phi_fe();
  const double lambda = p.lambda();
  const double beta = p.beta();
  const auto g = [bias, lambda](double x) { return x - bias - lambda * sin_two_pi(x); };

  const double lo = bias - lambda - kWindowMargin;
  const double hi = bias + lambda + kWindowMargin;

  std::vector<double> xs;
  append_grid(xs, lo, hi, 1.0 / (8.0 * (1.0 + beta)));
  std::vector<Breakpoint> bps;
  bps.reserve(xs.size() + 8);
  for (double x : xs) bps.push_back({x, g(x), false});

  if (beta > 1.0) {
    const double theta = theta_for(beta);
    for (double k = std::floor(lo) - 1.0; k <= std::ceil(hi) + 1.0; k += 1.0) {
      for (double x : {k + theta, k + 1.0 - theta}) {
        if (x > lo && x < hi) bps.push_back({x, g(x), true});
      }
    }
  }

  const auto roots = isolate_roots(g, bps, tol);
  if (roots.empty()) throw NumericalFailure("no root found in the analytic window");

  std::vector<FixedPoint> out;
  out.reserve(roots.size());
  for (double r : roots) {
    out.push_back({r, josephson_current(r), classify_stability(r, p, marginal_tol)});
  }
  return out;
}

std::vector<Fold> fold_locations(const ReducedParams& p) {
  const double beta = p.beta();
  if (!(beta > 1.0)) return {};
  const double theta = theta_for(beta);
  std::vector<Fold> out;
  for (double phi : {theta, 1.0 - theta}) {
    out.push_back({phi, phi - p.phi_fe() - p.lambda() * sin_two_pi(phi)});
  }
  return out;
}

std::optional<StableBand> stable_band_containing(double phi, const ReducedParams& p) noexcept {
  if (!std::isfinite(phi)) return std::nullopt;
  const double beta = p.beta();
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (!(beta > 1.0)) return StableBand{0, -inf, inf, false};
  const double theta = theta_for(beta);
  const double k = std::floor(phi);
  const double lo = k + theta;
  const double hi = k + 1.0 - theta;
  if (!(phi > lo && phi < hi)) return std::nullopt;
  return StableBand{static_cast<std::int64_t>(k), lo, hi, true};
}

std::vector<FixedPoint> find_fixed_points(double phi_ext, double phi_fe,
                                          const FluxResponse& response, double tol,
                                          double marginal_tol) {
  check_tolerances(tol, marginal_tol);
  if (!std::isfinite(phi_ext) || !std::isfinite(phi_fe)) {
    throw InvalidParameter("phi_ext and phi_fe must be finite");
  }
  if (!response.value || !response.slope || !(response.amplitude > 0.0) ||
      !(response.max_slope >= 0.0)) {
    throw InvalidParameter("flux response needs value, slope, positive amplitude");
  }

  const double bias = phi_ext + phi_fe;
  const auto g = [&](double x) { return x - bias - response.value(x); };
  const double lo = bias - response.amplitude - kWindowMargin;
  const double hi = bias + response.amplitude + kWindowMargin;

  std::vector<double> xs;
  append_grid(xs, lo, hi, 1.0 / (8.0 * (1.0 + response.max_slope)));
  std::vector<Breakpoint> bps;
  bps.reserve(xs.size());
  for (double x : xs) bps.push_back({x, g(x), false});

  const auto roots = isolate_roots(g, bps, tol);
  if (roots.empty()) throw NumericalFailure("no root found in the analytic window");

  std::vector<FixedPoint> out;
  out.reserve(roots.size());
  for (double r : roots) {
    out.push_back({r, response.value(r) / response.amplitude,
                   classify_slope(1.0 - response.slope(r), marginal_tol)});
  }
  return out;
}

} // namespace fluxring
