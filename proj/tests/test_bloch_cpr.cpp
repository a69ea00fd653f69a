#include "doctest.h"

#include <cmath>
#include <random>

#include "fluxring/bloch_cpr.hpp"
#include "fluxring/errors.hpp"
#include "oracles.hpp"

using namespace fluxring;

namespace {

double series_energy(const std::vector<double>& c, double Phi, double Phi0) {
  double f = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    f += c[k] * std::cos(oracle::kTwoPi * static_cast<double>(k + 1) * Phi / Phi0);
  }
  return f;
}

} // namespace

TEST_CASE("free_energy: anchors") {
  const FreeEnergyModel m({2e-22, -5e-23, 1e-23});
  CHECK(m.free_energy(0.0) == doctest::Approx(2e-22 - 5e-23 + 1e-23).epsilon(1e-15));
  const double Phi = 0.3 * kFluxQuantum;
  CHECK(m.free_energy(Phi + 7.0 * kFluxQuantum) ==
        doctest::Approx(m.free_energy(Phi)).epsilon(1e-12));
  const FreeEnergyModel single({3e-22});
  CHECK(single.free_energy(0.5 * kFluxQuantum) == doctest::Approx(-3e-22).epsilon(1e-15));
  for (double x : {-1.3, -0.2, 0.4, 0.77}) {
    CHECK(m.free_energy(x * kFluxQuantum) ==
          doctest::Approx(series_energy(m.coeffs(), x * kFluxQuantum, kFluxQuantum))
              .epsilon(1e-12));
  }
}

TEST_CASE("current: analytic form and finite differences") {
  const double Phi0 = kFluxQuantum;
  const double c1 = Phi0 / oracle::kTwoPi; // I_0 = 1 A
  const FreeEnergyModel m({c1}, Phi0);
  CHECK(m.current(0.0) == 0.0);
  CHECK(m.current(0.25 * Phi0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(fundamental_harmonic(m) == doctest::Approx(1.0).epsilon(1e-15));
  for (double x : {-0.9, -0.31, 0.12, 0.25, 0.66}) {
    const double Phi = x * Phi0;
    CHECK(m.current(Phi) == doctest::Approx(std::sin(oracle::kTwoPi * x)).epsilon(1e-12));
    const double h = 1e-6 * Phi0;
    const double fd = (series_energy(m.coeffs(), Phi - h, Phi0) -
                       series_energy(m.coeffs(), Phi + h, Phi0)) /
                      (2.0 * h);
    CHECK(std::abs(fd - m.current(Phi)) <= 1e-6 * m.current_scale());
  }
}

TEST_CASE("fundamental_harmonic") {
  CHECK(fundamental_harmonic(FreeEnergyModel({0.0, 1e-22})) == 0.0);
  CHECK_THROWS_AS(fundamental_harmonic(FreeEnergyModel({})), InvalidParameter);
  CHECK(fundamental_harmonic(FreeEnergyModel({-1e-22})) < 0.0);
}

TEST_CASE("model validation") {
  CHECK_THROWS_AS(FreeEnergyModel({1.0}, 0.0), InvalidParameter);
  CHECK_THROWS_AS(FreeEnergyModel({std::nan("")}), InvalidParameter);
}

TEST_CASE("validate_symmetries") {
  const auto one = validate_symmetries(FreeEnergyModel({1e-22}), 256);
  CHECK(one.passed);
  CHECK(one.current_periodicity <= 1e-12);
  CHECK(one.current_oddness <= 1e-12);
  CHECK(one.energy_periodicity <= 1e-12);
  CHECK(one.energy_evenness <= 1e-12);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1e-21, 1e-21);
  std::vector<double> c(5);
  for (auto& v : c) v = u(rng);
  const auto five = validate_symmetries(FreeEnergyModel(c), 512);
  CHECK(five.passed);

  const auto minimal = validate_symmetries(FreeEnergyModel({1e-22, 1e-23}), 16);
  CHECK(minimal.grid_size == 16);
  CHECK_THROWS_AS(validate_symmetries(FreeEnergyModel({1e-22}), 15), InvalidParameter);
}

TEST_CASE("check_current_derivative") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-1e-21, 1e-21);
  std::vector<double> c(4);
  for (auto& v : c) v = u(rng);
  const auto r = check_current_derivative(FreeEnergyModel(c), 400);
  CHECK(r.passed);
  CHECK(r.max_relative_error <= 1e-6);
  CHECK(r.step == doctest::Approx(1e-6 * kFluxQuantum));
}

TEST_CASE("negative c_1 puts energy minima at whole flux quanta") {
  const FreeEnergyModel m({-4e-22});
  for (int n = -3; n <= 3; ++n) {
    const double Phi = n * kFluxQuantum;
    CHECK(std::abs(m.current(Phi)) <= 1e-12 * m.current_scale());
    // F'' > 0 at a minimum, so dI/dPhi = -F'' < 0.
    CHECK(m.current_slope(Phi) < 0.0);
    CHECK(m.free_energy(Phi) < m.free_energy(Phi + 0.1 * kFluxQuantum));
    CHECK(m.free_energy(Phi) < m.free_energy(Phi - 0.1 * kFluxQuantum));
  }
}

TEST_CASE("K = 1 model reproduces the Josephson fixed points") {
  const double L = 1e-10;
  const double c1 = 3e-22;
  const FreeEnergyModel m({c1});
  const double I_J = oracle::kTwoPi * c1 / kFluxQuantum;
  CHECK(fundamental_harmonic(m) == doctest::Approx(I_J).epsilon(1e-15));
  const auto response = flux_response(m, L);
  for (double phi_fe : {0.0, 0.3}) {
    const auto p = reduce({L, I_J, kFluxQuantum, phi_fe * kFluxQuantum, 1e-6});
    for (double x : {-1.7, -0.4, 0.0, 0.33, 2.05}) {
      const auto a = find_fixed_points(x, phi_fe, response);
      const auto b = find_fixed_points(x, p);
      REQUIRE(a.size() == b.size());
      for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(std::abs(a[k].phi - b[k].phi) <= 1e-10);
        CHECK(std::abs(a[k].i - b[k].i) <= 1e-10);
        CHECK(a[k].stability == b[k].stability);
      }
    }
  }
}
