// SPDX-License-Identifier: Apache-2.0
#include "fluxring/bloch_cpr.hpp"

#include <algorithm>
#include <cmath>

#include "fluxring/errors.hpp"

namespace fluxring {

FreeEnergyModel::FreeEnergyModel(std::vector<double> coeffs, double Phi0)
    : coeffs_(std::move(coeffs)), phi0_(Phi0) {
  if (!(Phi0 > 0.0) || !std::isfinite(Phi0)) throw InvalidParameter("Phi0 must be positive");
  for (double c : coeffs_) {
    if (!std::isfinite(c)) throw InvalidParameter("free-energy coefficients must be finite");
  }
}

double FreeEnergyModel::free_energy(double Phi) const noexcept {
  const double x = Phi / phi0_;
  double sum = 0.0;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    sum += coeffs_[k] * cos_two_pi(static_cast<double>(k + 1) * x);
  }
  return sum;
}

double FreeEnergyModel::current(double Phi) const noexcept {
  const double x = Phi / phi0_;
  double sum = 0.0;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    const double kk = static_cast<double>(k + 1);
    sum += coeffs_[k] * (kTwoPi * kk / phi0_) * sin_two_pi(kk * x);
  }
  return sum;
}

double FreeEnergyModel::current_slope(double Phi) const noexcept {
  const double x = Phi / phi0_;
  double sum = 0.0;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    const double w = kTwoPi * static_cast<double>(k + 1) / phi0_;
    sum += coeffs_[k] * w * w * cos_two_pi(static_cast<double>(k + 1) * x);
  }
  return sum;
}

double FreeEnergyModel::current_scale() const noexcept {
  double sum = 0.0;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    sum += std::abs(coeffs_[k]) * kTwoPi * static_cast<double>(k + 1) / phi0_;
  }
  return sum;
}

double fundamental_harmonic(const FreeEnergyModel& model) {
  if (model.harmonics() == 0) throw InvalidParameter("model has no harmonics");
  return kTwoPi * model.coeffs().front() / model.Phi0();
}

SymmetryReport validate_symmetries(const FreeEnergyModel& model, std::size_t grid_size) {
  if (grid_size < 16) throw InvalidParameter("grid_size must be at least 16");
  SymmetryReport r;
  r.grid_size = grid_size;

  const double phi0 = model.Phi0();
  const double i_scale = model.current_scale();
  double f_scale = 0.0;
  for (double c : model.coeffs()) f_scale += std::abs(c);
  const auto rel = [](double dev, double scale) { return scale > 0.0 ? dev / scale : dev; };

  for (std::size_t j = 0; j < grid_size; ++j) {
    const double Phi = -phi0 + 2.0 * phi0 * static_cast<double>(j) / grid_size;
    const double I = model.current(Phi);
    const double F = model.free_energy(Phi);
    r.current_periodicity =
        std::max(r.current_periodicity, rel(std::abs(model.current(Phi + phi0) - I), i_scale));
    r.current_oddness =
        std::max(r.current_oddness, rel(std::abs(model.current(-Phi) + I), i_scale));
    r.energy_periodicity = std::max(
        r.energy_periodicity, rel(std::abs(model.free_energy(Phi + phi0) - F), f_scale));
    r.energy_evenness =
        std::max(r.energy_evenness, rel(std::abs(model.free_energy(-Phi) - F), f_scale));
  }
  r.passed = r.current_periodicity <= r.tolerance && r.current_oddness <= r.tolerance &&
             r.energy_periodicity <= r.tolerance && r.energy_evenness <= r.tolerance;
  return r;
}

DerivativeReport check_current_derivative(const FreeEnergyModel& model, std::size_t grid_size,
                                          double step) {
  if (grid_size < 16) throw InvalidParameter("grid_size must be at least 16");
  const double phi0 = model.Phi0();
  DerivativeReport r;
  r.step = step > 0.0 ? step : 1e-6 * phi0;
  const double scale = model.current_scale();
  for (std::size_t j = 0; j < grid_size; ++j) {
    const double Phi = -phi0 + 2.0 * phi0 * static_cast<double>(j) / grid_size;
    const double fd =
        -(model.free_energy(Phi + r.step) - model.free_energy(Phi - r.step)) / (2.0 * r.step);
    const double dev = std::abs(fd - model.current(Phi));
    r.max_relative_error = std::max(r.max_relative_error, scale > 0.0 ? dev / scale : dev);
  }
  r.passed = r.max_relative_error <= r.tolerance;
  return r;
}

FluxResponse flux_response(const FreeEnergyModel& model, double L) {
  if (!(L > 0.0) || !std::isfinite(L)) throw InvalidParameter("L must be positive");
  const double phi0 = model.Phi0();
  double max_slope = 0.0;
  for (std::size_t k = 0; k < model.harmonics(); ++k) {
    const double w = kTwoPi * static_cast<double>(k + 1) / phi0;
    max_slope += std::abs(model.coeffs()[k]) * w * w;
  }
  FluxResponse r;
  r.value = [model, L, phi0](double phi) { return L * model.current(phi0 * phi) / phi0; };
  r.slope = [model, L, phi0](double phi) { return L * model.current_slope(phi0 * phi); };
  r.amplitude = L * model.current_scale() / phi0;
  r.max_slope = L * max_slope;
  return r;
}

} // namespace fluxring
