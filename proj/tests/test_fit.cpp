#include "doctest.h"

#include <cmath>

#include "fluxring/errors.hpp"
#include "fluxring/fit.hpp"
#include "fluxring/sweep.hpp"
#include "oracles.hpp"

using namespace fluxring;

namespace {

std::vector<Observation> synthesize(const ReducedParams& p, ObservableKind kind,
                                    const std::vector<double>& points) {
  const auto pred = simulate_observables(p, {kind, points});
  std::vector<Observation> out;
  for (std::size_t k = 0; k < points.size(); ++k) out.push_back({points[k], pred[k], kind});
  return out;
}

const std::vector<double> kAmplitudes{2.0, -2.0, 3.0, -3.0, 4.0, -4.0};

} // namespace

TEST_CASE("simulate_observables: beta < 1 leaves no remnant") {
  const auto pred =
      simulate_observables(ReducedParams::from_beta(0.5, 0.0), {ObservableKind::RemnantFlux,
                                                                 {1.0, -2.0, 3.5}});
  for (double v : pred) CHECK(v == 0.0);
}

TEST_CASE("simulate_observables: remnant matches a direct sweep") {
  const auto p = ReducedParams::from_beta(6.0, 0.2);
  const auto pred = simulate_observables(p, {ObservableKind::RemnantFlux, {3.0, -3.0}});
  const auto t = run_sweep(p, {{0.0, 3.0, 0.0, -3.0, 0.0}, 0.01});
  double after_pos = 0.0, after_neg = 0.0;
  for (const auto& s : t.samples) {
    if (s.leg == 2) after_pos = s.phi;
    if (s.leg == 4) after_neg = s.phi;
  }
  REQUIRE(pred.size() == 2);
  CHECK(pred[0] == doctest::Approx(after_pos).epsilon(1e-12));
  CHECK(pred[1] == doctest::Approx(after_neg).epsilon(1e-12));
}

TEST_CASE("simulate_observables: current read at the waypoint") {
  const auto p = ReducedParams::from_beta(4.0, 0.0);
  const auto pred = simulate_observables(p, {ObservableKind::Current, {0.7, 1.9, -0.4}});
  const auto t = run_sweep(p, {{0.0, 0.7, 1.9, -0.4}, 0.01});
  std::vector<double> last(4, 0.0);
  for (const auto& s : t.samples) last[s.leg] = s.i;
  CHECK(pred[0] == doctest::Approx(last[1]).epsilon(1e-12));
  CHECK(pred[1] == doctest::Approx(last[2]).epsilon(1e-12));
  CHECK(pred[2] == doctest::Approx(last[3]).epsilon(1e-12));
}

TEST_CASE("simulate_observables: odd under protocol negation for phi_fe = 0") {
  const auto p = ReducedParams::from_beta(7.5, 0.0);
  const std::vector<double> pts{2.5, -1.0, 3.3, -3.3, 0.6};
  std::vector<double> neg;
  for (double v : pts) neg.push_back(-v);
  for (auto kind : {ObservableKind::RemnantFlux, ObservableKind::Current}) {
    const auto a = simulate_observables(p, {kind, pts});
    const auto b = simulate_observables(p.with_phi_fe(0.0), {kind, neg});
    for (std::size_t k = 0; k < a.size(); ++k) {
      CHECK(a[k] == doctest::Approx(-b[k]).epsilon(1e-10));
    }
  }
}

TEST_CASE("simulate_observables: deterministic and step independent") {
  const auto p = ReducedParams::from_beta(9.0, -0.1);
  Protocol proto{ObservableKind::RemnantFlux, kAmplitudes};
  const auto a = simulate_observables(p, proto);
  const auto b = simulate_observables(p, proto);
  CHECK(a == b);
  proto.step = 0.01;
  const auto c = simulate_observables(p, proto);
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k] == doctest::Approx(c[k]).epsilon(1e-10));
}

TEST_CASE("fit_objective: zero at the generating parameters") {
  const auto truth = ReducedParams::from_beta(5.0, 0.3);
  const auto data = synthesize(truth, ObservableKind::RemnantFlux, kAmplitudes);
  CHECK(fit_objective(data, truth) <= 1e-16);
  CHECK(fit_objective(data, ReducedParams::from_beta(5.5, 0.3)) > 1e-6);
}

TEST_CASE("fit_parameters: round trip from within 20%") {
  const auto truth = ReducedParams::from_beta(5.0, 0.3);
  const auto data = synthesize(truth, ObservableKind::RemnantFlux, kAmplitudes);
  const auto r = fit_parameters(data, ReducedParams::from_beta(4.2, 0.36), {});
  CHECK(r.params.beta() == doctest::Approx(5.0).epsilon(1e-2));
  CHECK(std::abs(r.params.phi_fe() - 0.3) <= 1e-2);
  CHECK(r.objective <= r.initial_objective);
  CHECK(r.objective >= 0.0);
  CHECK_FALSE(r.flat_objective);
  CHECK(r.L_times_I_J == doctest::Approx(r.params.lambda() * kFluxQuantum));
  CHECK(r.Phi_Fe == doctest::Approx(r.params.phi_fe() * kFluxQuantum));
}

TEST_CASE("fit_parameters: current data") {
  const auto truth = ReducedParams::from_beta(3.7, -0.15);
  const auto data =
      synthesize(truth, ObservableKind::Current, {0.3, 1.1, 2.4, 0.9, -0.2, -1.6, -0.5, 0.25});
  const auto r = fit_parameters(data, ReducedParams::from_beta(3.2, -0.1), {});
  CHECK(r.params.beta() == doctest::Approx(3.7).epsilon(1e-2));
  CHECK(std::abs(r.params.phi_fe() + 0.15) <= 1e-2);
}

TEST_CASE("fit_parameters: all-zero remnant data below the hysteresis threshold") {
  std::vector<Observation> data;
  for (double x : kAmplitudes) data.push_back({x, 0.0, ObservableKind::RemnantFlux});
  const FitBounds bounds{0.1, 0.9, -0.5, 0.5};
  const auto r = fit_parameters(data, ReducedParams::from_beta(0.5, 0.2), bounds);
  CHECK(r.params.beta() < 1.0);
  CHECK(r.flat_objective);
  CHECK(r.beta_flat);
  CHECK(r.objective <= 1e-20);
}

TEST_CASE("fit_parameters: never worse than the start, reproducible") {
  const auto truth = ReducedParams::from_beta(8.0, 0.0);
  const auto data = synthesize(truth, ObservableKind::RemnantFlux, kAmplitudes);
  FitOptions opt;
  opt.restarts = 1;
  const auto a = fit_parameters(data, ReducedParams::from_beta(12.0, 0.2), {}, opt);
  const auto b = fit_parameters(data, ReducedParams::from_beta(12.0, 0.2), {}, opt);
  CHECK(a.objective <= a.initial_objective);
  CHECK(a.objective == b.objective);
  CHECK(a.params.beta() == b.params.beta());
  CHECK(a.params.phi_fe() == b.params.phi_fe());
  CHECK(a.evaluations == b.evaluations);

  opt.restarts = 0;
  const auto single = fit_parameters(data, ReducedParams::from_beta(12.0, 0.2), {}, opt);
  opt.restarts = 4;
  const auto multi = fit_parameters(data, ReducedParams::from_beta(12.0, 0.2), {}, opt);
  CHECK(multi.objective <= single.objective);
}

TEST_CASE("fit_parameters: input validation") {
  std::vector<Observation> two{{1.0, 0.0, ObservableKind::RemnantFlux},
                               {2.0, 0.0, ObservableKind::RemnantFlux}};
  CHECK_THROWS_AS(fit_parameters(two, ReducedParams::from_beta(2.0, 0.0), {}), InvalidParameter);
  CHECK_THROWS_AS(fit_parameters({}, ReducedParams::from_beta(2.0, 0.0), {}), InvalidParameter);
  auto mixed = two;
  mixed.push_back({3.0, 0.0, ObservableKind::Current});
  CHECK_THROWS_AS(fit_parameters(mixed, ReducedParams::from_beta(2.0, 0.0), {}),
                  InvalidParameter);
  auto ok = two;
  ok.push_back({3.0, 0.0, ObservableKind::RemnantFlux});
  CHECK_THROWS_AS(fit_parameters(ok, ReducedParams::from_beta(2.0, 0.0), {5.0, 1.0, -0.5, 0.5}),
                  InvalidParameter);
  CHECK_THROWS_AS(fit_parameters(ok, ReducedParams::from_beta(30.0, 0.0), {}), InvalidParameter);
  auto bad = ok;
  bad[1].observable = std::nan("");
  CHECK_THROWS_AS(fit_parameters(bad, ReducedParams::from_beta(2.0, 0.0), {}), InvalidParameter);
}

TEST_CASE("observations_from_si") {
  const double A = 2e-10;
  const auto obs = observations_from_si({1000.0, -250.0}, {3.0 * kFluxQuantum, 0.0},
                                        ObservableKind::RemnantFlux, kFluxQuantum, A, 0.0);
  REQUIRE(obs.size() == 2);
  CHECK(obs[0].phi_ext == doctest::Approx(1.25663706212e-6 * 1000.0 * A / kFluxQuantum));
  CHECK(obs[0].observable == doctest::Approx(3.0).epsilon(1e-15));
  const auto cur = observations_from_si({1.0}, {5e-6}, ObservableKind::Current, kFluxQuantum, A,
                                        1e-5);
  CHECK(cur[0].observable == doctest::Approx(0.5));
  CHECK_THROWS_AS(observations_from_si({1.0}, {1.0}, ObservableKind::Current, kFluxQuantum, A,
                                       0.0),
                  InvalidParameter);
  CHECK_THROWS_AS(observations_from_si({1.0}, {1.0, 2.0}, ObservableKind::RemnantFlux,
                                       kFluxQuantum, A, 0.0),
                  InvalidParameter);
}
