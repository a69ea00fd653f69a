// Acceptance suite. Prints one PASS/FAIL line per criterion.
//
//   acceptance          run all criteria
//   acceptance N ...    run only the listed criteria
//
// Exit status is 0 when every selected criterion passes.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fluxring/bloch_cpr.hpp"
#include "fluxring/fit.hpp"
#include "fluxring/fixed_points.hpp"
#include "fluxring/ring_model.hpp"
#include "fluxring/sweep.hpp"
#include "fluxring/wide_ring.hpp"
#include "oracles.hpp"

#ifndef FLUXRING_CLI_PATH
#error "FLUXRING_CLI_PATH must point at the fluxring-cli binary"
#endif

using namespace fluxring;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  double budget_s;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Outcome flux_quantum_anchor() {
  const double phi0 = codata::kPlanck / (2.0 * codata::kElementaryCharge);
  const double three_sf = std::round(phi0 / 1e-17) * 1e-17;
  const bool pass = std::abs(phi0 - 2.0678e-15) < 0.5e-19 &&
                    std::abs(three_sf - 2.07e-15) < 1e-25 && kFluxQuantum == phi0;
  return {pass, "h/2e = " + fmt("%.7e", phi0) + " Wb, 3 s.f. " + fmt("%.3g", three_sf)};
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(20240501);
  std::uniform_real_distribution<double> ux(-3.0, 3.0);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  int count_mismatch = 0;
  double worst_match = 0.0, worst_residual = 0.0;
  for (int k = 0; k < 200; ++k) {
    const double x = ux(rng);
    const double beta = 20.0 * (1.0 - u01(rng)); // (0, 20]
    const auto p = ReducedParams::from_beta(beta, 0.0);
    const auto roots = find_fixed_points(x, p);
    const auto ref = oracle::brute_roots(x, beta, 0.0, 1e-5);
    if (roots.size() != ref.size()) {
      ++count_mismatch;
      continue;
    }
    for (std::size_t j = 0; j < roots.size(); ++j) {
      worst_match = std::max(worst_match, std::abs(roots[j].phi - ref[j]));
      worst_residual = std::max(worst_residual, std::abs(oracle::g(roots[j].phi, x, p.lambda())));
    }
  }
  const bool pass = count_mismatch == 0 && worst_match <= 1e-6 && worst_residual <= 1e-12;
  return {pass, "200 instances, count mismatches " + std::to_string(count_mismatch) +
                    ", max |dphi| " + fmt("%.2e", worst_match) + ", max |g| " +
                    fmt("%.2e", worst_residual)};
}

Outcome no_hysteresis() {
  bool pass = true;
  std::ostringstream d;
  for (double beta : {0.2, 0.5, 0.9}) {
    const auto loop = run_hysteresis(ReducedParams::from_beta(beta, 0.0), 3.0, 0.01);
    const double gap = std::abs(loop.remnant_up - loop.remnant_down);
    pass = pass && std::abs(loop.loop_area) <= 1e-10 && gap <= 1e-10;
    d << "beta=" << beta << ": area " << fmt("%.1e", loop.loop_area) << ", remnant gap "
      << fmt("%.1e", gap) << "; ";
  }
  return {pass, d.str()};
}

Outcome hysteresis_and_trapping() {
  bool pass = true;
  std::ostringstream d;
  for (double beta : {3.0, 5.0, 10.0}) {
    const auto loop = run_hysteresis(ReducedParams::from_beta(beta, 0.0), 3.0, 0.01);
    const long n_up = std::lround(loop.remnant_up);
    const long n_down = std::lround(loop.remnant_down);
    const bool area_ok = loop.loop_area > 0.0;
    const bool sym_ok = std::abs(loop.remnant_up + loop.remnant_down) <= 1e-8;
    const bool trap_ok = beta < 5.0 || (std::labs(n_up) >= 1 && std::labs(n_down) >= 1);
    pass = pass && area_ok && sym_ok && trap_ok;
    d << "beta=" << beta << ": area " << fmt("%.4f", loop.loop_area) << ", remnants "
      << fmt("%+.6f", loop.remnant_down) << "/" << fmt("%+.6f", loop.remnant_up) << ", n "
      << n_down << "/" << n_up << (trap_ok ? "" : " (|n| >= 1 not met)") << "; ";
  }
  return {pass, d.str()};
}

Outcome bias_shift() {
  const double fe = 0.3;
  const std::vector<double> w{0.0, 3.0, 0.0, -3.0, 0.0};
  std::vector<double> shifted;
  for (double v : w) shifted.push_back(v + fe);
  bool pass = true;
  double worst = 0.0;
  std::size_t samples = 0;
  for (double beta : {0.5, 3.0, 5.0, 10.0}) {
    const auto a = run_sweep(ReducedParams::from_beta(beta, fe), {w, 0.01});
    const auto b = run_sweep(ReducedParams::from_beta(beta, 0.0), {shifted, 0.01});
    if (a.samples.size() != b.samples.size() || a.events.size() != b.events.size()) {
      pass = false;
      continue;
    }
    samples += a.samples.size();
    for (std::size_t k = 0; k < a.samples.size(); ++k) {
      worst = std::max(worst, std::abs(a.samples[k].phi - b.samples[k].phi));
      worst = std::max(worst, std::abs(a.samples[k].i - b.samples[k].i));
      worst = std::max(worst, std::abs(a.samples[k].phi_ext - (b.samples[k].phi_ext - fe)));
    }
  }
  // The asymmetric signature at phi_ext = 0.
  const auto loop = run_hysteresis(ReducedParams::from_beta(5.0, fe), 3.0, 0.01);
  const double asym = loop.remnant_up + loop.remnant_down;
  pass = pass && worst <= 1e-12 && std::abs(asym) > 1e-3;
  return {pass, std::to_string(samples) + " samples, max deviation " + fmt("%.1e", worst) +
                    "; beta=5 remnant sum at phi_ext=0 " + fmt("%+.6f", asym)};
}

Outcome appendix_a() {
  RingParams r;
  r.L = 1.3e-10;
  r.I_J = 1e-5;
  r.area_A = 2.5e-6;
  bool pass = true;
  for (std::int64_t n : {-3, -1, 0, 1, 2, 7}) {
    const auto crit = currents_at(n, 1.0, r);
    pass = pass && crit.I_inner + crit.I_outer == 0.0;
    pass = pass && currents_at(n, 0.0, r).I_outer == 0.0;
    const auto table = wide_ring_table(n, 11, r);
    for (const auto& s : table) pass = pass && s.I_inner == table.front().I_inner;
    pass = pass && remnant_field(n, r) == static_cast<double>(n) * r.Phi0 / r.area_A;
  }
  return {pass, "n in {-3,-1,0,1,2,7}: criticality sum exact, I_outer(0) = 0, I_inner "
                "constant on 11 points, B = n Phi0 / A exact"};
}

Outcome bloch_checks() {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-1e-21, 1e-21);
  std::vector<double> c(5);
  for (auto& v : c) v = u(rng);
  const FreeEnergyModel model(c);
  const auto deriv = check_current_derivative(model, 1000);
  const auto sym = validate_symmetries(model, 1000);

  const double c1 = 2.5e-22, L = 1e-10;
  const FreeEnergyModel k1({c1});
  const double I_J = oracle::kTwoPi * std::abs(c1) / kFluxQuantum;
  const auto p = reduce({L, I_J, kFluxQuantum, 0.0, 1e-6});
  const auto response = flux_response(k1, L);
  double worst = 0.0;
  bool sets_match = true;
  for (int k = -30; k <= 30; ++k) {
    const double x = 0.1 * k;
    const auto a = find_fixed_points(x, 0.0, response);
    const auto b = find_fixed_points(x, p);
    if (a.size() != b.size()) {
      sets_match = false;
      continue;
    }
    for (std::size_t j = 0; j < a.size(); ++j) {
      worst = std::max(worst, std::abs(a[j].phi - b[j].phi));
      sets_match = sets_match && a[j].stability == b[j].stability;
    }
  }
  const double sym_worst = std::max({sym.current_periodicity, sym.current_oddness,
                                     sym.energy_periodicity, sym.energy_evenness});
  const bool pass = deriv.passed && deriv.max_relative_error <= 1e-6 && sym.passed &&
                    sym_worst <= 1e-12 && sets_match && worst <= 1e-10;
  return {pass, "derivative rel err " + fmt("%.1e", deriv.max_relative_error) +
                    ", symmetry " + fmt("%.1e", sym_worst) + ", K=1 vs Josephson " +
                    fmt("%.1e", worst) + (sets_match ? "" : " (root sets differ)")};
}

Outcome fit_round_trip() {
  const auto truth = ReducedParams::from_beta(5.0, 0.3);
  const std::vector<double> pts{2.0, -2.0, 3.0, -3.0, 4.0, -4.0};
  const auto pred = simulate_observables(truth, {ObservableKind::RemnantFlux, pts});
  std::vector<Observation> data;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    data.push_back({pts[k], pred[k], ObservableKind::RemnantFlux});
  }
  const auto r = fit_parameters(data, ReducedParams::from_beta(4.2, 0.26), {});
  const double rel_beta = std::abs(r.params.beta() - 5.0) / 5.0;
  const double abs_fe = std::abs(r.params.phi_fe() - 0.3);
  const bool pass = rel_beta <= 1e-2 && abs_fe <= 1e-2;
  return {pass, "beta " + fmt("%.8f", r.params.beta()) + " (rel " + fmt("%.1e", rel_beta) +
                    "), phi_fe " + fmt("%.8f", r.params.phi_fe()) + " (abs " +
                    fmt("%.1e", abs_fe) + "), objective " + fmt("%.1e", r.objective)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

Outcome cli_determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "fluxring_acceptance_9";
  fs::remove_all(dir);
  fs::create_directories(dir);
  {
    std::ofstream cfg(dir / "run.cfg");
    cfg << "L = 1.1e-10\nI_J = 9e-6\nPhi_Fe = 4e-16\narea_A = 1e-6\namplitude = 3\n"
           "step = 0.007\nphi_ext_min = -2\nphi_ext_max = 2\nphi_ext_count = 41\n";
  }
  const std::vector<std::string> commands{"sweep", "fixed-points", "wide-ring"};
  bool pass = true;
  std::size_t bytes = 0;
  for (const auto& cmd : commands) {
    std::string outputs[2];
    for (int k = 0; k < 2; ++k) {
      const fs::path out = dir / (cmd + "_" + std::to_string(k) + ".csv");
      const std::string line = "'" FLUXRING_CLI_PATH "' " + cmd + " --config '" +
                               (dir / "run.cfg").string() + "' --output '" + out.string() +
                               "' 2>/dev/null";
      if (std::system(line.c_str()) != 0) pass = false;
      outputs[k] = slurp(out);
    }
    pass = pass && !outputs[0].empty() && outputs[0] == outputs[1];
    bytes += outputs[0].size();
  }
  fs::remove_all(dir);
  return {pass, "sweep, fixed-points, wide-ring run twice each: " + std::to_string(bytes) +
                    " bytes, " + (pass ? "identical" : "differ")};
}

} // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "flux-quantum anchor", 1.0, flux_quantum_anchor},
      {2, "fixed-point oracle equivalence", 10.0, oracle_equivalence},
      {3, "no-hysteresis regime", 5.0, no_hysteresis},
      {4, "hysteresis and trapping", 10.0, hysteresis_and_trapping},
      {5, "bias-shift exactness", 5.0, bias_shift},
      {6, "Appendix A identities", 1.0, appendix_a},
      {7, "Bloch CPR checks", 5.0, bloch_checks},
      {8, "fit round-trip", 60.0, fit_round_trip},
      {9, "CLI determinism", 30.0, cli_determinism},
  };
  std::vector<int> selected;
  for (int k = 1; k < argc; ++k) selected.push_back(std::atoi(argv[k]));

  bool ok = true;
  for (const auto& c : all) {
    if (!selected.empty() &&
        std::find(selected.begin(), selected.end(), c.id) == selected.end()) {
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.budget_s;
    const bool pass = o.pass && in_time;
    ok = ok && pass;
    std::printf("%s  %d %s (%.2fs%s): %s\n", pass ? "PASS" : "FAIL", c.id, c.title, secs,
                in_time ? "" : ", over budget", o.detail.c_str());
  }
  return ok ? 0 : 1;
}
