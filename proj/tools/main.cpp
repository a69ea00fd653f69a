// SPDX-License-Identifier: Apache-2.0
//
// fluxring-cli: command-line front end over the fluxring C library.
#include <cstdio>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "config.hpp"
#include "fluxring/fluxring.h"

namespace {

using fluxring::cli::Command;
using fluxring::cli::ConfigError;
using fluxring::cli::RunConfig;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

constexpr const char* kConfigEnv = "FLUXRING_CONFIG";

class ApiError : public std::runtime_error {
public:
  ApiError(fluxring_status status, const std::string& what)
      : std::runtime_error(what), status(status) {}
  fluxring_status status;
};

void check(fluxring_status s) {
  if (s != FLUXRING_OK) throw ApiError(s, fluxring_last_error());
}

int exit_code_for(fluxring_status s) {
  switch (s) {
  case FLUXRING_OK: return kExitOk;
  case FLUXRING_ERR_INVALID_ARGUMENT:
  case FLUXRING_ERR_IO: return kExitUsage;
  default: return kExitNumerical;
  }
}

std::FILE* open_text_output(const RunConfig& c) {
  if (c.output == "-") return stdout;
  std::FILE* f = std::fopen(c.output.c_str(), "wb");
  if (!f) throw ApiError(FLUXRING_ERR_IO, "cannot open '" + c.output + "' for writing");
  return f;
}

void close_text_output(const RunConfig& c, std::FILE* f) {
  const bool failed = std::fflush(f) != 0 || std::ferror(f);
  if (f != stdout) std::fclose(f);
  if (failed) throw ApiError(FLUXRING_ERR_IO, "write to '" + c.output + "' failed");
}

// `format` is one of the snprintf-style *_format_csv calls, `write` the
// matching path writer.
template <class Format, class Write>
void emit_csv(const RunConfig& c, Format format, Write write) {
  if (c.output != "-") {
    check(write(c.output.c_str()));
    return;
  }
  size_t length = 0;
  check(format(nullptr, 0, &length));
  std::string text(length + 1, '\0');
  check(format(text.data(), text.size(), &length));
  text.resize(length);
  std::fwrite(text.data(), 1, text.size(), stdout);
  close_text_output(c, stdout);
}

int run_fixed_points(const RunConfig& c) {
  std::vector<double> grid(c.phi_ext_count);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    grid[k] = grid.size() == 1
                  ? c.phi_ext_min
                  : c.phi_ext_min + (c.phi_ext_max - c.phi_ext_min) * static_cast<double>(k) /
                                        static_cast<double>(grid.size() - 1);
  }
  if (grid.size() > 1) grid.back() = c.phi_ext_max;
  const auto p = c.reduced();
  fluxring_fixed_points* raw = nullptr;
  check(fluxring_find_fixed_points(grid.data(), grid.size(), &p, c.tol, &raw));
  std::unique_ptr<fluxring_fixed_points, decltype(&fluxring_fixed_points_free)> fps(
      raw, fluxring_fixed_points_free);
  emit_csv(
      c,
      [&](char* b, size_t cap, size_t* len) {
        return fluxring_fixed_points_format_csv(fps.get(), b, cap, len);
      },
      [&](const char* path) { return fluxring_fixed_points_write_csv(fps.get(), path); });
  return kExitOk;
}

int run_sweep(const RunConfig& c) {
  const auto p = c.reduced();
  fluxring_sweep* raw = nullptr;
  check(fluxring_run_hysteresis(&p, c.amplitude, c.step, c.tol, &raw));
  std::unique_ptr<fluxring_sweep, decltype(&fluxring_sweep_free)> sw(raw, fluxring_sweep_free);
  emit_csv(
      c,
      [&](char* b, size_t cap, size_t* len) {
        return fluxring_sweep_format_csv(sw.get(), b, cap, len);
      },
      [&](const char* path) { return fluxring_sweep_write_csv(sw.get(), path); });

  fluxring_loop_summary s{};
  check(fluxring_sweep_summary(sw.get(), &s));
  std::fprintf(stderr, "samples %zu, jumps %zu, remnant_up %.17g, remnant_down %.17g, "
                       "loop_area %.17g\n",
               s.samples, s.events, s.remnant_up, s.remnant_down, s.loop_area);
  if (c.area_A) {
    const auto ring = c.ring();
    fluxring_remnant_report r{};
    check(fluxring_sweep_remnant_report(sw.get(), &ring, &r));
    std::fprintf(stderr, "n_up %lld, n_down %lld, B_remnant_up %.17g T, B_remnant_down %.17g T\n",
                 static_cast<long long>(r.n_up), static_cast<long long>(r.n_down),
                 r.B_remnant_up, r.B_remnant_down);
  }
  return kExitOk;
}

int run_wide_ring(const RunConfig& c) {
  const auto ring = c.ring();
  emit_csv(
      c,
      [&](char* b, size_t cap, size_t* len) {
        return fluxring_wide_ring_format_csv(c.n, c.h_points, &ring, b, cap, len);
      },
      [&](const char* path) {
        return fluxring_wide_ring_write_csv(c.n, c.h_points, &ring, path);
      });
  return kExitOk;
}

int run_bloch_check(const RunConfig& c) {
  fluxring_bloch_model* raw = nullptr;
  check(fluxring_bloch_create(c.bloch_coeffs.data(), c.bloch_coeffs.size(), c.Phi0, &raw));
  std::unique_ptr<fluxring_bloch_model, decltype(&fluxring_bloch_free)> model(
      raw, fluxring_bloch_free);
  fluxring_symmetry_report r{};
  check(fluxring_bloch_check(model.get(), c.grid_size, &r));
  double I0 = 0.0;
  check(fluxring_bloch_fundamental(model.get(), &I0));

  std::FILE* f = open_text_output(c);
  std::fprintf(f, "check,value\n");
  std::fprintf(f, "grid_size,%zu\n", r.grid_size);
  std::fprintf(f, "current_periodicity,%.17g\n", r.current_periodicity);
  std::fprintf(f, "current_oddness,%.17g\n", r.current_oddness);
  std::fprintf(f, "energy_periodicity,%.17g\n", r.energy_periodicity);
  std::fprintf(f, "energy_evenness,%.17g\n", r.energy_evenness);
  std::fprintf(f, "derivative_error,%.17g\n", r.derivative_error);
  std::fprintf(f, "fundamental_I0,%.17g\n", I0);
  std::fprintf(f, "passed,%s\n", r.passed ? "true" : "false");
  close_text_output(c, f);
  if (!r.passed) {
    std::fprintf(stderr, "error: Bloch model failed its symmetry checks\n");
    return kExitNumerical;
  }
  return kExitOk;
}

int run_fit(const RunConfig& c) {
  fluxring_observations* raw = nullptr;
  check(fluxring_observations_read_csv(c.data.c_str(), c.kind, c.Phi0, c.coupling_area,
                                       c.I_J.value_or(0.0), &raw));
  std::unique_ptr<fluxring_observations, decltype(&fluxring_observations_free)> obs(
      raw, fluxring_observations_free);

  fluxring_fit_bounds bounds{};
  fluxring_fit_options options{};
  fluxring_fit_defaults(&bounds, &options);
  bounds = {c.beta_min, c.beta_max, c.phi_fe_min, c.phi_fe_max};
  options.tol = c.fit_tol;
  options.restarts = c.restarts;
  options.seed = c.seed;
  options.step = c.step;
  options.Phi0 = c.Phi0;

  fluxring_reduced_params initial{};
  check(fluxring_reduced_from_beta(c.beta_init.value_or(c.beta.value_or(0.0)),
                                   c.phi_fe_init.value_or(c.phi_fe), &initial));
  fluxring_fit_result r{};
  check(fluxring_fit(obs.get(), &initial, &bounds, &options, &r));

  std::FILE* f = open_text_output(c);
  std::fprintf(f, "quantity,value\n");
  std::fprintf(f, "beta,%.17g\n", r.params.beta);
  std::fprintf(f, "lambda,%.17g\n", r.params.lambda);
  std::fprintf(f, "phi_fe,%.17g\n", r.params.phi_fe);
  std::fprintf(f, "L_times_I_J,%.17g\n", r.L_times_I_J);
  std::fprintf(f, "Phi_Fe,%.17g\n", r.Phi_Fe);
  std::fprintf(f, "objective,%.17g\n", r.objective);
  std::fprintf(f, "initial_objective,%.17g\n", r.initial_objective);
  std::fprintf(f, "iterations,%zu\n", r.iterations);
  std::fprintf(f, "evaluations,%zu\n", r.evaluations);
  std::fprintf(f, "converged,%s\n", r.converged ? "true" : "false");
  std::fprintf(f, "beta_flat,%s\n", r.beta_flat ? "true" : "false");
  std::fprintf(f, "phi_fe_flat,%s\n", r.phi_fe_flat ? "true" : "false");
  close_text_output(c, f);
  if (r.flat_objective) {
    std::fprintf(stderr, "warning: objective is flat in %s%s%s; the data do not identify it\n",
                 r.beta_flat ? "beta" : "", r.beta_flat && r.phi_fe_flat ? " and " : "",
                 r.phi_fe_flat ? "phi_fe" : "");
  }
  return kExitOk;
}

int dispatch(const RunConfig& c) {
  switch (c.command) {
  case Command::FixedPoints: return run_fixed_points(c);
  case Command::Sweep: return run_sweep(c);
  case Command::WideRing: return run_wide_ring(c);
  case Command::BlochCheck: return run_bloch_check(c);
  case Command::Fit: return run_fit(c);
  }
  return kExitUsage;
}

struct SubcommandFlags {
  Command command;
  CLI::App* app = nullptr;
  std::string config;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
};

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasi-static flux simulator for a Josephson ring with a ferromagnetic core",
               "fluxring-cli"};
  app.set_version_flag("--version", std::string(fluxring_version()));
  app.require_subcommand(1, 1);

  const std::vector<std::pair<Command, const char*>> commands = {
      {Command::FixedPoints, "Stationary fluxes and their stability over a phi_ext grid"},
      {Command::Sweep, "Hysteresis loop 0 -> A -> 0 -> -A -> 0 as CSV"},
      {Command::WideRing, "Inner/outer screening currents of a wide ring over H/Hc"},
      {Command::BlochCheck, "Symmetry and derivative checks of a Bloch free-energy model"},
      {Command::Fit, "Fit beta and phi_fe to a phi_ext,observable CSV"},
  };

  std::vector<std::unique_ptr<SubcommandFlags>> subs;
  for (const auto& [command, help] : commands) {
    auto s = std::make_unique<SubcommandFlags>();
    s->command = command;
    s->app = app.add_subcommand(fluxring::cli::command_name(command), help);
    s->app->add_option("-c,--config", s->config, "key = value config file")
        ->envname(kConfigEnv);
    for (const auto& key : fluxring::cli::known_keys()) {
      s->options[key] = s->app->add_option("--" + key, s->values[key]);
    }
    subs.push_back(std::move(s));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  for (const auto& s : subs) {
    if (!s->app->parsed()) continue;
    try {
      fluxring::cli::KeyValues file;
      if (!s->config.empty()) file = fluxring::cli::parse_config_file(s->config);
      fluxring::cli::KeyValues flags;
      for (const auto& [key, opt] : s->options) {
        if (opt->count() > 0) flags[key] = s->values[key];
      }
      const RunConfig config = fluxring::cli::build_config(s->command, file, flags);
      return dispatch(config);
    } catch (const ConfigError& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return kExitUsage;
    } catch (const ApiError& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return exit_code_for(e.status);
    } catch (const std::exception& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return kExitNumerical;
    }
  }
  return kExitUsage;
}
