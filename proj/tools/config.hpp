// SPDX-License-Identifier: Apache-2.0
//
// Run configuration for the fluxring command-line tool. Values come from
// built-in defaults, then a `key = value` file, then command-line flags.
#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fluxring/fluxring.h"

namespace fluxring::cli {

enum class Command { FixedPoints, Sweep, WideRing, BlochCheck, Fit };

const char* command_name(Command c);

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

using KeyValues = std::map<std::string, std::string>;

// Every key accepted in a config file or as a --key flag.
const std::vector<std::string>& known_keys();

// Parses `key = value` lines. Blank lines and lines starting with '#' are
// skipped. Throws ConfigError naming the source and line for malformed lines,
// unknown keys and duplicates.
KeyValues parse_config_text(std::istream& is, const std::string& source = "<config>");
KeyValues parse_config_file(const std::string& path);

struct RunConfig {
  Command command = Command::Sweep;

  // Ring, SI.
  std::optional<double> L;
  std::optional<double> I_J;
  double Phi0 = fluxring_codata_flux_quantum();
  double Phi_Fe = 0.0;
  std::optional<double> area_A;

  // Resolved reduced parameters (explicit beta / phi_fe override the ring).
  std::optional<double> beta;
  double phi_fe = 0.0;

  double amplitude = 3.0;
  double step = 1e-2;
  double tol = 1e-12;
  double marginal_tol = 1e-9;
  std::string output = "-";

  // fixed-points
  double phi_ext_min = 0.0;
  double phi_ext_max = 0.0;
  std::size_t phi_ext_count = 1;

  // wide-ring
  std::int64_t n = 1;
  std::size_t h_points = 11;

  // bloch-check
  std::vector<double> bloch_coeffs;
  std::size_t grid_size = 256;

  // fit
  std::string data;
  fluxring_observable_kind kind = FLUXRING_REMNANT_FLUX;
  double coupling_area = 0.0; // > 0 means the data file is SI
  std::optional<double> beta_init;
  std::optional<double> phi_fe_init;
  double beta_min = 0.1;
  double beta_max = 20.0;
  double phi_fe_min = -0.5;
  double phi_fe_max = 0.5;
  int restarts = 2;
  std::uint64_t seed = 20121;
  double fit_tol = 1e-10;

  fluxring_ring_params ring() const;
  fluxring_reduced_params reduced() const;
};

// Layers defaults < file < flags and validates for the given command.
// Throws ConfigError naming the offending key.
RunConfig build_config(Command command, const KeyValues& file, const KeyValues& flags);

} // namespace fluxring::cli
