// SPDX-License-Identifier: Apache-2.0
#include "config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace fluxring::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool is_known(const std::string& key) {
  const auto& keys = known_keys();
  return std::find(keys.begin(), keys.end(), key) != keys.end();
}

double to_real(const std::string& key, const std::string& text) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE ||
      !std::isfinite(v)) {
    throw ConfigError("invalid value for '" + key + "': expected a finite number, got '" +
                      text + "'");
  }
  return v;
}

long long to_integer(const std::string& key, const std::string& text) {
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(text.c_str(), &end, 10);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
    throw ConfigError("invalid value for '" + key + "': expected an integer, got '" + text +
                      "'");
  }
  return v;
}

std::size_t to_count(const std::string& key, const std::string& text) {
  const long long v = to_integer(key, text);
  if (v < 0) throw ConfigError("invalid value for '" + key + "': must be nonnegative");
  return static_cast<std::size_t>(v);
}

std::vector<double> to_list(const std::string& key, const std::string& text) {
  std::string normalized = text;
  std::replace(normalized.begin(), normalized.end(), ',', ' ');
  std::istringstream ss(normalized);
  std::vector<double> out;
  std::string item;
  while (ss >> item) out.push_back(to_real(key, item));
  return out;
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError("invalid value for '" + key + "': " + what);
}

} // namespace

const char* command_name(Command c) {
  switch (c) {
  case Command::FixedPoints: return "fixed-points";
  case Command::Sweep: return "sweep";
  case Command::WideRing: return "wide-ring";
  case Command::BlochCheck: return "bloch-check";
  case Command::Fit: return "fit";
  }
  return "?";
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "L",          "I_J",         "Phi0",          "Phi_Fe",     "area_A",
      "beta",       "phi_fe",      "amplitude",     "step",       "tol",
      "marginal_tol", "output",    "phi_ext",       "phi_ext_min", "phi_ext_max",
      "phi_ext_count", "n",        "h_points",      "bloch_coeffs", "grid_size",
      "data",       "kind",        "coupling_area", "beta_init",  "phi_fe_init",
      "beta_min",   "beta_max",    "phi_fe_min",    "phi_fe_max", "restarts",
      "seed",       "fit_tol"};
  return keys;
}

KeyValues parse_config_text(std::istream& is, const std::string& source) {
  KeyValues out;
  std::string line;
  for (std::size_t lineno = 1; std::getline(is, line); ++lineno) {
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    const std::string where = source + ":" + std::to_string(lineno);
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + ": missing key");
    if (!is_known(key)) throw ConfigError(where + ": unknown key '" + key + "'");
    if (out.count(key)) throw ConfigError(where + ": duplicate key '" + key + "'");
    out[key] = value;
  }
  return out;
}

KeyValues parse_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read config file '" + path + "'");
  return parse_config_text(is, path);
}

fluxring_ring_params RunConfig::ring() const {
  return {L.value_or(0.0), I_J.value_or(0.0), Phi0, Phi_Fe, area_A.value_or(0.0)};
}

fluxring_reduced_params RunConfig::reduced() const {
  fluxring_reduced_params p{};
  if (fluxring_reduced_from_beta(beta.value_or(0.0), phi_fe, &p) != FLUXRING_OK) {
    throw ConfigError(std::string("invalid value for 'beta': ") + fluxring_last_error());
  }
  return p;
}

RunConfig build_config(Command command, const KeyValues& file, const KeyValues& flags) {
  KeyValues kv = file;
  for (const auto& [k, v] : flags) {
    if (!is_known(k)) throw ConfigError("unknown key '" + k + "'");
    kv[k] = v;
  }
  for (const auto& [k, v] : kv) {
    if (!is_known(k)) throw ConfigError("unknown key '" + k + "'");
  }

  RunConfig c;
  c.command = command;
  const auto get = [&](const char* key) -> const std::string* {
    const auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };
  const auto real = [&](const char* key, double& dst) {
    if (const auto* v = get(key)) dst = to_real(key, *v);
  };
  const auto opt_real = [&](const char* key, std::optional<double>& dst) {
    if (const auto* v = get(key)) dst = to_real(key, *v);
  };

  opt_real("L", c.L);
  opt_real("I_J", c.I_J);
  real("Phi0", c.Phi0);
  real("Phi_Fe", c.Phi_Fe);
  opt_real("area_A", c.area_A);
  real("amplitude", c.amplitude);
  real("step", c.step);
  real("tol", c.tol);
  real("marginal_tol", c.marginal_tol);
  if (const auto* v = get("output")) c.output = *v;
  real("phi_ext_min", c.phi_ext_min);
  real("phi_ext_max", c.phi_ext_max);
  if (const auto* v = get("phi_ext_count")) c.phi_ext_count = to_count("phi_ext_count", *v);
  if (const auto* v = get("phi_ext")) {
    c.phi_ext_min = c.phi_ext_max = to_real("phi_ext", *v);
    c.phi_ext_count = 1;
  }
  if (const auto* v = get("n")) c.n = to_integer("n", *v);
  if (const auto* v = get("h_points")) c.h_points = to_count("h_points", *v);
  if (const auto* v = get("bloch_coeffs")) c.bloch_coeffs = to_list("bloch_coeffs", *v);
  if (const auto* v = get("grid_size")) c.grid_size = to_count("grid_size", *v);
  if (const auto* v = get("data")) c.data = *v;
  if (const auto* v = get("kind")) {
    if (*v == "remnant") {
      c.kind = FLUXRING_REMNANT_FLUX;
    } else if (*v == "current") {
      c.kind = FLUXRING_CURRENT;
    } else {
      throw ConfigError("invalid value for 'kind': expected 'remnant' or 'current'");
    }
  }
  real("coupling_area", c.coupling_area);
  opt_real("beta_init", c.beta_init);
  opt_real("phi_fe_init", c.phi_fe_init);
  real("beta_min", c.beta_min);
  real("beta_max", c.beta_max);
  real("phi_fe_min", c.phi_fe_min);
  real("phi_fe_max", c.phi_fe_max);
  if (const auto* v = get("restarts")) {
    const long long r = to_integer("restarts", *v);
    require(r >= 0 && r <= 1000, "restarts", "must lie in [0, 1000]");
    c.restarts = static_cast<int>(r);
  }
  if (const auto* v = get("seed")) c.seed = static_cast<std::uint64_t>(to_integer("seed", *v));
  real("fit_tol", c.fit_tol);

  require(c.Phi0 > 0.0, "Phi0", "must be positive");
  require(c.tol > 0.0, "tol", "must be positive");
  require(c.marginal_tol > 0.0, "marginal_tol", "must be positive");
  require(c.fit_tol > 0.0, "fit_tol", "must be positive");
  if (c.L) require(*c.L > 0.0, "L", "must be positive");
  if (c.I_J) require(*c.I_J > 0.0, "I_J", "must be positive");
  if (c.area_A) require(*c.area_A > 0.0, "area_A", "must be positive");

  // Reduced parameters: explicit values win over the ring.
  if (const auto* v = get("phi_fe")) {
    c.phi_fe = to_real("phi_fe", *v);
  } else {
    c.phi_fe = c.Phi_Fe / c.Phi0;
  }
  if (const auto* v = get("beta")) {
    c.beta = to_real("beta", *v);
    require(*c.beta > 0.0, "beta", "must be positive");
  } else if (c.L && c.I_J) {
    fluxring_ring_params rp = c.ring();
    fluxring_reduced_params p{};
    if (fluxring_reduce(&rp, &p) != FLUXRING_OK) {
      throw ConfigError(std::string("invalid ring parameters: ") + fluxring_last_error());
    }
    c.beta = p.beta;
  }

  const bool needs_beta = command == Command::FixedPoints || command == Command::Sweep ||
                          (command == Command::Fit && !c.beta_init);
  if (needs_beta && !c.beta) {
    throw ConfigError("missing required key 'beta' (or both 'L' and 'I_J')");
  }

  switch (command) {
  case Command::FixedPoints:
    require(c.phi_ext_count >= 1, "phi_ext_count", "must be at least 1");
    require(c.phi_ext_count == 1 || c.phi_ext_max > c.phi_ext_min, "phi_ext_max",
            "must exceed phi_ext_min when phi_ext_count > 1");
    break;
  case Command::Sweep:
    require(c.amplitude > 0.0, "amplitude", "must be positive");
    require(c.step > 0.0, "step", "must be positive");
    break;
  case Command::WideRing:
    require(c.L.has_value(), "L", "required for wide-ring");
    require(c.area_A.has_value(), "area_A", "required for wide-ring");
    require(c.h_points >= 2, "h_points", "must be at least 2");
    break;
  case Command::BlochCheck:
    require(!c.bloch_coeffs.empty(), "bloch_coeffs", "at least one coefficient required");
    require(c.grid_size >= 16, "grid_size", "must be at least 16");
    break;
  case Command::Fit:
    require(!c.data.empty(), "data", "input CSV path required for fit");
    require(c.beta_min > 0.0 && c.beta_min <= c.beta_max, "beta_min",
            "need 0 < beta_min <= beta_max");
    require(c.phi_fe_min <= c.phi_fe_max, "phi_fe_min", "need phi_fe_min <= phi_fe_max");
    require(c.step > 0.0, "step", "must be positive");
    if (c.kind == FLUXRING_CURRENT && c.coupling_area > 0.0) {
      require(c.I_J.has_value(), "I_J", "required to reduce SI currents");
    }
    break;
  }
  return c;
}

} // namespace fluxring::cli
