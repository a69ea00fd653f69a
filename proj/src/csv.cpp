// SPDX-License-Identifier: Apache-2.0
#include "fluxring/csv.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fluxring/errors.hpp"

namespace fluxring {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  return os;
}

void finish(std::ofstream& os, const std::string& path) {
  os.flush();
  if (!os) throw IoError("write to '" + path + "' failed");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

} // namespace

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_sweep_csv(std::ostream& os, const SweepTrajectory& traj, const ReducedParams& p) {
  os << kSweepHeader << '\n';
  for (const auto& s : traj.samples) {
    const bool stable = classify_stability(s.phi, p) == Stability::Stable;
    os << format_real(s.phi_ext) << ',' << format_real(s.phi) << ',' << format_real(s.i) << ','
       << s.branch_id << ',' << (stable ? "true" : "false") << ',' << (s.jump ? "jump" : "")
       << '\n';
  }
}

void write_fixed_points_csv(std::ostream& os, const std::vector<FixedPointRow>& rows) {
  os << kFixedPointHeader << '\n';
  for (const auto& r : rows) {
    os << format_real(r.phi_ext) << ',' << format_real(r.point.phi) << ','
       << format_real(r.point.i) << ',' << to_string(r.point.stability) << '\n';
  }
}

void write_wide_ring_csv(std::ostream& os, const std::vector<WideRingState>& rows,
                         const RingParams& params) {
  os << kWideRingHeader << '\n';
  for (const auto& r : rows) {
    os << format_real(r.H_over_Hc) << ',' << format_real(r.I_inner) << ','
       << format_real(r.I_outer) << ',' << format_real(remnant_field(r.n, params)) << '\n';
  }
}

void write_sweep_csv(const std::string& path, const SweepTrajectory& traj,
                     const ReducedParams& p) {
  auto os = open_out(path);
  write_sweep_csv(os, traj, p);
  finish(os, path);
}

void write_fixed_points_csv(const std::string& path, const std::vector<FixedPointRow>& rows) {
  auto os = open_out(path);
  write_fixed_points_csv(os, rows);
  finish(os, path);
}

void write_wide_ring_csv(const std::string& path, const std::vector<WideRingState>& rows,
                         const RingParams& params) {
  auto os = open_out(path);
  write_wide_ring_csv(os, rows, params);
  finish(os, path);
}

CsvTable read_csv(std::istream& is) {
  CsvTable t;
  std::string line;
  bool have_header = false;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    if (!have_header) {
      t.header = split_fields(line);
      have_header = true;
    } else {
      t.rows.push_back(split_fields(line));
    }
  }
  return t;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path + "' for reading");
  return read_csv(is);
}

double parse_real(const std::string& field) {
  const std::string s = trim(field);
  if (s.empty()) throw InvalidParameter("empty number");
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) {
    throw InvalidParameter("not a finite number: '" + s + "'");
  }
  return v;
}

std::vector<std::pair<double, double>> read_observation_csv(std::istream& is) {
  const CsvTable t = read_csv(is);
  if (t.header != std::vector<std::string>{"phi_ext", "observable"}) {
    throw InvalidParameter(std::string("observation CSV header must be '") +
                           kObservationHeader + "'");
  }
  std::vector<std::pair<double, double>> out;
  std::string bad;
  for (std::size_t k = 0; k < t.rows.size(); ++k) {
    const auto& row = t.rows[k];
    try {
      if (row.size() != 2) throw InvalidParameter("expected 2 fields");
      out.emplace_back(parse_real(row[0]), parse_real(row[1]));
    } catch (const InvalidParameter&) {
      bad += (bad.empty() ? "" : ", ") + std::to_string(k + 1);
    }
  }
  if (!bad.empty()) throw InvalidParameter("invalid observation rows: " + bad);
  return out;
}

std::vector<std::pair<double, double>> read_observation_csv(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path + "' for reading");
  return read_observation_csv(is);
}

} // namespace fluxring
