// SPDX-License-Identifier: Apache-2.0
//
// CSV emitters and readers. Reals are written with 17 significant digits so
// that re-parsing reproduces every double bit for bit.
#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "fluxring/bloch_cpr.hpp"
#include "fluxring/fixed_points.hpp"
#include "fluxring/sweep.hpp"
#include "fluxring/wide_ring.hpp"

namespace fluxring {

inline constexpr const char* kSweepHeader = "phi_ext,phi,i,branch_id,stable,event";
inline constexpr const char* kFixedPointHeader = "phi_ext,phi,i,stability";
inline constexpr const char* kWideRingHeader = "H_over_Hc,I_inner,I_outer,B_remnant";
inline constexpr const char* kObservationHeader = "phi_ext,observable";

std::string format_real(double v);

struct FixedPointRow {
  double phi_ext = 0.0;
  FixedPoint point;
};

// `stable` is re-checked with classify_stability; `event` is "jump" on the
// first sample after a jump and empty otherwise.
void write_sweep_csv(std::ostream& os, const SweepTrajectory& traj, const ReducedParams& p);
void write_fixed_points_csv(std::ostream& os, const std::vector<FixedPointRow>& rows);
void write_wide_ring_csv(std::ostream& os, const std::vector<WideRingState>& rows,
                         const RingParams& params);

// File variants. Throw IoError when the path cannot be written.
void write_sweep_csv(const std::string& path, const SweepTrajectory& traj,
                     const ReducedParams& p);
void write_fixed_points_csv(const std::string& path, const std::vector<FixedPointRow>& rows);
void write_wide_ring_csv(const std::string& path, const std::vector<WideRingState>& rows,
                         const RingParams& params);

// A parsed CSV table: header names plus rows of raw fields.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(std::istream& is);
CsvTable read_csv(const std::string& path);

// Strict real parse of a whole field. Throws InvalidParameter on garbage or
// non-finite values.
double parse_real(const std::string& field);

// Reads the `phi_ext,observable` schema. Rows with malformed or non-finite
// numbers are rejected; the message lists their 1-based data-row numbers.
std::vector<std::pair<double, double>> read_observation_csv(std::istream& is);
std::vector<std::pair<double, double>> read_observation_csv(const std::string& path);

} // namespace fluxring
