// SPDX-License-Identifier: Apache-2.0
//
// Quasi-static continuation of the occupied stable fixed point while the
// applied flux is swept. The state follows its stable branch (a band of phi
// on which g' > 0) until the branch ceases to exist, then jumps to the
// nearest stable root. Fold positions are computed in closed form, so the
// remnant values do not depend on the sub-step size.
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "fluxring/fixed_points.hpp"
#include "fluxring/ring_model.hpp"

namespace fluxring {

struct SweepSchedule {
  std::vector<double> waypoints; // reduced applied flux, visited in order
  double step = 1e-2;            // largest sub-step in applied flux
};

struct SweepSample {
  double phi_ext = 0.0;
  double phi = 0.0;
  double i = 0.0;
  std::int64_t branch_id = 0;
  std::size_t leg = 0;  // schedule leg, 0 for the initial sample
  bool jump = false;    // first sample after a jump
};

struct JumpEvent {
  double phi_ext_at_jump = 0.0;
  double phi_before = 0.0; // tangency point of the vanishing branch
  double phi_after = 0.0;
  bool fold_refined = false; // fold located exactly, not at a sub-step
  std::size_t sample_index = 0; // index of the landing sample
};

struct SweepTrajectory {
  std::vector<SweepSample> samples;
  std::vector<JumpEvent> events;
};

struct HysteresisLoop {
  SweepTrajectory cycle; // 0 -> +A -> 0 -> -A -> 0, legs 1..4
  SweepTrajectory up;    // legs where phi_ext increases
  SweepTrajectory down;  // legs where phi_ext decreases
  double remnant_up = 0.0;   // phi at phi_ext = 0 after the final ascent
  double remnant_down = 0.0; // phi at phi_ext = 0 after descending from +A
  // Enclosed area in the (phi_ext, i) plane, -sum i d(phi_ext) over the
  // cycle; positive for the usual orientation 0 -> +A -> -A -> 0.
  double loop_area = 0.0;
};

// Occupied state during continuation.
struct BranchState {
  double phi_ext = 0.0;
  double phi = 0.0;
};

// The occupied branch has no root at the requested applied flux.
struct FoldSignal {
  double phi_ext_at_fold = 0.0;
  double bias_at_fold = 0.0; // phi_ext + phi_fe at the fold
  double phi_before = 0.0;   // band edge where the branch vanishes
  std::int64_t branch_id = 0;
  int direction = 0;         // +1 lost at the upper band edge, -1 at the lower
};

using ContinuationResult = std::variant<FixedPoint, FoldSignal>;

// Follows the stable branch holding `state` to phi_ext_next. Throws
// InvalidParameter if state.phi is not on a stable branch.
ContinuationResult continue_branch(const BranchState& state, double phi_ext_next,
                                   const ReducedParams& p, double tol = kDefaultRootTol);

// Stable root at the fold nearest to the vanishing branch, excluding that
// branch. Ties go to smaller |i|, then smaller phi.
FixedPoint resolve_jump(const FoldSignal& fold, const ReducedParams& p,
                        double tol = kDefaultRootTol);

// Stable root nearest phi = 0 at phi_ext (same tie-break as resolve_jump).
FixedPoint virgin_state(double phi_ext, const ReducedParams& p, double tol = kDefaultRootTol);

// Runs the schedule from the virgin state at its first waypoint (or from the
// stable root nearest initial_phi when given).
SweepTrajectory run_sweep(const ReducedParams& p, const SweepSchedule& schedule,
                          double tol = kDefaultRootTol,
                          std::optional<double> initial_phi = std::nullopt);

HysteresisLoop run_hysteresis(const ReducedParams& p, double amplitude, double step,
                              double tol = kDefaultRootTol);

// -sum i d(phi_ext) by trapezoids along the trajectory, passing through the
// tangency point of each jump.
double enclosed_area(const SweepTrajectory& traj);

struct RemnantReport {
  std::int64_t n_up = 0;
  std::int64_t n_down = 0;
  double B_remnant_up = 0.0;   // tesla
  double B_remnant_down = 0.0; // tesla
  double phi_up = 0.0;         // raw reduced remnant flux
  double phi_down = 0.0;
};

RemnantReport remnant_report(const HysteresisLoop& loop, const RingParams& params);

} // namespace fluxring
