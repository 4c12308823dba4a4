#pragma once

#include <vector>

#include "stairgait/execution.hpp"
#include "stairgait/hip.hpp"
#include "stairgait/kinematics.hpp"
#include "stairgait/swing.hpp"

namespace stairgait {

/// First derivative on a uniform grid: central differences inside,
/// second-order one-sided (-3f0 + 4f1 - f2)/(2dt) at both ends.
/// Needs at least three samples.
std::vector<double> finite_difference(const std::vector<double>& f, double dt,
                                      Execution exec = Execution::Parallel);

/// Signed clearance of every point above the floor.
std::vector<double> clearances(const std::vector<PlanarPoint>& points, const StairProfile& profile,
                               Execution exec = Execution::Parallel);

/// Same result as collision_check; the minimum is taken serially from the
/// per-point clearances so both variants pick the same index.
CollisionReport collision_scan(const std::vector<PlanarPoint>& points, const StairProfile& profile,
                               double tolerance = 1e-9, Execution exec = Execution::Parallel);

std::vector<LegAngles> batch_analytical_ik(const std::vector<PlanarPoint>& hips,
                                           const std::vector<PlanarPoint>& targets,
                                           double l_upper, double l_lower,
                                           Execution exec = Execution::Parallel);

std::vector<PlanarPoint> sample_swing(const SwingPlan& plan, const std::vector<double>& times,
                                      Execution exec = Execution::Parallel);
std::vector<PlanarPoint> sample_hip(const HipPlan& plan, const std::vector<double>& times,
                                    Execution exec = Execution::Parallel);

/// Largest |hip - ankle| - bound over paired samples.
double max_reach_excess(const std::vector<PlanarPoint>& hips, const std::vector<PlanarPoint>& ankles,
                        double bound, Execution exec = Execution::Parallel);

}  // namespace stairgait
