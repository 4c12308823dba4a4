#include "stairgait/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "stairgait/error.hpp"

namespace stairgait {

double norm(PlanarPoint p) { return std::hypot(p.x, p.z); }
double distance(PlanarPoint a, PlanarPoint b) { return norm(a - b); }

PlanarPoint forward_leg(PlanarPoint hip, double theta1, double theta2,
                        double l_upper, double l_lower)
{
    return {hip.x + l_upper * std::cos(theta1) + l_lower * std::cos(theta1 + theta2),
            hip.z - (l_upper * std::sin(theta1) + l_lower * std::sin(theta1 + theta2))};
}

PlanarPoint knee_position(PlanarPoint hip, double theta1, double l_upper)
{
    return {hip.x + l_upper * std::cos(theta1), hip.z - l_upper * std::sin(theta1)};
}

LegAngles analytical_ik(PlanarPoint hip, PlanarPoint ankle, double l_upper, double l_lower)
{
    const double dx = ankle.x - hip.x;
    const double dy = hip.z - ankle.z;
    const double d = std::hypot(dx, dy);
    const double slack = 1e-12 * (l_upper + l_lower);
    if (d > l_upper + l_lower + slack || d < std::abs(l_upper - l_lower) - slack) {
        throw UnreachableTarget("target at distance " + std::to_string(d) +
                                " outside leg annulus [" +
                                std::to_string(std::abs(l_upper - l_lower)) + ", " +
                                std::to_string(l_upper + l_lower) + "]");
    }
    double c = (d * d - l_upper * l_upper - l_lower * l_lower) / (2.0 * l_upper * l_lower);
    c = std::clamp(c, -1.0, 1.0);
    const double knee = -std::acos(c);
    const double hip_angle =
        std::atan2(dy, dx) - std::atan2(l_lower * std::sin(knee), l_upper + l_lower * std::cos(knee));
    return {hip_angle, knee};
}

Eigen::Matrix2d leg_jacobian(double theta1, double theta2, double l_upper, double l_lower)
{
    const double s1 = std::sin(theta1), c1 = std::cos(theta1);
    const double s12 = std::sin(theta1 + theta2), c12 = std::cos(theta1 + theta2);
    Eigen::Matrix2d j;
    j << -l_upper * s1 - l_lower * s12, -l_lower * s12,
         -l_upper * c1 - l_lower * c12, -l_lower * c12;
    return j;
}

bool workspace_check(PlanarPoint hip, PlanarPoint target, double l_upper, double l_lower)
{
    const double d = distance(hip, target);
    return d >= std::abs(l_upper - l_lower) && d <= l_upper + l_lower;
}

FootPoints foot_chain(PlanarPoint ankle, double theta6, double theta7, double l6, double l7)
{
    const PlanarPoint sole{ankle.x + l6 * std::cos(theta6), ankle.z - l6 * std::sin(theta6)};
    const PlanarPoint toe{sole.x + l7 * std::cos(theta7), sole.z - l7 * std::sin(theta7)};
    return {sole, toe};
}

PlanarPoint ankle_from_toe(PlanarPoint toe, double theta6, double theta7, double l6, double l7)
{
    return {toe.x - l6 * std::cos(theta6) - l7 * std::cos(theta7),
            toe.z + l6 * std::sin(theta6) + l7 * std::sin(theta7)};
}

StairProfile::StairProfile(std::vector<double> edges, std::vector<double> heights)
    : edges_(std::move(edges)), heights_(std::move(heights))
{
    if (heights_.size() != edges_.size() + 1) {
        throw std::invalid_argument("stair profile needs one more height than edges");
    }
    for (std::size_t i = 1; i < edges_.size(); ++i) {
        if (!(edges_[i] > edges_[i - 1])) {
            throw std::invalid_argument("stair edges must be strictly increasing");
        }
    }
    for (std::size_t i = 1; i < heights_.size(); ++i) {
        if (heights_[i] > heights_[i - 1]) {
            throw std::invalid_argument("stair heights must be non-increasing");
        }
    }
}

double StairProfile::floor_z(double x) const
{
    const auto it = std::lower_bound(edges_.begin(), edges_.end(), x);
    return heights_[static_cast<std::size_t>(it - edges_.begin())];
}

StairProfile make_staircase(double first_edge, double tread, double drop, int first, int count)
{
    if (count < 1) throw std::invalid_argument("staircase needs at least one stair");
    std::vector<double> edges;
    std::vector<double> heights;
    for (int j = first; j < first + count; ++j) {
        if (j > first) edges.push_back(first_edge + (j - 1) * tread);
        heights.push_back(-j * drop);
    }
    return StairProfile(std::move(edges), std::move(heights));
}

CollisionReport collision_check(const std::vector<PlanarPoint>& points,
                                const StairProfile& profile, double tolerance)
{
    CollisionReport report;
    report.min_clearance = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double c = points[i].z - profile.floor_z(points[i].x);
        if (c < report.min_clearance) {
            report.min_clearance = c;
            report.worst_index = i;
        }
    }
    report.violated = report.min_clearance < -tolerance;
    return report;
}

}  // namespace stairgait
