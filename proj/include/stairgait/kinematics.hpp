#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include <Eigen/Core>

namespace stairgait {

struct PlanarPoint {
    double x = 0.0;
    double z = 0.0;

    PlanarPoint operator+(PlanarPoint o) const { return {x + o.x, z + o.z}; }
    PlanarPoint operator-(PlanarPoint o) const { return {x - o.x, z - o.z}; }
    PlanarPoint operator*(double s) const { return {x * s, z * s}; }
    bool operator==(const PlanarPoint&) const = default;
};

inline PlanarPoint operator*(double s, PlanarPoint p) { return p * s; }
double distance(PlanarPoint a, PlanarPoint b);
double norm(PlanarPoint p);

/// theta[0..8] hold θ1..θ9. θ1, θ3 are thigh elevations from +x at the hip,
/// θ2, θ4 relative knee angles (<= 0), θ5 the torso, θ6..θ9 foot-link
/// elevations below horizontal.
struct JointState {
    std::array<double, 9> theta{};

    double& operator[](int joint) { return theta[joint - 1]; }
    double operator[](int joint) const { return theta[joint - 1]; }
    bool operator==(const JointState&) const = default;
};

struct LegAngles {
    double hip = 0.0;   // θ1 / θ3
    double knee = 0.0;  // θ2 / θ4
};

PlanarPoint forward_leg(PlanarPoint hip, double theta1, double theta2,
                        double l_upper, double l_lower);
PlanarPoint knee_position(PlanarPoint hip, double theta1, double l_upper);

/// Closed-form inverse of forward_leg on the knee-backward branch.
/// Throws UnreachableTarget outside the annulus |l_u - l_l| <= d <= l_u + l_l.
LegAngles analytical_ik(PlanarPoint hip, PlanarPoint ankle, double l_upper, double l_lower);

/// d(x_A, z_A)/d(θ1, θ2).
Eigen::Matrix2d leg_jacobian(double theta1, double theta2, double l_upper, double l_lower);

bool workspace_check(PlanarPoint hip, PlanarPoint target, double l_upper, double l_lower);

struct FootPoints {
    PlanarPoint sole;
    PlanarPoint toe;
};

FootPoints foot_chain(PlanarPoint ankle, double theta6, double theta7, double l6, double l7);
/// Ankle position that puts the toe tip at `toe` for the given foot angles.
PlanarPoint ankle_from_toe(PlanarPoint toe, double theta6, double theta7, double l6, double l7);

/// Piecewise-constant descending floor. Stair j covers
/// [edges[j-1], edges[j]) with height heights[j]; the first stair extends
/// to -inf and the last to +inf. An exact edge belongs to the upper stair.
class StairProfile {
public:
    StairProfile(std::vector<double> edges, std::vector<double> heights);

    double floor_z(double x) const;
    const std::vector<double>& edges() const { return edges_; }
    const std::vector<double>& heights() const { return heights_; }

private:
    std::vector<double> edges_;
    std::vector<double> heights_;
};

/// Staircase whose stair j (j = first..first+count-1) has top z = -j*drop and
/// starts at x = first_edge + (j - 1)*tread.
StairProfile make_staircase(double first_edge, double tread, double drop, int first, int count);

struct CollisionReport {
    double min_clearance = 0.0;
    std::size_t worst_index = 0;
    bool violated = false;
};

CollisionReport collision_check(const std::vector<PlanarPoint>& points,
                                const StairProfile& profile, double tolerance = 1e-9);

}  // namespace stairgait
