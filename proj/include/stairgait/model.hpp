#pragma once

#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

namespace stairgait {

/// Planar 9-link toe-foot biped. Lengths in cm, masses in kg.
///
/// Link order: HK, KA (swing thigh/shank), HK', K'A' (stance thigh/shank),
/// UH (torso), AS, ST (swing sole/toe), A'S', S'T' (stance sole/toe).
/// Physical leg 0 owns links 1, 2, 6, 7 and leg 1 owns links 3, 4, 8, 9;
/// roles swap from step to step during a descent.
struct RobotModel {
    double l1 = 40.0, l2 = 40.0, l3 = 40.0, l4 = 40.0, l5 = 30.0;
    double l6 = 12.0, l7 = 5.0, l8 = 12.0, l9 = 5.0;
    double m1 = 6.0, m2 = 4.0, m3 = 6.0, m4 = 4.0, m5 = 30.0;
    double m6 = 0.70, m7 = 0.15, m8 = 0.70, m9 = 0.15;

    bool operator==(const RobotModel&) const = default;
};

/// Link lengths of one physical leg.
struct LegGeometry {
    double thigh = 0.0;
    double shank = 0.0;
    double sole = 0.0;   // ankle to sole joint
    double toe = 0.0;    // sole joint to toe tip

    double reach() const { return thigh + shank; }
    double foot_length() const { return sole + toe; }
};

LegGeometry leg_geometry(const RobotModel& robot, int physical_leg);

struct StairGeometry {
    double drop = 15.0;   // riser height [cm]
    double tread = 30.0;  // horizontal step distance [cm]
    int n_steps = 1;

    bool operator==(const StairGeometry&) const = default;
};

/// Phase knots [s] and DSP foot angles [rad].
struct GaitTiming {
    double t1 = 1.00;
    double tp = 1.25;
    double t2 = 1.50;
    double t_stop = 3.00;
    double t3 = 3.50;
    double tf = 3.50;
    double theta_a = std::numbers::pi / 3.0;
    double theta_b = std::numbers::pi / 3.0;
    double theta_c0_fallback = std::numbers::pi + 0.01;

    /// End of the Bezier bridge that follows the DSP.
    double bridge_end() const { return t2 + (tp - t1); }

    bool operator==(const GaitTiming&) const = default;
};

enum class HipMode { Brachistochrone, CircularArc, VirtualSlope };

std::string_view to_string(HipMode mode);
/// Accepts the short CLI names (brach, arc, slope) and the long names.
std::optional<HipMode> parse_hip_mode(std::string_view text);

struct IkHyperParams {
    int input_neurons = 2;
    int output_neurons = 2;
    int hidden_layers = 1;
    int hidden_nodes = 10;
    std::string activation = "sigmoid";
    double learning_rate = 1e-4;
    int max_iterations = 5000;
    double error_threshold = 1e-6;  // cm^2
    bool warm_start = true;
    bool use_network = true;  // false: closed-form IK only

    bool operator==(const IkHyperParams&) const = default;
};

/// Placement of the ZMP/COG boundary values and the reach margin used when
/// the hip height is adapted to the stair.
struct BalanceParams {
    double zmp_start_fraction = 0.25;  // along the stance foot, heel = 0
    double zmp_end_fraction = 0.75;
    double reach_margin = 0.5;         // cm kept below full leg extension

    bool operator==(const BalanceParams&) const = default;
};

struct SimConfig {
    RobotModel robot;
    StairGeometry stairs;
    GaitTiming timing;
    HipMode hip_mode = HipMode::Brachistochrone;
    double dt = 0.005;
    double gravity = 981.0;  // cm/s^2
    IkHyperParams ik;
    BalanceParams balance;
    std::uint64_t rng_seed = 1;

    bool operator==(const SimConfig&) const = default;
};

}  // namespace stairgait
