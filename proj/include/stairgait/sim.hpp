#pragma once

#include <array>
#include <string>
#include <vector>

#include "stairgait/execution.hpp"
#include "stairgait/hip.hpp"
#include "stairgait/kinematics.hpp"
#include "stairgait/model.hpp"
#include "stairgait/swing.hpp"

namespace stairgait {

/// Cartesian joints of one leg.
struct LegPoints {
    PlanarPoint hip, knee, ankle, sole, toe;

    bool operator==(const LegPoints&) const = default;
};

/// Sampled gait in the world frame. Columns are per physical leg: leg 0
/// (θ1, θ2, θ6, θ7) swings on even steps, leg 1 (θ3, θ4, θ8, θ9) on odd
/// steps.
struct GaitTrace {
    std::vector<double> t;
    std::vector<JointState> joints;
    std::vector<LegPoints> leg0;
    std::vector<LegPoints> leg1;
    std::vector<double> zmp_x;
    std::vector<double> cog_x;

    // not exported
    std::vector<std::array<double, 4>> closed_form;  // θ1..θ4 from the closed-form IK
    std::vector<double> support_lo;
    std::vector<double> support_hi;
    std::vector<int> step;

    std::string config_hash;
    HipMode hip_mode = HipMode::Brachistochrone;
    double dt = 0.0;
    int n_steps = 0;
    double z_initial = 0.0;
    double nominal_height = 0.0;
    int ik_samples = 0;
    int ik_fallbacks = 0;
    int ik_iterations = 0;
    std::vector<int> ik_iterations_per_sample;
    std::vector<double> junction_gaps;  // max C0 gap over all points at each step boundary

    std::size_t size() const { return t.size(); }
    double lowering() const { return nominal_height - z_initial; }
};

/// Everything planned for one step in its local frame (flat swing ankle at
/// the origin on stair 0).
struct StepPlan {
    int swing_leg = 0;
    LegGeometry swing;
    LegGeometry stance;
    SwingPlan swing_plan;
    HipPlan hip;
    PlanarPoint stance_toe;
    PlanarPoint stance_flat_ankle;

    LegPoints swing_points(double t) const;
    LegPoints stance_points(double t) const;
    FootAngles stance_foot_angles(double t) const;
};

/// Hip height used for every step: the adaptive height, lowered by the
/// smallest amount that keeps both legs within reach - margin at every
/// sample.
struct HeightChoice {
    double nominal = 0.0;
    double chosen = 0.0;
};

HeightChoice choose_initial_height(const SimConfig& config, Execution exec = Execution::Parallel);

StepPlan plan_step(const SimConfig& config, int swing_leg, double z_initial, double nominal,
                   Execution exec = Execution::Parallel);

GaitTrace plan_single_step(const SimConfig& config, Execution exec = Execution::Parallel);
GaitTrace simulate_descent(const SimConfig& config, int n_steps,
                           Execution exec = Execution::Parallel);

/// World-frame staircase under a descent of n_steps.
StairProfile descent_profile(const SimConfig& config, int n_steps);

struct DerivativeStack {
    std::vector<std::array<double, 4>> velocity;
    std::vector<std::array<double, 4>> acceleration;
    std::vector<std::array<double, 4>> jerk;
};

/// Successive finite differences of sampled angle columns on a uniform
/// grid. Throws std::invalid_argument for fewer than 7 samples.
DerivativeStack derivatives(const std::vector<std::array<double, 4>>& angles, double dt,
                            Execution exec = Execution::Parallel);

enum class AngleSource { Network, ClosedForm };
DerivativeStack derivatives(const GaitTrace& trace, AngleSource source = AngleSource::ClosedForm,
                            Execution exec = Execution::Parallel);

struct ModeMetrics {
    HipMode mode = HipMode::Brachistochrone;
    double max_z_ci = 0.0;
    double nominal_height = 0.0;
    double lowering = 0.0;
    double max_acc = 0.0;
    double max_jerk = 0.0;
    int acc_joint = 0;  // 1..4
    int jerk_joint = 0;
    double acc_time = 0.0;
    double jerk_time = 0.0;
    double min_clearance = 0.0;
    int ik_fallbacks = 0;
};

struct MetricsSummary {
    std::array<ModeMetrics, 3> modes;  // brach, arc, slope

    const ModeMetrics& get(HipMode mode) const { return modes[static_cast<int>(mode)]; }
    std::string table() const;
};

ModeMetrics measure(const GaitTrace& trace, const StairProfile& profile,
                    Execution exec = Execution::Parallel);
MetricsSummary compare_modes(const SimConfig& config, Execution exec = Execution::Parallel);

/// All ankle/sole/toe points of both legs, in sample order.
std::vector<PlanarPoint> foot_points(const GaitTrace& trace);

}  // namespace stairgait
