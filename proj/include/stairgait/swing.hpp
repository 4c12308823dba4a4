#pragma once

#include <array>
#include <vector>

#include "stairgait/execution.hpp"
#include "stairgait/kinematics.hpp"
#include "stairgait/model.hpp"

namespace stairgait {

/// Toe-off double support: sole pivot 0 -> theta_a on [0, t1], then the
/// toe link 0 -> theta_b on [t1, t2], both eased with 3s^2 - 2s^3.
struct DspProfile {
    double theta_a = 0.0;
    double theta_b = 0.0;
    double t1 = 0.0;
    double t2 = 0.0;
};

DspProfile dsp_profile(const GaitTiming& timing);

struct FootAngles {
    double sole = 0.0;  // θ6 / θ8
    double toe = 0.0;   // θ7 / θ9
};

double smoothstep(double s);
double smoothstep_rate(double s);  // d/ds

FootAngles dsp_foot_angles(double t, const DspProfile& p);
FootAngles dsp_foot_rates(double t, const DspProfile& p);

/// Ankle during toe-off in the frame of the flat initial foot: ankle (0,0),
/// toe tip (l6+l7, 0) held fixed. Throws std::out_of_range outside [0, t2].
PlanarPoint dsp_ankle(double t, const DspProfile& p, const LegGeometry& foot);
PlanarPoint dsp_ankle_velocity(double t, const DspProfile& p, const LegGeometry& foot);

/// Time mirror of the toe-off profile: angles at t equal dsp_foot_angles(t2 - t).
FootAngles landing_dsp(double t, const DspProfile& p);
FootAngles landing_dsp_rates(double t, const DspProfile& p);

/// Root of r(θ - sin θ) = πr - Δx on [0, π]; 0 when Δx >= πr.
double solve_theta_c0(double r, double delta_x_c);

struct QuinticPiece {
    double t0 = 0.0;
    double t1 = 0.0;
    std::array<double, 6> c{};  // in powers of (t - t0)

    double eval(double t, int derivative = 0) const;
};

/// Quintic through position/rate/acceleration at both ends of [0, T].
std::array<double, 6> hermite_quintic(double p0, double v0, double a0,
                                      double p1, double v1, double a1, double T);

/// C2 piecewise quintic. Evaluation clamps t to the covered interval.
struct PiecewiseQuintic {
    std::vector<QuinticPiece> pieces;

    double start() const { return pieces.front().t0; }
    double end() const { return pieces.back().t1; }
    double eval(double t, int derivative = 0) const;
};

struct CycloidParams {
    double r = 0.0;
    double theta_c0 = 0.0;
    PlanarPoint end_anchor;     // ankle at θc = 2π
    PiecewiseQuintic theta_poly;
    double apex_time = -1.0;    // instant θc = π, negative if never reached
};

/// Ankle on the back-traced cycloid. Throws std::out_of_range for θ outside
/// [θc0, 2π].
PlanarPoint cycloid_point(const CycloidParams& p, double theta_c);
PlanarPoint cycloid_tangent(const CycloidParams& p, double theta_c);  // dP/dθ

/// θc(t) on [t_start, tf] with θc(t_start) = θc0, θc(tf) = 2π and zero rate
/// and acceleration at tf. When θc0 < π the schedule passes the apex with
/// r θ̇² = g. The free shape parameters are picked by a grid search that keeps
/// θ̇ >= 0 and minimizes the peak |θ⃛|. Throws PlanningError if no
/// candidate is monotone.
PiecewiseQuintic build_theta_c_poly(const CycloidParams& params, double t_start, double tf,
                                    double g, Execution exec = Execution::Parallel);

struct BezierBridge {
    std::array<PlanarPoint, 4> control{};
    double t_start = 0.0;
    double t_end = 0.0;

    PlanarPoint point(double t) const;
    PlanarPoint velocity(double t) const;
    PlanarPoint acceleration(double t) const;
};

/// Cubic from the toe-off end to the cycloid start. P1 follows the toe-off
/// exit velocity and P2 reproduces the cycloid velocity at t_end.
BezierBridge build_bezier_bridge(PlanarPoint dsp_end, PlanarPoint dsp_end_velocity,
                                 const CycloidParams& cyc, double t_start, double t_end);

/// Complete swing of one foot in the frame of its starting flat ankle.
struct SwingPlan {
    DspProfile dsp;
    LegGeometry foot;
    BezierBridge bridge;
    CycloidParams cycloid;
    PlanarPoint start_ankle;     // flat start
    PlanarPoint landing_ankle;   // flat ankle after the landing DSP
    PlanarPoint landing_toe;     // toe contact at tf
    double delta_x_c = 0.0;
    bool used_fallback = false;  // θc0 taken from the timing table
    double tf = 0.0;
    double orient_back_start = 0.0;  // foot starts turning toe-down

    PlanarPoint ankle(double t) const;
    PlanarPoint velocity(double t) const;
    FootAngles foot_angles(double t) const;
    FootPoints foot_points(double t) const;
    double time_at_apex() const { return cycloid.apex_time; }
    /// |(ẍ, z̈)| of the ankle at tf from the analytic schedule.
    double terminal_acceleration() const;
};

/// Plans the swing from the flat ankle `start` to the flat ankle `landing`
/// (same frame). At tf the foot is in the toe-off pose mirrored onto the
/// landing stair, toe touching.
SwingPlan plan_swing(const SimConfig& config, const LegGeometry& foot, PlanarPoint start,
                     PlanarPoint landing, Execution exec = Execution::Parallel);

PlanarPoint swing_ankle(double t, const SwingPlan& plan);

}  // namespace stairgait
