#pragma once

#include <array>
#include <variant>

#include "stairgait/kinematics.hpp"
#include "stairgait/model.hpp"

namespace stairgait {

/// One-mass ZMP/COG solution. ZMP p(t) = a0 + a1 t + a2 t^2 + a3 t^3 and
/// x_C(t) = C1 e^{ωt} + C2 e^{-ωt} + p(t) + (z_Ci/g)(6 a3 t + 2 a2) on
/// [0, t_stop]; both are frozen at their t_stop values afterwards.
struct ZmpCogCoeffs {
    std::array<double, 4> a{};
    double C1 = 0.0;
    double C2 = 0.0;
    double omega = 0.0;
    double z_ci = 0.0;
    double gravity = 0.0;
    double t_stop = 0.0;

    double zmp_x(double t) const;
    double zmp_rate(double t) const;
    /// derivative = 0..3
    double cog(double t, int derivative = 0) const;
};

ZmpCogCoeffs solve_zmp_cog(double x_zmp_i, double x_zmp_f, double x_cog_i, double x_cog_f,
                           double t_stop, double z_ci, double g);

inline double zmp_x(double t, const ZmpCogCoeffs& c) { return c.zmp_x(t); }
inline double cog_x(double t, const ZmpCogCoeffs& c) { return c.cog(t); }

struct BrachistochroneParams {
    double R_H = 0.0;
    double theta_H = 0.0;
    PlanarPoint start;
    PlanarPoint end;
};

struct ArcParams {
    double R_H = 0.0;
    double theta_H = 0.0;
    PlanarPoint start;
    PlanarPoint end;
};

struct SlopeParams {
    double k = 0.0;
    PlanarPoint start;
    PlanarPoint end;
};

/// R(π - θ + sin θ) = Δx, R(1 + cos θ) = drop. Requires Δx/drop >= π/2.
BrachistochroneParams solve_brachistochrone(PlanarPoint start, PlanarPoint end);
/// Same curve with start (0, drop) and end (delta_x, 0).
BrachistochroneParams solve_brachistochrone(double delta_x, double drop);
/// R sin θ = Δx, R(1 - cos θ) = drop. Requires 0 < drop <= Δx.
ArcParams solve_arc(PlanarPoint start, PlanarPoint end);
ArcParams solve_arc(double delta_x, double drop);
SlopeParams solve_slope(PlanarPoint start, PlanarPoint end);

/// Hip height above x_b. All three throw std::out_of_range outside
/// [start.x, end.x].
double brach_z_of_x(double x_b, const BrachistochroneParams& p);
double arc_z_of_x(double x_b, const ArcParams& p);
double slope_z_of_x(double x_b, const SlopeParams& p);

/// Curve parameter θ_b at x_b (bisection, exposed for residual checks).
double brach_theta_of_x(double x_b, const BrachistochroneParams& p);
double arc_theta_of_x(double x_b, const ArcParams& p);

class HipPath {
public:
    HipPath() = default;
    HipPath(HipMode mode, PlanarPoint start, PlanarPoint end);

    HipMode mode() const { return mode_; }
    PlanarPoint start() const { return start_; }
    PlanarPoint end() const { return end_; }
    /// Height at x; x is clamped into the path's domain.
    double z(double x) const;
    const std::variant<BrachistochroneParams, ArcParams, SlopeParams>& params() const { return params_; }

private:
    HipMode mode_ = HipMode::VirtualSlope;
    PlanarPoint start_;
    PlanarPoint end_;
    std::variant<BrachistochroneParams, ArcParams, SlopeParams> params_;
};

/// z_toe + sqrt(L^2 - (x_hip - x_toe)^2). Throws PlanningError when
/// |x_hip - x_toe| > L.
double adaptive_initial_hip_height(double chain_length, PlanarPoint toe_target, double x_hip);

/// Extended stance chain thigh + shank + sole sin θa, toe target on the
/// next stair (tread + foot length, -drop) in the frame of the flat swing
/// ankle.
double extended_chain_length(const LegGeometry& stance, double theta_a);
double adaptive_initial_hip_height(const RobotModel& robot, const StairGeometry& stairs,
                                   double x_hip, double theta_a = std::numbers::pi / 3.0);

/// ZMP and COG boundary values of one step.
struct HipBoundary {
    double zmp_i = 0.0;
    double zmp_f = 0.0;
    double cog_i = 0.0;
    double cog_f = 0.0;
};

/// Stance foot rests flat with its ankle at x = tread; ZMP moves from
/// zmp_start_fraction to zmp_end_fraction of that foot. The COG starts above
/// the stair nosing at (tread + longest foot)/2 and advances one tread.
HipBoundary default_hip_boundary(const SimConfig& config, const LegGeometry& stance);

struct HipPlan {
    ZmpCogCoeffs zmp;
    HipPath path;
    HipBoundary boundary;
    double z_initial = 0.0;
    double nominal_height = 0.0;  // before lowering
    double tf = 0.0;

    double lowering() const { return nominal_height - z_initial; }
    PlanarPoint position(double t) const;
};

HipPlan plan_hip(const SimConfig& config, const HipBoundary& boundary, double z_initial,
                 double nominal_height);

}  // namespace stairgait
