#include "stairgait/hip.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "stairgait/error.hpp"

namespace stairgait {

namespace {

constexpr double kPi = std::numbers::pi;

template <typename F>
double bisect_increasing(F f, double lo, double hi, double target)
{
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (f(mid) < target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return std::abs(f(lo) - target) <= std::abs(f(hi) - target) ? lo : hi;
}

void check_domain(double x, PlanarPoint start, PlanarPoint end)
{
    const double tol = 1e-12 * std::max(1.0, std::abs(end.x - start.x));
    if (x < start.x - tol || x > end.x + tol) {
        throw std::out_of_range("hip x " + std::to_string(x) + " outside [" +
                                std::to_string(start.x) + ", " + std::to_string(end.x) + "]");
    }
}

void check_descent(PlanarPoint start, PlanarPoint end)
{
    if (!(end.x > start.x)) throw PlanningError("hip", "hip path needs x_end > x_start");
    if (!(start.z > end.z)) throw PlanningError("hip", "hip path needs a positive drop");
}

}  // namespace

double ZmpCogCoeffs::zmp_x(double t) const
{
    t = std::min(t, t_stop);
    return a[0] + t * (a[1] + t * (a[2] + t * a[3]));
}

double ZmpCogCoeffs::zmp_rate(double t) const
{
    if (t > t_stop) return 0.0;
    return a[1] + t * (2.0 * a[2] + t * 3.0 * a[3]);
}

double ZmpCogCoeffs::cog(double t, int derivative) const
{
    if (t > t_stop) {
        if (derivative > 0) return 0.0;
        t = t_stop;
    }
    const double k = z_ci / gravity;
    const double ep = std::exp(omega * t), em = std::exp(-omega * t);
    switch (derivative) {
    case 0:
        return C1 * ep + C2 * em + a[0] + t * (a[1] + t * (a[2] + t * a[3])) +
               k * (6.0 * a[3] * t + 2.0 * a[2]);
    case 1:
        return omega * (C1 * ep - C2 * em) + a[1] + t * (2.0 * a[2] + t * 3.0 * a[3]) +
               6.0 * k * a[3];
    case 2:
        return omega * omega * (C1 * ep + C2 * em) + 2.0 * a[2] + 6.0 * a[3] * t;
    case 3:
        return omega * omega * omega * (C1 * ep - C2 * em) + 6.0 * a[3];
    default:
        throw std::invalid_argument("cog derivative order must be 0..3");
    }
}

ZmpCogCoeffs solve_zmp_cog(double x_zmp_i, double x_zmp_f, double x_cog_i, double x_cog_f,
                           double t_stop, double z_ci, double g)
{
    if (!(t_stop > 0.0) || !(z_ci > 0.0) || !(g > 0.0)) {
        throw PlanningError("hip", "ZMP/COG solve needs t_stop, z_Ci and g positive");
    }
    ZmpCogCoeffs c;
    c.omega = std::sqrt(g / z_ci);
    c.z_ci = z_ci;
    c.gravity = g;
    c.t_stop = t_stop;
    const double k = z_ci / g;
    const double T = t_stop;
    const double ep = std::exp(c.omega * T), em = std::exp(-c.omega * T);

    // unknowns: C1, C2, a0, a1, a2, a3
    Eigen::Matrix<double, 6, 6> A;
    A << 0, 0, 1, 0, 0, 0,
         0, 0, 1, T, T * T, T * T * T,
         0, 0, 0, 1, 0, 0,
         0, 0, 0, 1, 2 * T, 3 * T * T,
         1, 1, 1, 0, 2 * k, 0,
         ep, em, 1, T, T * T + 2 * k, T * T * T + 6 * k * T;
    Eigen::Matrix<double, 6, 1> b;
    b << x_zmp_i, x_zmp_f, 0, 0, x_cog_i, x_cog_f;
    const Eigen::Matrix<double, 6, 1> u = A.fullPivLu().solve(b);
    c.C1 = u[0];
    c.C2 = u[1];
    c.a = {u[2], u[3], u[4], u[5]};
    return c;
}

BrachistochroneParams solve_brachistochrone(PlanarPoint start, PlanarPoint end)
{
    check_descent(start, end);
    const double dx = end.x - start.x;
    const double drop = start.z - end.z;
    const double ratio = dx / drop;
    if (ratio < kPi / 2.0) {
        throw PlanningError("hip", "brachistochrone infeasible: tread/drop = " +
                                       std::to_string(ratio) + " < pi/2");
    }
    auto f = [](double th) { return (kPi - th + std::sin(th)) / (1.0 + std::cos(th)); };
    const double theta =
        ratio == kPi / 2.0 ? 0.0 : bisect_increasing(f, 0.0, std::nextafter(kPi, 0.0), ratio);
    return {drop / (1.0 + std::cos(theta)), theta, start, end};
}

BrachistochroneParams solve_brachistochrone(double delta_x, double drop)
{
    return solve_brachistochrone(PlanarPoint{0.0, drop}, PlanarPoint{delta_x, 0.0});
}

ArcParams solve_arc(PlanarPoint start, PlanarPoint end)
{
    check_descent(start, end);
    const double dx = end.x - start.x;
    const double drop = start.z - end.z;
    if (drop > dx) {
        throw PlanningError("hip", "circular arc infeasible: drop exceeds horizontal travel");
    }
    auto f = [](double th) { return (1.0 - std::cos(th)) / std::sin(th); };
    const double theta = bisect_increasing(f, 0.0, kPi / 2.0, drop / dx);
    return {dx / std::sin(theta), theta, start, end};
}

ArcParams solve_arc(double delta_x, double drop)
{
    return solve_arc(PlanarPoint{0.0, drop}, PlanarPoint{delta_x, 0.0});
}

SlopeParams solve_slope(PlanarPoint start, PlanarPoint end)
{
    if (!(end.x > start.x)) throw PlanningError("hip", "hip path needs x_end > x_start");
    return {(end.z - start.z) / (end.x - start.x), start, end};
}

double brach_theta_of_x(double x_b, const BrachistochroneParams& p)
{
    check_domain(x_b, p.start, p.end);
    if (x_b <= p.start.x) return p.theta_H;
    if (x_b >= p.end.x) return kPi;
    auto x_of = [&](double th) { return p.end.x - kPi * p.R_H + p.R_H * (th - std::sin(th)); };
    return bisect_increasing(x_of, p.theta_H, kPi, x_b);
}

double brach_z_of_x(double x_b, const BrachistochroneParams& p)
{
    check_domain(x_b, p.start, p.end);
    if (x_b <= p.start.x) return p.start.z;
    if (x_b >= p.end.x) return p.end.z;
    return p.end.z + p.R_H * (1.0 + std::cos(brach_theta_of_x(x_b, p)));
}

double arc_theta_of_x(double x_b, const ArcParams& p)
{
    check_domain(x_b, p.start, p.end);
    if (x_b <= p.start.x) return 0.0;
    if (x_b >= p.end.x) return p.theta_H;
    auto x_of = [&](double th) { return p.end.x - p.R_H * std::sin(p.theta_H - th); };
    return bisect_increasing(x_of, 0.0, p.theta_H, x_b);
}

double arc_z_of_x(double x_b, const ArcParams& p)
{
    check_domain(x_b, p.start, p.end);
    if (x_b <= p.start.x) return p.start.z;
    if (x_b >= p.end.x) return p.end.z;
    return p.end.z + p.R_H * (1.0 - std::cos(p.theta_H - arc_theta_of_x(x_b, p)));
}

double slope_z_of_x(double x_b, const SlopeParams& p)
{
    check_domain(x_b, p.start, p.end);
    return p.start.z + p.k * (x_b - p.start.x);
}

HipPath::HipPath(HipMode mode, PlanarPoint start, PlanarPoint end)
    : mode_(mode), start_(start), end_(end)
{
    switch (mode) {
    case HipMode::Brachistochrone: params_ = solve_brachistochrone(start, end); break;
    case HipMode::CircularArc: params_ = solve_arc(start, end); break;
    case HipMode::VirtualSlope: params_ = solve_slope(start, end); break;
    }
}

double HipPath::z(double x) const
{
    x = std::clamp(x, start_.x, end_.x);
    return std::visit(
        [x](const auto& p) -> double {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, BrachistochroneParams>) {
                return brach_z_of_x(x, p);
            } else if constexpr (std::is_same_v<P, ArcParams>) {
                return arc_z_of_x(x, p);
            } else {
                return slope_z_of_x(x, p);
            }
        },
        params_);
}

double adaptive_initial_hip_height(double chain_length, PlanarPoint toe_target, double x_hip)
{
    const double dx = x_hip - toe_target.x;
    if (std::abs(dx) > chain_length) {
        throw PlanningError("hip", "stance toe target out of reach of the extended leg");
    }
    return toe_target.z + std::sqrt(chain_length * chain_length - dx * dx);
}

double extended_chain_length(const LegGeometry& stance, double theta_a)
{
    return stance.thigh + stance.shank + stance.sole * std::sin(theta_a);
}

double adaptive_initial_hip_height(const RobotModel& robot, const StairGeometry& stairs,
                                   double x_hip, double theta_a)
{
    const LegGeometry stance = leg_geometry(robot, 1);
    const PlanarPoint toe{stairs.tread + stance.foot_length(), -stairs.drop};
    return adaptive_initial_hip_height(extended_chain_length(stance, theta_a), toe, x_hip);
}

HipBoundary default_hip_boundary(const SimConfig& config, const LegGeometry& stance)
{
    const double tread = config.stairs.tread;
    const double foot = stance.foot_length();
    const double longest = std::max(leg_geometry(config.robot, 0).foot_length(),
                                    leg_geometry(config.robot, 1).foot_length());
    HipBoundary b;
    b.zmp_i = tread + config.balance.zmp_start_fraction * foot;
    b.zmp_f = tread + config.balance.zmp_end_fraction * foot;
    b.cog_i = 0.5 * (tread + longest);
    b.cog_f = b.cog_i + tread;
    return b;
}

PlanarPoint HipPlan::position(double t) const
{
    if (t < -1e-12 || t > tf + 1e-12) {
        throw std::out_of_range("hip time " + std::to_string(t) + " outside [0, tf]");
    }
    const double x = zmp.cog(std::max(t, 0.0));
    return {x, path.z(x)};
}

HipPlan plan_hip(const SimConfig& config, const HipBoundary& boundary, double z_initial,
                 double nominal_height)
{
    HipPlan plan;
    plan.boundary = boundary;
    plan.z_initial = z_initial;
    plan.nominal_height = nominal_height;
    plan.tf = config.timing.tf;
    plan.zmp = solve_zmp_cog(boundary.zmp_i, boundary.zmp_f, boundary.cog_i, boundary.cog_f,
                             config.timing.t_stop, z_initial, config.gravity);
    plan.path = HipPath(config.hip_mode, {boundary.cog_i, z_initial},
                        {boundary.cog_f, z_initial - config.stairs.drop});
    return plan;
}

}  // namespace stairgait
