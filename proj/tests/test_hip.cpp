#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "stairgait/error.hpp"
#include "stairgait/hip.hpp"

using namespace stairgait;
using doctest::Approx;
constexpr double kPi = std::numbers::pi;

TEST_CASE("stationary boundary values give the trivial solution")
{
    const ZmpCogCoeffs c = solve_zmp_cog(12.0, 12.0, 12.0, 12.0, 3.0, 73.0, 981.0);
    CHECK(c.a[0] == Approx(12.0).epsilon(1e-14));
    for (int k = 1; k < 4; ++k) CHECK(std::abs(c.a[k]) < 1e-12);
    CHECK(std::abs(c.C1) < 1e-12);
    CHECK(std::abs(c.C2) < 1e-12);
    for (double t : {0.0, 1.0, 2.9, 3.4}) CHECK(c.cog(t) == Approx(12.0).epsilon(1e-13));
}

TEST_CASE("omega follows the pendulum height")
{
    const ZmpCogCoeffs c = solve_zmp_cog(0, 1, 0, 1, 3.0, 73.0, 981.0);
    CHECK(c.omega == std::sqrt(981.0 / 73.0));
    CHECK(c.omega == Approx(3.666).epsilon(1e-3));
}

TEST_CASE("zmp identity and boundary values on random sets")
{
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> x(-50, 50), T(0.5, 5), z(30, 120);
    for (int k = 0; k < 50; ++k) {
        const double zi = x(rng), zf = x(rng), ci = x(rng), cf = x(rng), ts = T(rng), zc = z(rng);
        const ZmpCogCoeffs c = solve_zmp_cog(zi, zf, ci, cf, ts, zc, 981.0);
        CHECK(std::abs(c.zmp_x(0) - zi) < 1e-9);
        CHECK(std::abs(c.zmp_x(ts) - zf) < 1e-9);
        CHECK(std::abs(c.zmp_rate(0)) < 1e-9);
        CHECK(std::abs(c.zmp_rate(ts)) < 1e-9);
        CHECK(std::abs(c.cog(0) - ci) < 1e-9);
        CHECK(std::abs(c.cog(ts) - cf) < 1e-9);
        double worst = 0.0;
        for (int i = 0; i <= 1000; ++i) {
            const double t = std::min(ts, ts * i / 1000);
            worst = std::max(worst, std::abs(c.cog(t) - zc / 981.0 * c.cog(t, 2) - c.zmp_x(t)));
        }
        CHECK(worst < 1e-9);
    }
}

TEST_CASE("analytic COG derivatives agree with finite differences")
{
    const ZmpCogCoeffs c = solve_zmp_cog(34.25, 42.75, 23.5, 53.5, 3.0, 72.3, 981.0);
    for (int d = 1; d <= 3; ++d) {
        for (double t : {0.4, 1.3, 2.2, 2.8}) {
            auto f = [&](double s) { return c.cog(s, d - 1); };
            CHECK(c.cog(t, d) == Approx(oracle::d1(f, t, 1e-3)).epsilon(1e-7).scale(1.0));
        }
    }
}

TEST_CASE("COG and ZMP hold after the stop")
{
    const ZmpCogCoeffs c = solve_zmp_cog(34.25, 42.75, 23.5, 53.5, 3.0, 72.3, 981.0);
    CHECK(c.cog(3.2) == c.cog(3.0));
    CHECK(c.zmp_x(3.5) == c.zmp_x(3.0));
    CHECK(c.cog(3.2, 1) == 0.0);
    CHECK(c.zmp_rate(3.3) == 0.0);
    CHECK(zmp_x(0.0, c) == Approx(34.25).epsilon(1e-12));
    CHECK(cog_x(3.0, c) == Approx(53.5).epsilon(1e-12));
}

TEST_CASE("invalid ZMP inputs are rejected")
{
    CHECK_THROWS_AS(solve_zmp_cog(0, 1, 0, 1, 0.0, 70, 981), PlanningError);
    CHECK_THROWS_AS(solve_zmp_cog(0, 1, 0, 1, 3.0, -1, 981), PlanningError);
}

TEST_CASE("brachistochrone parameter solve")
{
    const BrachistochroneParams half = solve_brachistochrone(kPi * 4.0, 8.0);
    CHECK(half.theta_H == 0.0);
    CHECK(half.R_H == Approx(4.0).epsilon(1e-14));

    const BrachistochroneParams p = solve_brachistochrone(30.0, 15.0);
    CHECK(std::abs(p.R_H * (kPi - p.theta_H + std::sin(p.theta_H)) - 30.0) < 1e-9);
    CHECK(std::abs(p.R_H * (1.0 + std::cos(p.theta_H)) - 15.0) < 1e-9);
    const double ref = oracle::bisect(
        [](double t) { return (kPi - t + std::sin(t)) / (1 + std::cos(t)); }, 0.0, kPi - 1e-12, 2.0);
    CHECK(p.theta_H == Approx(ref).epsilon(1e-12));
    CHECK(p.theta_H >= 0.0);
    CHECK(p.theta_H < kPi);
    CHECK_THROWS_AS(solve_brachistochrone(10.0, 15.0), PlanningError);
}

TEST_CASE("circular arc parameter solve")
{
    const ArcParams eq = solve_arc(12.0, 12.0);
    CHECK(eq.theta_H == Approx(kPi / 2).epsilon(1e-12));
    CHECK(eq.R_H == Approx(12.0).epsilon(1e-12));
    const ArcParams p = solve_arc(30.0, 15.0);
    CHECK(p.theta_H == Approx(2 * std::atan(0.5)).epsilon(1e-12));
    CHECK(p.R_H == Approx(30.0 / std::sin(2 * std::atan(0.5))).epsilon(1e-12));
    CHECK(std::abs(p.R_H * std::sin(p.theta_H) - 30.0) < 1e-9);
    CHECK(std::abs(p.R_H * (1 - std::cos(p.theta_H)) - 15.0) < 1e-9);
    CHECK_THROWS_AS(solve_arc(30.0, 0.0), PlanningError);
    CHECK_THROWS_AS(solve_arc(10.0, 15.0), PlanningError);
}

TEST_CASE("all three curves: exact endpoints and monotone descent on a dense grid")
{
    const PlanarPoint s{23.5, 72.3}, e{53.5, 57.3};
    for (HipMode mode : {HipMode::Brachistochrone, HipMode::CircularArc, HipMode::VirtualSlope}) {
        const HipPath path(mode, s, e);
        CHECK(std::abs(path.z(s.x) - s.z) < 1e-9);
        CHECK(std::abs(path.z(e.x) - e.z) < 1e-9);
        double prev = path.z(s.x);
        for (int i = 1; i <= 10000; ++i) {
            const double z = path.z(s.x + (e.x - s.x) * i / 10000);
            CHECK(z <= prev + 1e-12);
            CHECK(z >= e.z - 1e-9);
            prev = z;
        }
    }
}

TEST_CASE("brachistochrone map: angles at the ends and residual of the inverse")
{
    const BrachistochroneParams p = solve_brachistochrone({0, 15}, {30, 0});
    CHECK(brach_theta_of_x(30, p) == kPi);
    CHECK(brach_theta_of_x(0, p) == p.theta_H);
    CHECK(brach_z_of_x(30, p) == 0.0);
    CHECK(brach_z_of_x(0, p) == 15.0);
    for (double x : {1.0, 7.5, 15.0, 29.0}) {
        const double th = brach_theta_of_x(x, p);
        CHECK(std::abs(30 - kPi * p.R_H + p.R_H * (th - std::sin(th)) - x) < 1e-10 * p.R_H);
        const double z = brach_z_of_x(x, p);
        CHECK(z > 0.0);
        CHECK(z < 15.0);
    }
    CHECK_THROWS_AS(brach_z_of_x(31, p), std::out_of_range);
    CHECK_THROWS_AS(brach_z_of_x(-1, p), std::out_of_range);
}

TEST_CASE("arc map: angles at the ends")
{
    const ArcParams p = solve_arc({0, 15}, {30, 0});
    CHECK(arc_theta_of_x(30, p) == p.theta_H);
    CHECK(arc_theta_of_x(0, p) == 0.0);
    CHECK(arc_z_of_x(30, p) == 0.0);
    CHECK(arc_z_of_x(0, p) == 15.0);
    const double th = arc_theta_of_x(12.0, p);
    CHECK(std::abs(30 - p.R_H * std::sin(p.theta_H - th) - 12.0) < 1e-10 * p.R_H);
    // circle centred above the end point
    const double z = arc_z_of_x(12.0, p);
    CHECK(std::hypot(12.0 - 30.0, z - p.R_H) == Approx(p.R_H).epsilon(1e-12));
    CHECK_THROWS_AS(arc_z_of_x(30.5, p), std::out_of_range);
}

TEST_CASE("slope map is linear")
{
    const SlopeParams p = solve_slope({10, 70}, {40, 55});
    CHECK(p.k == -0.5);
    CHECK(slope_z_of_x(10, p) == 70);
    CHECK(slope_z_of_x(40, p) == 55);
    CHECK(slope_z_of_x(25, p) == 62.5);
    CHECK_THROWS_AS(slope_z_of_x(9, p), std::out_of_range);
}

TEST_CASE("brachistochrone drops below the straight line inside the interval")
{
    const PlanarPoint s{23.5, 72.284}, e{53.5, 57.284};
    const HipPath b(HipMode::Brachistochrone, s, e), l(HipMode::VirtualSlope, s, e);
    for (int i = 1; i < 100; ++i) {
        const double x = s.x + 30.0 * i / 100;
        CHECK(b.z(x) < l.z(x));
    }
}

TEST_CASE("adaptive initial hip height")
{
    CHECK(adaptive_initial_hip_height(90.0, {47, -15}, 47.0) == 75.0);
    CHECK(adaptive_initial_hip_height(90.0, {47, -15}, 47.0 - 90.0) == -15.0);
    CHECK_THROWS_AS(adaptive_initial_hip_height(90.0, {47, -15}, -50.0), PlanningError);
    const double L = 80.0 + 12.0 * std::sin(kPi / 3);
    const double z = adaptive_initial_hip_height(RobotModel{}, StairGeometry{}, 23.5);
    CHECK(z == Approx(-15.0 + std::sqrt(L * L - 23.5 * 23.5)).epsilon(1e-14));
    CHECK(z == Approx(72.284).epsilon(1e-4));
    CHECK(extended_chain_length(leg_geometry(RobotModel{}, 1), kPi / 3) == Approx(L));
}

TEST_CASE("default boundary values and hip plan")
{
    const SimConfig c;
    const HipBoundary b = default_hip_boundary(c, leg_geometry(c.robot, 1));
    CHECK(b.zmp_i == 34.25);
    CHECK(b.zmp_f == 42.75);
    CHECK(b.cog_i == 23.5);
    CHECK(b.cog_f == 53.5);
    const HipPlan h = plan_hip(c, b, 72.0, 72.0);
    CHECK(h.position(0).z == Approx(72.0).epsilon(1e-12));
    CHECK(h.position(3.5).z == Approx(57.0).epsilon(1e-9));
    CHECK(h.position(3.5).x == Approx(53.5).epsilon(1e-9));
    CHECK(h.lowering() == 0.0);
    CHECK(h.zmp.z_ci == 72.0);
    CHECK_THROWS_AS(h.position(3.6), std::out_of_range);
}
