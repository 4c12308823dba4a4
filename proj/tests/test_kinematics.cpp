#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "stairgait/error.hpp"
#include "stairgait/kinematics.hpp"

using namespace stairgait;
using doctest::Approx;
constexpr double kPi = std::numbers::pi;

static void check_point(PlanarPoint p, double x, double z, double tol = 1e-12)
{
    CHECK(std::abs(p.x - x) <= tol);
    CHECK(std::abs(p.z - z) <= tol);
}

TEST_CASE("forward_leg examples")
{
    check_point(forward_leg({0, 100}, kPi / 2, 0.0, 40, 40), 0.0, 20.0);
    check_point(forward_leg({0, 100}, 0.0, 0.0, 40, 40), 80.0, 100.0);
    check_point(forward_leg({0, 100}, kPi / 2, -kPi / 2, 40, 40), 40.0, 60.0);
}

TEST_CASE("forward_leg agrees with a complex-rotation chain on 1000 angle pairs")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> a(-kPi, kPi), l(5.0, 60.0);
    for (int i = 0; i < 1000; ++i) {
        const double t1 = a(rng), t2 = a(rng), lu = l(rng), ll = l(rng);
        const PlanarPoint hip{l(rng), l(rng)};
        const PlanarPoint got = forward_leg(hip, t1, t2, lu, ll);
        const PlanarPoint ref = oracle::chain(hip, {{lu, t1}, {ll, t1 + t2}});
        CHECK(std::abs(got.x - ref.x) < 1e-12);
        CHECK(std::abs(got.z - ref.z) < 1e-12);
    }
}

TEST_CASE("analytical_ik examples")
{
    auto a = analytical_ik({0, 100}, {0, 20}, 40, 40);
    CHECK(a.hip == Approx(kPi / 2).epsilon(1e-12));
    CHECK(a.knee == 0.0);
    a = analytical_ik({0, 100}, {40, 60}, 40, 40);
    CHECK(a.hip == Approx(kPi / 2).epsilon(1e-12));
    CHECK(a.knee == Approx(-kPi / 2).epsilon(1e-12));
    CHECK_THROWS_AS(analytical_ik({0, 100}, {0, 19}, 40, 40), UnreachableTarget);
}

TEST_CASE("analytical_ik inverts forward_leg on the knee-backward branch")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> t1d(0.05, kPi - 0.05), t2d(-kPi + 0.05, -1e-3);
    std::uniform_real_distribution<double> l(20.0, 50.0);
    for (int i = 0; i < 1000; ++i) {
        const double t1 = t1d(rng), t2 = t2d(rng), lu = l(rng), ll = l(rng);
        const PlanarPoint hip{3.0, 90.0};
        const PlanarPoint ankle = forward_leg(hip, t1, t2, lu, ll);
        const LegAngles s = analytical_ik(hip, ankle, lu, ll);
        CHECK(s.knee <= 0.0);
        CHECK(std::abs(s.knee - t2) < 1e-7);
        CHECK(std::abs(std::remainder(s.hip - t1, 2 * kPi)) < 1e-7);
        const PlanarPoint back = forward_leg(hip, s.hip, s.knee, lu, ll);
        CHECK(distance(back, ankle) < 1e-9);
    }
}

TEST_CASE("analytical_ik is exact away from the extended and folded limits")
{
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> t1d(0.1, kPi - 0.1), t2d(-2.8, -0.3);
    for (int i = 0; i < 200; ++i) {
        const double t1 = t1d(rng), t2 = t2d(rng);
        const LegAngles s = analytical_ik({0, 0}, forward_leg({0, 0}, t1, t2, 40, 40), 40, 40);
        CHECK(std::abs(s.hip - t1) < 1e-9);
        CHECK(std::abs(s.knee - t2) < 1e-9);
    }
}

TEST_CASE("leg jacobian matches finite differences")
{
    const double t1 = 1.1, t2 = -0.7, h = 1e-6;
    const Eigen::Matrix2d J = leg_jacobian(t1, t2, 40, 35);
    const PlanarPoint p1 = forward_leg({0, 0}, t1 + h, t2, 40, 35), m1 = forward_leg({0, 0}, t1 - h, t2, 40, 35);
    const PlanarPoint p2 = forward_leg({0, 0}, t1, t2 + h, 40, 35), m2 = forward_leg({0, 0}, t1, t2 - h, 40, 35);
    CHECK(J(0, 0) == Approx((p1.x - m1.x) / (2 * h)).epsilon(1e-7));
    CHECK(J(1, 0) == Approx((p1.z - m1.z) / (2 * h)).epsilon(1e-7));
    CHECK(J(0, 1) == Approx((p2.x - m2.x) / (2 * h)).epsilon(1e-7));
    CHECK(J(1, 1) == Approx((p2.z - m2.z) / (2 * h)).epsilon(1e-7));
}

TEST_CASE("knee lies on both links")
{
    const PlanarPoint hip{1, 80};
    const LegAngles a = analytical_ik(hip, {20, 15}, 40, 40);
    const PlanarPoint k = knee_position(hip, a.hip, 40);
    CHECK(distance(k, hip) == Approx(40).epsilon(1e-12));
    CHECK(distance(k, {20, 15}) == Approx(40).epsilon(1e-12));
    CHECK(k.x < 1.0);  // knee behind the hip on this branch
}

TEST_CASE("workspace_check examples")
{
    CHECK(workspace_check({0, 100}, {0, 20}, 40, 40));
    CHECK_FALSE(workspace_check({0, 100}, {0, 19}, 40, 40));
    CHECK(workspace_check({0, 100}, {0, 100}, 40, 40));
    CHECK_FALSE(workspace_check({0, 100}, {0, 95}, 40, 30));
    CHECK(workspace_check({0, 100}, {0, 90}, 40, 30));
}

TEST_CASE("foot_chain examples")
{
    FootPoints f = foot_chain({0, 0}, 0.0, 0.0, 12, 5);
    check_point(f.sole, 12, 0);
    check_point(f.toe, 17, 0);
    f = foot_chain({0, 0}, kPi / 2, 0.0, 12, 5);
    check_point(f.sole, 0, -12);
    check_point(f.toe, 5, -12);
    const PlanarPoint ankle = ankle_from_toe({17, 0}, kPi / 3, kPi / 3, 12, 5);
    check_point(ankle, 12 * (1 - std::cos(kPi / 3)) + 5 * (1 - std::cos(kPi / 3)),
                12 * std::sin(kPi / 3) + 5 * std::sin(kPi / 3));
    CHECK(ankle.x == Approx(8.5));
    CHECK(ankle.z == Approx(14.7224318643355));
    const FootPoints back = foot_chain(ankle, kPi / 3, kPi / 3, 12, 5);
    check_point(back.toe, 17, 0, 1e-12);
}

TEST_CASE("foot_chain matches the complex chain")
{
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> a(-1.5, 1.5);
    for (int i = 0; i < 100; ++i) {
        const double t6 = a(rng), t7 = a(rng);
        const FootPoints f = foot_chain({2, 3}, t6, t7, 12, 5);
        const PlanarPoint ref = oracle::chain({2, 3}, {{12, t6}, {5, t7}});
        CHECK(distance(f.toe, ref) < 1e-12);
    }
}

TEST_CASE("stair profile floor and edges")
{
    const StairProfile p = make_staircase(23.5, 30, 15, -1, 4);
    CHECK(p.floor_z(-100) == 15.0);
    CHECK(p.floor_z(-6.5) == 15.0);  // edge belongs to the upper stair
    CHECK(p.floor_z(-6.4) == 0.0);
    CHECK(p.floor_z(23.5) == 0.0);
    CHECK(p.floor_z(23.6) == -15.0);
    CHECK(p.floor_z(60) == -30.0);
    CHECK(p.floor_z(1e6) == -30.0);
    CHECK_THROWS(StairProfile({1.0, 0.5}, {0, -1, -2}));
    CHECK_THROWS(StairProfile({1.0}, {0, 1}));
    CHECK_THROWS(StairProfile({1.0}, {0}));
}

TEST_CASE("collision_check examples and monotonicity")
{
    const StairProfile flat({}, {0.0});
    CollisionReport r = collision_check({{10, 5}}, flat);
    CHECK(r.min_clearance == 5.0);
    CHECK_FALSE(r.violated);
    r = collision_check({{0, 3}, {10, -0.1}, {20, 1}}, flat);
    CHECK(r.violated);
    CHECK(r.worst_index == 1);
    CHECK(r.min_clearance == Approx(-0.1));

    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> x(-20, 100), z(-40, 20), lift(0, 3);
    const StairProfile stairs = make_staircase(23.5, 30, 15, -1, 5);
    std::vector<PlanarPoint> pts(50);
    for (auto& p : pts) p = {x(rng), z(rng)};
    for (int k = 0; k < 20; ++k) {
        const double before = collision_check(pts, stairs).min_clearance;
        for (auto& p : pts) p.z += lift(rng);
        CHECK(collision_check(pts, stairs).min_clearance >= before);
    }
}
