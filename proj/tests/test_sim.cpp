#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "stairgait/config.hpp"
#include "stairgait/error.hpp"
#include "stairgait/kernels.hpp"
#include "stairgait/sim.hpp"

using namespace stairgait;
using doctest::Approx;
constexpr double kPi = std::numbers::pi;

namespace {

const GaitTrace& default_trace()
{
    static const GaitTrace trace = plan_single_step(SimConfig{});
    return trace;
}

const GaitTrace& three_steps()
{
    static const GaitTrace trace = simulate_descent(SimConfig{}, 3);
    return trace;
}

}  // namespace

TEST_CASE("uniform grid and sample count")
{
    const GaitTrace& tr = default_trace();
    REQUIRE(tr.size() == 701);
    for (size_t i = 0; i < tr.size(); ++i) CHECK(tr.t[i] == Approx(0.005 * i).epsilon(1e-12));
    CHECK(tr.joints.size() == tr.size());
    CHECK(tr.leg0.size() == tr.size());
    CHECK(tr.zmp_x.size() == tr.size());
    CHECK(tr.n_steps == 1);
    CHECK(tr.config_hash == config_hash(SimConfig{}));
}

TEST_CASE("hip height never rises")
{
    const GaitTrace& tr = default_trace();
    for (size_t i = 1; i < tr.size(); ++i) {
        CHECK(tr.leg0[i].hip.z <= tr.leg0[i - 1].hip.z + 1e-12);
        CHECK(tr.leg0[i].hip == tr.leg1[i].hip);
    }
    CHECK(tr.leg0.front().hip.z == Approx(tr.z_initial).epsilon(1e-12));
    CHECK(tr.leg0.back().hip.z == Approx(tr.z_initial - 15.0).epsilon(1e-12));
}

TEST_CASE("swing toe lands on the next stair")
{
    const GaitTrace& tr = default_trace();
    const StairProfile s = descent_profile(SimConfig{}, 1);
    const PlanarPoint toe = tr.leg0.back().toe;
    CHECK(std::abs(toe.z - s.floor_z(toe.x)) < 1e-6);
    // toe strike posture, one stair forward and down
    CHECK(tr.leg0.back().ankle.z - tr.leg0.back().sole.z == Approx(12.0 * std::sin(kPi / 3)));
    CHECK(tr.leg0.back().toe.x - tr.leg0.front().toe.x == Approx(60.0).epsilon(1e-12));
    CHECK(tr.leg0.back().toe.z - tr.leg0.front().toe.z == Approx(-30.0).epsilon(1e-12));
}

TEST_CASE("zero drop is rejected before planning")
{
    SimConfig c;
    c.stairs.drop = 0.0;
    CHECK_FALSE(validate(c).ok());
    CHECK_THROWS_AS(plan_single_step(c), ConfigError);
}

TEST_CASE("one-step descent equals the single-step plan")
{
    const GaitTrace a = simulate_descent(SimConfig{}, 1);
    const GaitTrace& b = default_trace();
    CHECK(a.t == b.t);
    CHECK(a.joints == b.joints);
    CHECK(a.leg0 == b.leg0);
    CHECK(a.leg1 == b.leg1);
    CHECK(a.zmp_x == b.zmp_x);
}

TEST_CASE("three steps descend three risers continuously")
{
    const GaitTrace& tr = three_steps();
    CHECK(tr.size() == 3 * 700 + 1);
    CHECK(std::abs(tr.leg0.front().hip.z - tr.leg0.back().hip.z - 45.0) < 1e-6);
    CHECK(std::abs(tr.leg0.back().hip.x - tr.leg0.front().hip.x - 90.0) < 1e-6);
    REQUIRE(tr.junction_gaps.size() == 2);
    for (double g : tr.junction_gaps) CHECK(g < 1e-6);
    CHECK(tr.step.front() == 0);
    CHECK(tr.step.back() == 2);
}

TEST_CASE("physical legs alternate roles")
{
    const GaitTrace& tr = three_steps();
    const size_t n = 700;
    // leg 1 swings in the middle step, leg 0 stays put
    const PlanarPoint toe0 = tr.leg0[n + 1].toe;
    for (size_t i = n + 1; i <= 2 * n; ++i) CHECK(distance(tr.leg0[i].toe, toe0) < 1e-9);
    CHECK(tr.leg1[2 * n].toe.x - tr.leg1[n].toe.x == Approx(60.0).epsilon(1e-12));
}

TEST_CASE("stance foot stays anchored")
{
    const GaitTrace& tr = default_trace();
    const SimConfig c;
    const PlanarPoint toe = tr.leg1.front().toe;
    const size_t k2 = static_cast<size_t>(std::lround(c.timing.t2 / c.dt));
    const PlanarPoint sole = tr.leg1[k2].sole;
    for (size_t i = 0; i < tr.size(); ++i) {
        CHECK(distance(tr.leg1[i].toe, toe) < 1e-9);
        if (i >= k2) CHECK(distance(tr.leg1[i].sole, sole) < 1e-9);
    }
}

TEST_CASE("stance leg tracks the hip")
{
    const GaitTrace& tr = default_trace();
    for (size_t i = 0; i < tr.size(); ++i) {
        const JointState& q = tr.joints[i];
        const PlanarPoint a = forward_leg(tr.leg1[i].hip, q[3], q[4], 40, 40);
        CHECK(std::abs(a.x - tr.leg1[i].ankle.x) <= 1e-3);
        CHECK(std::abs(a.z - tr.leg1[i].ankle.z) <= 1e-3);
        const PlanarPoint s = forward_leg(tr.leg0[i].hip, q[1], q[2], 40, 40);
        CHECK(std::abs(s.x - tr.leg0[i].ankle.x) <= 1e-3);
        CHECK(std::abs(s.z - tr.leg0[i].ankle.z) <= 1e-3);
        const auto& cf = tr.closed_form[i];
        const PlanarPoint e = forward_leg(tr.leg1[i].hip, cf[2], cf[3], 40, 40);
        CHECK(distance(e, tr.leg1[i].ankle) < 1e-9);
    }
}

TEST_CASE("torso upright, ZMP inside support, no penetration")
{
    for (const GaitTrace* tr : {&default_trace(), &three_steps()}) {
        const StairProfile s = descent_profile(SimConfig{}, tr->n_steps);
        for (size_t i = 0; i < tr->size(); ++i) {
            CHECK(tr->joints[i][5] == kPi / 2);
            CHECK(tr->zmp_x[i] >= tr->support_lo[i] - 1e-9);
            CHECK(tr->zmp_x[i] <= tr->support_hi[i] + 1e-9);
        }
        const CollisionReport r = collision_scan(foot_points(*tr), s);
        CHECK_FALSE(r.violated);
        CHECK(r.min_clearance >= -1e-12);
    }
}

TEST_CASE("identical config gives identical traces")
{
    const GaitTrace a = plan_single_step(SimConfig{}, Execution::Serial);
    const GaitTrace& b = default_trace();
    CHECK(a.joints == b.joints);
    CHECK(a.leg0 == b.leg0);
    CHECK(a.cog_x == b.cog_x);
    CHECK(a.ik_iterations == b.ik_iterations);
}

TEST_CASE("IK bookkeeping")
{
    const GaitTrace& tr = default_trace();
    CHECK(tr.ik_samples == 2 * static_cast<int>(tr.size()));
    CHECK(tr.ik_fallbacks >= 0);
    CHECK(tr.ik_fallbacks <= tr.ik_samples);
    int sum = 0;
    for (int k : tr.ik_iterations_per_sample) sum += k;
    CHECK(sum == tr.ik_iterations);
    SimConfig c;
    c.ik.use_network = false;
    const GaitTrace cf = plan_single_step(c);
    CHECK(cf.ik_iterations == 0);
    for (size_t i = 0; i < cf.size(); ++i) {
        for (int j = 0; j < 4; ++j) CHECK(cf.joints[i][j + 1] == cf.closed_form[i][j]);
    }
}

TEST_CASE("angle derivatives")
{
    std::vector<std::array<double, 4>> flat(20, {1.0, 2.0, 3.0, 4.0});
    const DerivativeStack d = derivatives(flat, 0.01);
    for (const auto& r : d.jerk)
        for (double x : r) CHECK(x == 0.0);
    flat.resize(6);
    CHECK_THROWS_AS(derivatives(flat, 0.01), std::invalid_argument);
    const DerivativeStack s = derivatives(default_trace(), AngleSource::ClosedForm, Execution::Serial);
    const DerivativeStack p = derivatives(default_trace(), AngleSource::ClosedForm, Execution::Parallel);
    CHECK(s.jerk == p.jerk);
    CHECK(s.velocity.size() == default_trace().size());
}

TEST_CASE("mode comparison")
{
    const MetricsSummary m = compare_modes(SimConfig{});
    for (const ModeMetrics& x : m.modes) {
        CHECK(std::isfinite(x.max_acc));
        CHECK(std::isfinite(x.max_jerk));
        CHECK(x.max_acc >= 0.0);
        CHECK(x.max_jerk >= 0.0);
        CHECK(x.max_z_ci > 0.0);
        CHECK(x.acc_joint >= 1);
        CHECK(x.acc_joint <= 4);
        CHECK(x.min_clearance >= -1e-12);
    }
    const ModeMetrics& b = m.get(HipMode::Brachistochrone);
    const ModeMetrics& a = m.get(HipMode::CircularArc);
    const ModeMetrics& l = m.get(HipMode::VirtualSlope);
    CHECK(b.max_jerk < a.max_jerk);
    CHECK(a.max_jerk < l.max_jerk);
    CHECK(a.max_acc < l.max_acc);
    CHECK(l.max_z_ci < b.max_z_ci);
    CHECK(l.max_z_ci < a.max_z_ci);
    CHECK(l.lowering > 0.0);
    CHECK(m.get(HipMode::Brachistochrone).mode == HipMode::Brachistochrone);
    CHECK(m.table().find("slope") != std::string::npos);
    const MetricsSummary s = compare_modes(SimConfig{}, Execution::Serial);
    for (int i = 0; i < 3; ++i) CHECK(s.modes[i].max_jerk == m.modes[i].max_jerk);
}

TEST_CASE("planning failures carry the step")
{
    SimConfig c;
    c.robot.l1 = c.robot.l2 = c.robot.l3 = c.robot.l4 = 10.0;
    try {
        simulate_descent(c, 2);
        FAIL("expected a planning error");
    } catch (const PlanningError& e) {
        CHECK(e.phase().rfind("step ", 0) == 0);
    }
    CHECK_THROWS_AS(simulate_descent(SimConfig{}, 0), PlanningError);
}
