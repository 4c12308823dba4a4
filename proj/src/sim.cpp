#include "stairgait/sim.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "stairgait/config.hpp"
#include "stairgait/error.hpp"
#include "stairgait/ikann.hpp"
#include "stairgait/kernels.hpp"

namespace stairgait {

namespace {

int sample_count(const SimConfig& config)
{
    return static_cast<int>(std::lround(config.timing.tf / config.dt));
}

std::vector<double> local_times(const SimConfig& config)
{
    const int n = sample_count(config);
    std::vector<double> t(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) t[static_cast<std::size_t>(i)] = i * config.dt;
    t.back() = config.timing.tf;
    return t;
}

LegPoints leg_points(PlanarPoint hip, PlanarPoint ankle, FootAngles foot_angles,
                     const LegGeometry& leg, const PlanarPoint* toe_pivot = nullptr)
{
    LegPoints p;
    p.hip = hip;
    p.ankle = ankle;
    const LegAngles a = analytical_ik(hip, ankle, leg.thigh, leg.shank);
    p.knee = knee_position(hip, a.hip, leg.thigh);
    const FootPoints f = foot_chain(ankle, foot_angles.sole, foot_angles.toe, leg.sole, leg.toe);
    p.sole = f.sole;
    p.toe = f.toe;
    if (toe_pivot) {
        p.toe = *toe_pivot;
        p.sole = {p.toe.x - leg.toe * std::cos(foot_angles.toe),
                  p.toe.z + leg.toe * std::sin(foot_angles.toe)};
    }
    return p;
}

LegPoints shifted(LegPoints p, PlanarPoint o)
{
    p.hip = p.hip + o;
    p.knee = p.knee + o;
    p.ankle = p.ankle + o;
    p.sole = p.sole + o;
    p.toe = p.toe + o;
    return p;
}

double max_gap(const LegPoints& a, const LegPoints& b)
{
    return std::max({distance(a.hip, b.hip), distance(a.knee, b.knee), distance(a.ankle, b.ankle),
                     distance(a.sole, b.sole), distance(a.toe, b.toe)});
}

std::vector<PlanarPoint> stance_ankles(const SimConfig& config, const LegGeometry& stance,
                                       const std::vector<double>& times)
{
    const DspProfile dsp = dsp_profile(config.timing);
    const PlanarPoint toe{config.stairs.tread + stance.foot_length(), -config.stairs.drop};
    std::vector<PlanarPoint> out;
    out.reserve(times.size());
    for (double t : times) {
        const FootAngles a = t <= dsp.t2 ? landing_dsp(t, dsp) : FootAngles{};
        out.push_back(ankle_from_toe(toe, a.sole, a.toe, stance.sole, stance.toe));
    }
    return out;
}

template <typename F>
auto with_phase(const std::string& prefix, F&& f) -> decltype(f())
{
    try {
        return f();
    } catch (const PlanningError& e) {
        throw PlanningError(prefix + "/" + e.phase(), e.what());
    } catch (const UnreachableTarget& e) {
        throw PlanningError(prefix + "/ik", e.what());
    }
}

}  // namespace

FootAngles StepPlan::stance_foot_angles(double t) const
{
    return t <= swing_plan.dsp.t2 ? landing_dsp(t, swing_plan.dsp) : FootAngles{};
}

LegPoints StepPlan::swing_points(double t) const
{
    const PlanarPoint start_toe = swing_plan.start_ankle + PlanarPoint{swing.foot_length(), 0.0};
    const PlanarPoint* pivot = nullptr;
    if (t <= swing_plan.dsp.t2) pivot = &start_toe;
    if (t >= swing_plan.tf) pivot = &swing_plan.landing_toe;
    return leg_points(hip.position(t), swing_plan.ankle(t), swing_plan.foot_angles(t), swing, pivot);
}

LegPoints StepPlan::stance_points(double t) const
{
    const FootAngles a = stance_foot_angles(t);
    const PlanarPoint ankle = t <= swing_plan.dsp.t2
                                  ? ankle_from_toe(stance_toe, a.sole, a.toe, stance.sole, stance.toe)
                                  : stance_flat_ankle;
    return leg_points(hip.position(t), ankle, a, stance, &stance_toe);
}

StepPlan plan_step(const SimConfig& config, int swing_leg, double z_initial, double nominal,
                   Execution exec)
{
    StepPlan s;
    s.swing_leg = swing_leg;
    s.swing = leg_geometry(config.robot, swing_leg);
    s.stance = leg_geometry(config.robot, 1 - swing_leg);
    const double tread = config.stairs.tread, drop = config.stairs.drop;
    s.swing_plan = plan_swing(config, s.swing, {0.0, 0.0}, {2.0 * tread, -2.0 * drop}, exec);
    s.hip = plan_hip(config, default_hip_boundary(config, s.stance), z_initial, nominal);
    s.stance_toe = {tread + s.stance.foot_length(), -drop};
    s.stance_flat_ankle = {tread, -drop};
    return s;
}

HeightChoice choose_initial_height(const SimConfig& config, Execution exec)
{
    const std::vector<double> times = local_times(config);
    const int parities = config.stairs.n_steps > 1 ? 2 : 1;
    HeightChoice best{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    for (int swing_leg = 0; swing_leg < parities; ++swing_leg) {
        const LegGeometry swing = leg_geometry(config.robot, swing_leg);
        const LegGeometry stance = leg_geometry(config.robot, 1 - swing_leg);
        const HipBoundary boundary = default_hip_boundary(config, stance);
        const PlanarPoint toe{config.stairs.tread + stance.foot_length(), -config.stairs.drop};
        const double nominal = adaptive_initial_hip_height(
            extended_chain_length(stance, config.timing.theta_a), toe, boundary.cog_i);

        const SwingPlan plan = plan_swing(config, swing, {0.0, 0.0},
                                          {2.0 * config.stairs.tread, -2.0 * config.stairs.drop}, exec);
        const std::vector<PlanarPoint> swing_ankles = sample_swing(plan, times, exec);
        const std::vector<PlanarPoint> stance_ank = stance_ankles(config, stance, times);
        const double margin = config.balance.reach_margin;
        auto excess = [&](double z) {
            const HipPlan hip = plan_hip(config, boundary, z, nominal);
            const std::vector<PlanarPoint> hips = sample_hip(hip, times, exec);
            return std::max(max_reach_excess(hips, swing_ankles, swing.reach() - margin, exec),
                            max_reach_excess(hips, stance_ank, stance.reach() - margin, exec));
        };

        double chosen = nominal;
        if (excess(nominal) > 0.0) {
            double hi = nominal;
            double step = 0.5;
            double lo = nominal - step;
            while (excess(lo) > 0.0) {
                hi = lo;
                step *= 2.0;
                lo = nominal - step;
                if (step > nominal) {
                    throw PlanningError("hip", "no initial hip height keeps both legs within reach");
                }
            }
            for (int i = 0; i < 60; ++i) {
                const double mid = 0.5 * (lo + hi);
                if (excess(mid) > 0.0) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            chosen = lo;
        }
        best.nominal = std::min(best.nominal, nominal);
        best.chosen = std::min(best.chosen, chosen);
    }
    return best;
}

StairProfile descent_profile(const SimConfig& config, int n_steps)
{
    const double longest = std::max(leg_geometry(config.robot, 0).foot_length(),
                                    leg_geometry(config.robot, 1).foot_length());
    const double first_edge = 0.5 * (config.stairs.tread + longest);
    return make_staircase(first_edge, config.stairs.tread, config.stairs.drop, -1, n_steps + 4);
}

GaitTrace simulate_descent(const SimConfig& config, int n_steps, Execution exec)
{
    if (n_steps < 1) throw PlanningError("sim", "descent needs at least one step");
    require_valid(config);
    SimConfig cfg = config;
    cfg.stairs.n_steps = n_steps;
    const HeightChoice height = with_phase("step 1", [&] { return choose_initial_height(cfg, exec); });

    std::vector<StepPlan> plans;
    for (int parity = 0; parity < std::min(n_steps, 2); ++parity) {
        plans.push_back(with_phase("step " + std::to_string(parity + 1), [&] {
            return plan_step(cfg, parity, height.chosen, height.nominal, exec);
        }));
    }

    GaitTrace trace;
    trace.config_hash = config_hash(cfg);
    trace.hip_mode = cfg.hip_mode;
    trace.dt = cfg.dt;
    trace.n_steps = n_steps;
    trace.z_initial = height.chosen;
    trace.nominal_height = height.nominal;

    const StairProfile profile = descent_profile(cfg, n_steps);
    const std::vector<double> times = local_times(cfg);
    const int n = sample_count(cfg);
    const LegGeometry leg[2] = {leg_geometry(cfg.robot, 0), leg_geometry(cfg.robot, 1)};
    IkNetworkSolver solver[2] = {
        IkNetworkSolver(cfg.ik, leg[0].thigh, leg[0].shank, cfg.rng_seed),
        IkNetworkSolver(cfg.ik, leg[1].thigh, leg[1].shank, cfg.rng_seed + 1)};

    const std::size_t total = static_cast<std::size_t>(n) * static_cast<std::size_t>(n_steps) + 1;
    trace.t.reserve(total);
    trace.joints.reserve(total);

    LegPoints previous[2];
    for (int k = 0; k < n_steps; ++k) {
        const StepPlan& plan = plans[static_cast<std::size_t>(k % 2)];
        const PlanarPoint offset{k * cfg.stairs.tread, -k * cfg.stairs.drop};
        const std::string phase = "step " + std::to_string(k + 1);
        with_phase(phase, [&] {
            for (int i = 0; i <= n; ++i) {
                const double tl = times[static_cast<std::size_t>(i)];
                LegPoints swing = shifted(plan.swing_points(tl), offset);
                LegPoints stance = shifted(plan.stance_points(tl), offset);
                LegPoints pts[2];
                pts[plan.swing_leg] = swing;
                pts[1 - plan.swing_leg] = stance;
                if (i == 0 && k > 0) {
                    trace.junction_gaps.push_back(
                        std::max(max_gap(pts[0], previous[0]), max_gap(pts[1], previous[1])));
                    continue;
                }
                const FootAngles sw = plan.swing_plan.foot_angles(tl);
                const FootAngles st = plan.stance_foot_angles(tl);
                const FootAngles feet[2] = {plan.swing_leg == 0 ? sw : st,
                                            plan.swing_leg == 0 ? st : sw};

                JointState js;
                std::array<double, 4> closed{};
                int iterations = 0;
                for (int l = 0; l < 2; ++l) {
                    const LegAngles exact =
                        analytical_ik(pts[l].hip, pts[l].ankle, leg[l].thigh, leg[l].shank);
                    LegAngles used = exact;
                    if (cfg.ik.use_network) {
                        const IkResult r = solver[l].solve(pts[l].hip, pts[l].ankle);
                        iterations += r.report.iterations;
                        ++trace.ik_samples;
                        if (r.report.converged) {
                            used = r.angles;
                        } else {
                            ++trace.ik_fallbacks;
                        }
                    }
                    js[1 + 2 * l] = used.hip;
                    js[2 + 2 * l] = used.knee;
                    closed[static_cast<std::size_t>(2 * l)] = exact.hip;
                    closed[static_cast<std::size_t>(2 * l + 1)] = exact.knee;
                    js[6 + 2 * l] = feet[l].sole;
                    js[7 + 2 * l] = feet[l].toe;
                }
                js[5] = std::numbers::pi / 2.0;
                trace.ik_iterations += iterations;
                trace.ik_iterations_per_sample.push_back(iterations);

                double lo = std::numeric_limits<double>::infinity();
                double hi = -std::numeric_limits<double>::infinity();
                for (const LegPoints& p : pts) {
                    for (PlanarPoint q : {p.ankle, p.sole, p.toe}) {
                        if (std::abs(q.z - profile.floor_z(q.x)) <= 1e-9) {
                            lo = std::min(lo, q.x);
                            hi = std::max(hi, q.x);
                        }
                    }
                }

                trace.t.push_back((static_cast<double>(k) * n + i) * cfg.dt);
                trace.joints.push_back(js);
                trace.leg0.push_back(pts[0]);
                trace.leg1.push_back(pts[1]);
                trace.zmp_x.push_back(plan.hip.zmp.zmp_x(tl) + offset.x);
                trace.cog_x.push_back(plan.hip.zmp.cog(tl) + offset.x);
                trace.closed_form.push_back(closed);
                trace.support_lo.push_back(lo);
                trace.support_hi.push_back(hi);
                trace.step.push_back(k);
            }
            previous[0] = trace.leg0.back();
            previous[1] = trace.leg1.back();
            return 0;
        });
    }
    return trace;
}

GaitTrace plan_single_step(const SimConfig& config, Execution exec)
{
    return simulate_descent(config, 1, exec);
}

DerivativeStack derivatives(const std::vector<std::array<double, 4>>& angles, double dt,
                            Execution exec)
{
    if (angles.size() < 7) throw std::invalid_argument("derivatives need at least 7 samples");
    if (!(dt > 0.0)) throw std::invalid_argument("derivatives need dt > 0");
    DerivativeStack d;
    d.velocity.resize(angles.size());
    d.acceleration.resize(angles.size());
    d.jerk.resize(angles.size());
    std::vector<double> column(angles.size());
    for (std::size_t j = 0; j < 4; ++j) {
        for (std::size_t i = 0; i < angles.size(); ++i) column[i] = angles[i][j];
        const std::vector<double> v = finite_difference(column, dt, exec);
        const std::vector<double> a = finite_difference(v, dt, exec);
        const std::vector<double> k = finite_difference(a, dt, exec);
        for (std::size_t i = 0; i < angles.size(); ++i) {
            d.velocity[i][j] = v[i];
            d.acceleration[i][j] = a[i];
            d.jerk[i][j] = k[i];
        }
    }
    return d;
}

DerivativeStack derivatives(const GaitTrace& trace, AngleSource source, Execution exec)
{
    if (source == AngleSource::ClosedForm) return derivatives(trace.closed_form, trace.dt, exec);
    std::vector<std::array<double, 4>> angles(trace.size());
    for (std::size_t i = 0; i < trace.size(); ++i) {
        for (int j = 0; j < 4; ++j) angles[i][static_cast<std::size_t>(j)] = trace.joints[i][j + 1];
    }
    return derivatives(angles, trace.dt, exec);
}

std::vector<PlanarPoint> foot_points(const GaitTrace& trace)
{
    std::vector<PlanarPoint> pts;
    pts.reserve(trace.size() * 6);
    for (std::size_t i = 0; i < trace.size(); ++i) {
        for (const LegPoints* p : {&trace.leg0[i], &trace.leg1[i]}) {
            pts.push_back(p->ankle);
            pts.push_back(p->sole);
            pts.push_back(p->toe);
        }
    }
    return pts;
}

ModeMetrics measure(const GaitTrace& trace, const StairProfile& profile, Execution exec)
{
    ModeMetrics m;
    m.mode = trace.hip_mode;
    m.max_z_ci = trace.z_initial;
    m.nominal_height = trace.nominal_height;
    m.lowering = trace.lowering();
    m.ik_fallbacks = trace.ik_fallbacks;
    const DerivativeStack d = derivatives(trace, AngleSource::ClosedForm, exec);
    for (std::size_t i = 0; i < trace.size(); ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            if (std::abs(d.acceleration[i][j]) > m.max_acc) {
                m.max_acc = std::abs(d.acceleration[i][j]);
                m.acc_joint = static_cast<int>(j) + 1;
                m.acc_time = trace.t[i];
            }
            if (std::abs(d.jerk[i][j]) > m.max_jerk) {
                m.max_jerk = std::abs(d.jerk[i][j]);
                m.jerk_joint = static_cast<int>(j) + 1;
                m.jerk_time = trace.t[i];
            }
        }
    }
    m.min_clearance = collision_scan(foot_points(trace), profile, 1e-9, exec).min_clearance;
    return m;
}

MetricsSummary compare_modes(const SimConfig& config, Execution exec)
{
    MetricsSummary summary;
    const HipMode modes[3] = {HipMode::Brachistochrone, HipMode::CircularArc, HipMode::VirtualSlope};
    std::exception_ptr errors[3];
#pragma omp parallel for schedule(static, 1) if (exec == Execution::Parallel)
    for (int i = 0; i < 3; ++i) {
        try {
            SimConfig cfg = config;
            cfg.hip_mode = modes[i];
            const GaitTrace trace = plan_single_step(cfg, exec);
            summary.modes[static_cast<std::size_t>(i)] = measure(trace, descent_profile(cfg, 1), exec);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (int i = 0; i < 3; ++i) {
        if (!errors[i]) continue;
        try {
            std::rethrow_exception(errors[i]);
        } catch (const PlanningError& e) {
            throw PlanningError(std::string(to_string(modes[i])) + "/" + e.phase(), e.what());
        }
    }
    return summary;
}

std::string MetricsSummary::table() const
{
    std::ostringstream out;
    out << std::left << std::setw(8) << "mode" << std::right << std::setw(12) << "z_Ci[cm]"
        << std::setw(14) << "lowered[cm]" << std::setw(16) << "max|acc|" << std::setw(16)
        << "max|jerk|" << std::setw(14) << "clearance" << '\n';
    for (const ModeMetrics& m : modes) {
        out << std::left << std::setw(8) << to_string(m.mode) << std::right << std::fixed
            << std::setprecision(3) << std::setw(12) << m.max_z_ci << std::setw(14) << m.lowering
            << std::setw(16) << m.max_acc << std::setw(16) << m.max_jerk << std::setw(14)
            << m.min_clearance << '\n';
    }
    out << "acc in rad/s^2, jerk in rad/s^3, over joints 1-4\n";
    return out.str();
}

}  // namespace stairgait
