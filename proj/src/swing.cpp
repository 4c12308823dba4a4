#include "stairgait/swing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "stairgait/error.hpp"

namespace stairgait {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

DspProfile dsp_profile(const GaitTiming& timing)
{
    return {timing.theta_a, timing.theta_b, timing.t1, timing.t2};
}

double smoothstep(double s)
{
    s = std::clamp(s, 0.0, 1.0);
    return s * s * (3.0 - 2.0 * s);
}

double smoothstep_rate(double s)
{
    if (s <= 0.0 || s >= 1.0) return 0.0;
    return 6.0 * s * (1.0 - s);
}

FootAngles dsp_foot_angles(double t, const DspProfile& p)
{
    if (t <= p.t1) return {p.theta_a * smoothstep(t / p.t1), 0.0};
    return {p.theta_a, p.theta_b * smoothstep((t - p.t1) / (p.t2 - p.t1))};
}

FootAngles dsp_foot_rates(double t, const DspProfile& p)
{
    if (t <= p.t1) return {p.theta_a * smoothstep_rate(t / p.t1) / p.t1, 0.0};
    const double d = p.t2 - p.t1;
    return {0.0, p.theta_b * smoothstep_rate((t - p.t1) / d) / d};
}

PlanarPoint dsp_ankle(double t, const DspProfile& p, const LegGeometry& foot)
{
    if (t < 0.0 || t > p.t2) {
        throw std::out_of_range("toe-off time " + std::to_string(t) + " outside [0, t2]");
    }
    const FootAngles a = dsp_foot_angles(t, p);
    return ankle_from_toe({foot.foot_length(), 0.0}, a.sole, a.toe, foot.sole, foot.toe);
}

PlanarPoint dsp_ankle_velocity(double t, const DspProfile& p, const LegGeometry& foot)
{
    if (t < 0.0 || t > p.t2) {
        throw std::out_of_range("toe-off time " + std::to_string(t) + " outside [0, t2]");
    }
    const FootAngles a = dsp_foot_angles(t, p);
    const FootAngles w = dsp_foot_rates(t, p);
    return {foot.sole * std::sin(a.sole) * w.sole + foot.toe * std::sin(a.toe) * w.toe,
            foot.sole * std::cos(a.sole) * w.sole + foot.toe * std::cos(a.toe) * w.toe};
}

FootAngles landing_dsp(double t, const DspProfile& p)
{
    return dsp_foot_angles(std::clamp(p.t2 - t, 0.0, p.t2), p);
}

FootAngles landing_dsp_rates(double t, const DspProfile& p)
{
    const FootAngles w = dsp_foot_rates(std::clamp(p.t2 - t, 0.0, p.t2), p);
    return {-w.sole, -w.toe};
}

double solve_theta_c0(double r, double delta_x_c)
{
    if (!(r > 0.0)) throw std::invalid_argument("cycloid radius must be positive");
    const double rhs = kPi * r - delta_x_c;
    if (rhs <= 0.0) return 0.0;
    const double target = rhs / r;  // θ - sin θ
    if (target >= kTwoPi) return kTwoPi;
    double lo = 0.0, hi = kTwoPi;
    for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (mid - std::sin(mid) < target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double f_lo = std::abs(lo - std::sin(lo) - target);
    const double f_hi = std::abs(hi - std::sin(hi) - target);
    return f_lo <= f_hi ? lo : hi;
}

double QuinticPiece::eval(double t, int derivative) const
{
    const double s = t - t0;
    switch (derivative) {
    case 0: return c[0] + s * (c[1] + s * (c[2] + s * (c[3] + s * (c[4] + s * c[5]))));
    case 1: return c[1] + s * (2 * c[2] + s * (3 * c[3] + s * (4 * c[4] + s * 5 * c[5])));
    case 2: return 2 * c[2] + s * (6 * c[3] + s * (12 * c[4] + s * 20 * c[5]));
    case 3: return 6 * c[3] + s * (24 * c[4] + s * 60 * c[5]);
    case 4: return 24 * c[4] + s * 120 * c[5];
    case 5: return 120 * c[5];
    default: return 0.0;
    }
}

std::array<double, 6> hermite_quintic(double p0, double v0, double a0,
                                      double p1, double v1, double a1, double T)
{
    const double h = p1 - (p0 + v0 * T + 0.5 * a0 * T * T);
    const double dv = v1 - (v0 + a0 * T);
    const double da = a1 - a0;
    const double T2 = T * T, T3 = T2 * T;
    return {p0, v0, 0.5 * a0,
            (10.0 * h - 4.0 * dv * T + 0.5 * da * T2) / T3,
            (-15.0 * h + 7.0 * dv * T - da * T2) / (T3 * T),
            (6.0 * h - 3.0 * dv * T + 0.5 * da * T2) / (T3 * T2)};
}

double PiecewiseQuintic::eval(double t, int derivative) const
{
    t = std::clamp(t, start(), end());
    for (const auto& piece : pieces) {
        if (t <= piece.t1) return piece.eval(t, derivative);
    }
    return pieces.back().eval(t, derivative);
}

PlanarPoint cycloid_point(const CycloidParams& p, double theta_c)
{
    const double eps = 1e-12;
    if (theta_c < p.theta_c0 - eps || theta_c > kTwoPi + eps) {
        throw std::out_of_range("cycloid angle " + std::to_string(theta_c) +
                                " outside [theta_c0, 2pi]");
    }
    return {p.end_anchor.x - kTwoPi * p.r + p.r * (theta_c - std::sin(theta_c)),
            p.end_anchor.z + p.r * (1.0 - std::cos(theta_c))};
}

PlanarPoint cycloid_tangent(const CycloidParams& p, double theta_c)
{
    return {p.r * (1.0 - std::cos(theta_c)), p.r * std::sin(theta_c)};
}

namespace {

/// Peak |third derivative| of a quintic piece on [0, T]; exact since θ⃛ is quadratic.
double peak_jerk(const std::array<double, 6>& c, double T)
{
    auto j = [&](double s) { return 6 * c[3] + s * (24 * c[4] + s * 60 * c[5]); };
    double best = std::max(std::abs(j(0.0)), std::abs(j(T)));
    if (c[5] != 0.0) {
        const double s = -24.0 * c[4] / (120.0 * c[5]);
        if (s > 0.0 && s < T) best = std::max(best, std::abs(j(s)));
    }
    return best;
}

bool rate_nonnegative(const std::array<double, 6>& c, double T, int samples)
{
    for (int i = 0; i <= samples; ++i) {
        const double s = T * i / samples;
        const double rate = c[1] + s * (2 * c[2] + s * (3 * c[3] + s * (4 * c[4] + s * 5 * c[5])));
        if (rate < -1e-12) return false;
    }
    return true;
}

struct ScheduleCandidate {
    double apex_time = 0.0;
    double start_rate = 0.0;
    double apex_accel = 0.0;
};

struct ScheduleProblem {
    double theta0 = 0.0;
    double t_start = 0.0;
    double tf = 0.0;
    double apex_rate = 0.0;
    bool has_apex = false;

    PiecewiseQuintic build(const ScheduleCandidate& k) const
    {
        PiecewiseQuintic q;
        if (!has_apex) {
            q.pieces.push_back({t_start, tf, hermite_quintic(theta0, k.start_rate, 0.0, kTwoPi,
                                                             0.0, 0.0, tf - t_start)});
            return q;
        }
        q.pieces.push_back({t_start, k.apex_time,
                            hermite_quintic(theta0, k.start_rate, 0.0, kPi, apex_rate,
                                            k.apex_accel, k.apex_time - t_start)});
        q.pieces.push_back({k.apex_time, tf,
                            hermite_quintic(kPi, apex_rate, k.apex_accel, kTwoPi, 0.0, 0.0,
                                            tf - k.apex_time)});
        return q;
    }

    double cost(const ScheduleCandidate& k, int samples) const
    {
        const auto q = build(k);
        double peak = 0.0;
        for (const auto& piece : q.pieces) {
            const double T = piece.t1 - piece.t0;
            if (!(T > 0.0) || !rate_nonnegative(piece.c, T, samples)) {
                return std::numeric_limits<double>::infinity();
            }
            peak = std::max(peak, peak_jerk(piece.c, T));
        }
        return peak;
    }
};

std::vector<double> linspace(double lo, double hi, int n)
{
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    return v;
}

std::size_t best_candidate(const ScheduleProblem& problem,
                           const std::vector<ScheduleCandidate>& cands, int samples,
                           Execution exec, double& best_cost)
{
    std::vector<double> costs(cands.size());
    const long n = static_cast<long>(cands.size());
#pragma omp parallel for schedule(static) if (exec == Execution::Parallel)
    for (long i = 0; i < n; ++i) {
        costs[static_cast<std::size_t>(i)] = problem.cost(cands[static_cast<std::size_t>(i)], samples);
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < costs.size(); ++i) {
        if (costs[i] < costs[best]) best = i;
    }
    best_cost = costs.empty() ? std::numeric_limits<double>::infinity() : costs[best];
    return best;
}

}  // namespace

PiecewiseQuintic build_theta_c_poly(const CycloidParams& params, double t_start, double tf,
                                    double g, Execution exec)
{
    if (!(t_start < tf)) {
        throw PlanningError("swing", "cycloid schedule needs t_start < tf");
    }
    if (!(params.r > 0.0) || !(g > 0.0)) {
        throw PlanningError("swing", "cycloid schedule needs r > 0 and g > 0");
    }
    const double T = tf - t_start;
    ScheduleProblem problem;
    problem.theta0 = params.theta_c0;
    problem.t_start = t_start;
    problem.tf = tf;
    problem.apex_rate = std::sqrt(g / params.r);
    problem.has_apex = params.theta_c0 < kPi;

    const double max_rate = 1.5 * (kTwoPi - params.theta_c0) / T;
    const double max_accel = 10.0 * problem.apex_rate / T;
    double span_time = 0.96 * T / 59.0;
    double span_rate = max_rate / 12.0;
    double span_accel = 2.0 * max_accel / 60.0;

    std::vector<ScheduleCandidate> cands;
    if (problem.has_apex) {
        for (double ta : linspace(t_start + 0.01 * T, tf - 0.03 * T, 60))
            for (double v0 : linspace(0.0, max_rate, 13))
                for (double al : linspace(-max_accel, max_accel, 61)) cands.push_back({ta, v0, al});
    } else {
        for (double v0 : linspace(0.0, max_rate, 241)) cands.push_back({tf, v0, 0.0});
        span_rate = max_rate / 240.0;
    }

    constexpr int kSamples = 200;
    double cost = 0.0;
    ScheduleCandidate best = cands[best_candidate(problem, cands, kSamples, exec, cost)];
    if (!std::isfinite(cost)) {
        throw PlanningError("swing", "no monotone cycloid schedule reaches 2pi by tf");
    }
    for (int round = 0; round < 3; ++round) {
        cands.clear();
        for (int i = -5; i <= 5; ++i) {
            const double v0 = std::max(0.0, best.start_rate + i * span_rate / 5.0);
            if (!problem.has_apex) {
                cands.push_back({tf, v0, 0.0});
                continue;
            }
            for (int j = -5; j <= 5; ++j) {
                const double ta = best.apex_time + j * span_time / 5.0;
                if (ta <= t_start || ta >= tf) continue;
                for (int k = -5; k <= 5; ++k) {
                    cands.push_back({ta, v0, best.apex_accel + k * span_accel / 5.0});
                }
            }
        }
        double round_cost = 0.0;
        const ScheduleCandidate next = cands[best_candidate(problem, cands, kSamples, exec, round_cost)];
        if (round_cost < cost) {
            cost = round_cost;
            best = next;
        }
        span_time /= 5.0;
        span_rate /= 5.0;
        span_accel /= 5.0;
    }

    PiecewiseQuintic q = problem.build(best);
    for (const auto& piece : q.pieces) {
        if (!rate_nonnegative(piece.c, piece.t1 - piece.t0, 20000)) {
            throw PlanningError("swing", "cycloid schedule lost monotonicity on dense check");
        }
    }
    return q;
}

PlanarPoint BezierBridge::point(double t) const
{
    const double s = std::clamp((t - t_start) / (t_end - t_start), 0.0, 1.0);
    const double u = 1.0 - s;
    return control[0] * (u * u * u) + control[1] * (3.0 * s * u * u) +
           control[2] * (3.0 * s * s * u) + control[3] * (s * s * s);
}

PlanarPoint BezierBridge::velocity(double t) const
{
    const double T = t_end - t_start;
    const double s = std::clamp((t - t_start) / T, 0.0, 1.0);
    const double u = 1.0 - s;
    return ((control[1] - control[0]) * (u * u) + (control[2] - control[1]) * (2.0 * s * u) +
            (control[3] - control[2]) * (s * s)) * (3.0 / T);
}

PlanarPoint BezierBridge::acceleration(double t) const
{
    const double T = t_end - t_start;
    const double s = std::clamp((t - t_start) / T, 0.0, 1.0);
    const PlanarPoint a = control[2] - control[1] * 2.0 + control[0];
    const PlanarPoint b = control[3] - control[2] * 2.0 + control[1];
    return (a * (1.0 - s) + b * s) * (6.0 / (T * T));
}

BezierBridge build_bezier_bridge(PlanarPoint dsp_end, PlanarPoint dsp_end_velocity,
                                 const CycloidParams& cyc, double t_start, double t_end)
{
    if (!(t_end > t_start)) {
        throw PlanningError("swing", "bridge interval must have positive length");
    }
    const double T = t_end - t_start;
    const PlanarPoint p3 = cycloid_point(cyc, cyc.theta_c0);
    const PlanarPoint v3 = cycloid_tangent(cyc, cyc.theta_c0) * cyc.theta_poly.eval(t_end, 1);
    BezierBridge b;
    b.t_start = t_start;
    b.t_end = t_end;
    b.control = {dsp_end, dsp_end + dsp_end_velocity * (T / 3.0), p3 - v3 * (T / 3.0), p3};
    return b;
}

namespace {

void check_time(double t, double tf)
{
    if (t < -1e-12 || t > tf + 1e-12) {
        throw std::out_of_range("swing time " + std::to_string(t) + " outside [0, tf]");
    }
}

}  // namespace

PlanarPoint SwingPlan::ankle(double t) const
{
    check_time(t, tf);
    if (t <= dsp.t2) return start_ankle + dsp_ankle(std::max(t, 0.0), dsp, foot);
    if (t <= bridge.t_end) return bridge.point(t);
    const double th = std::min(cycloid.theta_poly.eval(t), kTwoPi);
    return cycloid_point(cycloid, std::max(th, cycloid.theta_c0));
}

PlanarPoint SwingPlan::velocity(double t) const
{
    check_time(t, tf);
    if (t <= dsp.t2) return dsp_ankle_velocity(std::max(t, 0.0), dsp, foot);
    if (t <= bridge.t_end) return bridge.velocity(t);
    return cycloid_tangent(cycloid, cycloid.theta_poly.eval(t)) * cycloid.theta_poly.eval(t, 1);
}

FootAngles SwingPlan::foot_angles(double t) const
{
    check_time(t, tf);
    if (t <= dsp.t2) return dsp_foot_angles(std::max(t, 0.0), dsp);
    double w = 0.0;
    if (t <= bridge.t_end) {
        w = 1.0 - smoothstep((t - dsp.t2) / (bridge.t_end - dsp.t2));
    } else if (t > orient_back_start) {
        w = smoothstep((t - orient_back_start) / (tf - orient_back_start));
    }
    return {dsp.theta_a * w, dsp.theta_b * w};
}

FootPoints SwingPlan::foot_points(double t) const
{
    const FootAngles a = foot_angles(t);
    return foot_chain(ankle(t), a.sole, a.toe, foot.sole, foot.toe);
}

double SwingPlan::terminal_acceleration() const
{
    const double th = cycloid.theta_poly.eval(tf);
    const double w = cycloid.theta_poly.eval(tf, 1);
    const double a = cycloid.theta_poly.eval(tf, 2);
    const double r = cycloid.r;
    return std::hypot(r * (a * (1.0 - std::cos(th)) + w * w * std::sin(th)),
                      r * (a * std::sin(th) + w * w * std::cos(th)));
}

SwingPlan plan_swing(const SimConfig& config, const LegGeometry& foot, PlanarPoint start,
                     PlanarPoint landing, Execution exec)
{
    const GaitTiming& timing = config.timing;
    SwingPlan plan;
    plan.dsp = dsp_profile(timing);
    plan.foot = foot;
    plan.start_ankle = start;
    plan.landing_ankle = landing;
    plan.landing_toe = landing + PlanarPoint{foot.foot_length(), 0.0};
    plan.tf = timing.tf;
    plan.orient_back_start = std::max(timing.tf - (timing.t2 - timing.t1), timing.bridge_end());

    const PlanarPoint dsp_local = dsp_ankle(timing.t2, plan.dsp, foot);
    const PlanarPoint p0 = start + dsp_local;
    const PlanarPoint v0 = dsp_ankle_velocity(timing.t2, plan.dsp, foot);

    CycloidParams& cyc = plan.cycloid;
    cyc.end_anchor = landing + dsp_local;
    cyc.r = 0.5 * (p0.z - cyc.end_anchor.z);
    if (!(cyc.r > 0.0)) {
        throw PlanningError("swing", "swing must descend: landing ankle is not below the toe-off ankle");
    }
    const double apex_x = cyc.end_anchor.x - kPi * cyc.r;
    plan.delta_x_c = apex_x - p0.x;
    if (plan.delta_x_c <= 0.0 || std::abs(plan.delta_x_c - kPi * cyc.r) < 1e-9 * cyc.r) {
        cyc.theta_c0 = timing.theta_c0_fallback;
        plan.used_fallback = true;
    } else {
        cyc.theta_c0 = solve_theta_c0(cyc.r, plan.delta_x_c);
    }

    const double tb = timing.bridge_end();
    cyc.theta_poly = build_theta_c_poly(cyc, tb, timing.tf, config.gravity, exec);
    cyc.apex_time = cyc.theta_poly.pieces.size() == 2 ? cyc.theta_poly.pieces[0].t1 : -1.0;
    plan.bridge = build_bezier_bridge(p0, v0, cyc, timing.t2, tb);
    return plan;
}

PlanarPoint swing_ankle(double t, const SwingPlan& plan) { return plan.ankle(t); }

}  // namespace stairgait
