#include "stairgait/kernels.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "stairgait/error.hpp"

namespace stairgait {

namespace {

long ssize_of(std::size_t n) { return static_cast<long>(n); }

}  // namespace

std::vector<double> finite_difference(const std::vector<double>& f, double dt, Execution exec)
{
    const std::size_t n = f.size();
    if (n < 3) throw std::invalid_argument("finite difference needs at least 3 samples");
    std::vector<double> d(n);
    const double inv = 1.0 / (2.0 * dt);
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) * inv;
    d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) * inv;
    const long last = ssize_of(n) - 1;
#pragma omp parallel for schedule(static) if (exec == Execution::Parallel)
    for (long i = 1; i < last; ++i) {
        d[static_cast<std::size_t>(i)] =
            (f[static_cast<std::size_t>(i + 1)] - f[static_cast<std::size_t>(i - 1)]) * inv;
    }
    return d;
}

std::vector<double> clearances(const std::vector<PlanarPoint>& points, const StairProfile& profile,
                               Execution exec)
{
    std::vector<double> c(points.size());
    const long n = ssize_of(points.size());
#pragma omp parallel for schedule(static) if (exec == Execution::Parallel)
    for (long i = 0; i < n; ++i) {
        const auto& p = points[static_cast<std::size_t>(i)];
        c[static_cast<std::size_t>(i)] = p.z - profile.floor_z(p.x);
    }
    return c;
}

CollisionReport collision_scan(const std::vector<PlanarPoint>& points, const StairProfile& profile,
                               double tolerance, Execution exec)
{
    const std::vector<double> c = clearances(points, profile, exec);
    CollisionReport report;
    report.min_clearance = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i] < report.min_clearance) {
            report.min_clearance = c[i];
            report.worst_index = i;
        }
    }
    report.violated = report.min_clearance < -tolerance;
    return report;
}

std::vector<LegAngles> batch_analytical_ik(const std::vector<PlanarPoint>& hips,
                                           const std::vector<PlanarPoint>& targets,
                                           double l_upper, double l_lower, Execution exec)
{
    if (hips.size() != targets.size()) throw std::invalid_argument("hip/target count mismatch");
    std::vector<LegAngles> out(hips.size());
    const long n = ssize_of(hips.size());
    bool failed = false;
#pragma omp parallel for schedule(static) if (exec == Execution::Parallel)
    for (long i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        try {
            out[k] = analytical_ik(hips[k], targets[k], l_upper, l_lower);
        } catch (const UnreachableTarget&) {
#pragma omp atomic write
            failed = true;
        }
    }
    if (failed) {
        for (std::size_t k = 0; k < hips.size(); ++k) analytical_ik(hips[k], targets[k], l_upper, l_lower);
    }
    return out;
}

std::vector<PlanarPoint> sample_swing(const SwingPlan& plan, const std::vector<double>& times,
                                      Execution exec)
{
    std::vector<PlanarPoint> out(times.size());
    const long n = ssize_of(times.size());
#pragma omp parallel for schedule(static) if (exec == Execution::Parallel)
    for (long i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = plan.ankle(times[static_cast<std::size_t>(i)]);
    }
    return out;
}

std::vector<PlanarPoint> sample_hip(const HipPlan& plan, const std::vector<double>& times,
                                    Execution exec)
{
    std::vector<PlanarPoint> out(times.size());
    const long n = ssize_of(times.size());
#pragma omp parallel for schedule(static) if (exec == Execution::Parallel)
    for (long i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = plan.position(times[static_cast<std::size_t>(i)]);
    }
    return out;
}

double max_reach_excess(const std::vector<PlanarPoint>& hips, const std::vector<PlanarPoint>& ankles,
                        double bound, Execution exec)
{
    if (hips.size() != ankles.size()) throw std::invalid_argument("hip/ankle count mismatch");
    double worst = -std::numeric_limits<double>::infinity();
    const long n = ssize_of(hips.size());
#pragma omp parallel for schedule(static) reduction(max : worst) if (exec == Execution::Parallel)
    for (long i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        worst = std::max(worst, distance(hips[k], ankles[k]) - bound);
    }
    return worst;
}

}  // namespace stairgait
