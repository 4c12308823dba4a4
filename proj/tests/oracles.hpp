#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "stairgait/kinematics.hpp"

namespace oracle {

using stairgait::PlanarPoint;

/// Planar chain as complex rotations: each link contributes l·e^{-iθ}, with
/// the imaginary axis pointing up.
inline PlanarPoint chain(PlanarPoint base, std::initializer_list<std::pair<double, double>> links)
{
    std::complex<double> p(base.x, base.z);
    for (const auto& [length, angle] : links) p += length * std::polar(1.0, -angle);
    return {p.real(), p.imag()};
}

/// Plain bisection for an increasing function, iterated to interval collapse.
inline double bisect(const std::function<double(double)>& f, double lo, double hi, double target)
{
    for (int i = 0; i < 400; ++i) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;
        (f(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Coefficients of the polynomial through the given derivative conditions
/// at two instants, via a dense linear solve.
inline Eigen::VectorXd poly_through(double T, const std::vector<double>& at0,
                                    const std::vector<double>& atT)
{
    const int n = static_cast<int>(at0.size() + atT.size());
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd b(n);
    auto row = [&](int r, double t, int d) {
        for (int k = d; k < n; ++k) {
            double c = 1.0;
            for (int j = 0; j < d; ++j) c *= (k - j);
            A(r, k) = c * std::pow(t, k - d);
        }
    };
    int r = 0;
    for (std::size_t d = 0; d < at0.size(); ++d, ++r) {
        row(r, 0.0, static_cast<int>(d));
        b[r] = at0[d];
    }
    for (std::size_t d = 0; d < atT.size(); ++d, ++r) {
        row(r, T, static_cast<int>(d));
        b[r] = atT[d];
    }
    return A.colPivHouseholderQr().solve(b);
}

/// Fourth-order central differences.
inline double d1(const std::function<double(double)>& f, double t, double h)
{
    return (-f(t + 2 * h) + 8 * f(t + h) - 8 * f(t - h) + f(t - 2 * h)) / (12 * h);
}

inline double d2(const std::function<double(double)>& f, double t, double h)
{
    return (f(t + h) - 2 * f(t) + f(t - h)) / (h * h);
}

}  // namespace oracle
