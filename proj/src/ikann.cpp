#include "stairgait/ikann.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

namespace stairgait {

namespace {

constexpr double kPi = std::numbers::pi;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

struct Pass {
    Eigen::VectorXd hidden;
    Eigen::Vector2d y;
    LegAngles angles;
};

Pass run(const NetworkWeights& w, const Eigen::Vector2d& u)
{
    Pass p;
    p.hidden = (w.W1.transpose() * u + w.b1).unaryExpr(&sigmoid);
    p.y = (w.W2.transpose() * p.hidden + w.b2).unaryExpr(&sigmoid);
    p.angles = {kPi * p.y[0], kPi * (p.y[1] - 1.0)};
    return p;
}

struct Gradient {
    Eigen::MatrixXd W1;
    Eigen::VectorXd b1;
    Eigen::MatrixXd W2;
    Eigen::Vector2d b2;
};

/// Returns E and fills the gradient of E with respect to every weight.
double backprop(const NetworkWeights& w, PlanarPoint hip, PlanarPoint target,
                double l_upper, double l_lower, Gradient& g)
{
    const double reach = l_upper + l_lower;
    const Eigen::Vector2d u = normalize_target(hip, target, reach);
    const Pass p = run(w, u);
    const PlanarPoint a = forward_leg(hip, p.angles.hip, p.angles.knee, l_upper, l_lower);
    const Eigen::Vector2d residual(a.x - target.x, a.z - target.z);
    const Eigen::Matrix2d J = leg_jacobian(p.angles.hip, p.angles.knee, l_upper, l_lower);
    const Eigen::Vector2d dE_dtheta = 2.0 * J.transpose() * residual;
    const Eigen::Vector2d delta2 =
        (kPi * dE_dtheta.array() * p.y.array() * (1.0 - p.y.array())).matrix();
    const Eigen::VectorXd delta1 =
        ((w.W2 * delta2).array() * p.hidden.array() * (1.0 - p.hidden.array())).matrix();
    g.W2 = p.hidden * delta2.transpose();
    g.b2 = delta2;
    g.W1 = u * delta1.transpose();
    g.b1 = delta1;
    return residual.squaredNorm();
}

}  // namespace

bool NetworkWeights::operator==(const NetworkWeights& o) const
{
    return W1.rows() == o.W1.rows() && W1.cols() == o.W1.cols() && W1 == o.W1 &&
           b1.size() == o.b1.size() && b1 == o.b1 && W2.rows() == o.W2.rows() &&
           W2 == o.W2 && b2 == o.b2;
}

NetworkWeights zero_network(const IkHyperParams& hp)
{
    NetworkWeights w;
    w.W1 = Eigen::MatrixXd::Zero(hp.input_neurons, hp.hidden_nodes);
    w.b1 = Eigen::VectorXd::Zero(hp.hidden_nodes);
    w.W2 = Eigen::MatrixXd::Zero(hp.hidden_nodes, hp.output_neurons);
    w.b2 = Eigen::Vector2d::Zero();
    return w;
}

NetworkWeights init_network(std::uint64_t seed, const IkHyperParams& hp)
{
    NetworkWeights w = zero_network(hp);
    std::mt19937_64 rng(seed);
    auto draw = [&rng]() {
        return static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
    };
    for (Eigen::Index c = 0; c < w.W1.cols(); ++c)
        for (Eigen::Index r = 0; r < w.W1.rows(); ++r) w.W1(r, c) = draw();
    for (Eigen::Index i = 0; i < w.b1.size(); ++i) w.b1[i] = draw();
    for (Eigen::Index c = 0; c < w.W2.cols(); ++c)
        for (Eigen::Index r = 0; r < w.W2.rows(); ++r) w.W2(r, c) = draw();
    w.b2[0] = draw();
    w.b2[1] = draw();
    return w;
}

Eigen::Vector2d normalize_target(PlanarPoint hip, PlanarPoint target, double reach)
{
    return {(target.x - hip.x + reach) / (2.0 * reach), (target.z - hip.z + reach) / (2.0 * reach)};
}

Eigen::Vector2d network_output(const NetworkWeights& w, const Eigen::Vector2d& input)
{
    return run(w, input).y;
}

LegAngles forward(const NetworkWeights& w, const Eigen::Vector2d& input)
{
    return run(w, input).angles;
}

double task_error(PlanarPoint hip, PlanarPoint target, LegAngles angles,
                  double l_upper, double l_lower)
{
    const PlanarPoint a = forward_leg(hip, angles.hip, angles.knee, l_upper, l_lower);
    const double dx = a.x - target.x, dz = a.z - target.z;
    return dx * dx + dz * dz;
}

Eigen::VectorXd pack(const NetworkWeights& w)
{
    const Eigen::Index n = w.W1.size() + w.b1.size() + w.W2.size() + 2;
    Eigen::VectorXd flat(n);
    flat << Eigen::Map<const Eigen::VectorXd>(w.W1.data(), w.W1.size()), w.b1,
        Eigen::Map<const Eigen::VectorXd>(w.W2.data(), w.W2.size()), w.b2;
    return flat;
}

NetworkWeights unpack(const Eigen::VectorXd& flat, int hidden)
{
    const Eigen::Index h = hidden;
    if (flat.size() != 5 * h + 2) throw std::invalid_argument("weight vector size mismatch");
    NetworkWeights w;
    w.W1 = Eigen::Map<const Eigen::MatrixXd>(flat.data(), 2, h);
    w.b1 = flat.segment(2 * h, h);
    w.W2 = Eigen::Map<const Eigen::MatrixXd>(flat.data() + 3 * h, h, 2);
    w.b2 = flat.segment(5 * h, 2);
    return w;
}

Eigen::VectorXd error_gradient(const NetworkWeights& w, PlanarPoint hip, PlanarPoint target,
                               double l_upper, double l_lower)
{
    Gradient g;
    backprop(w, hip, target, l_upper, l_lower, g);
    NetworkWeights as_weights{g.W1, g.b1, g.W2, g.b2};
    return pack(as_weights);
}

IkResult solve_ik(PlanarPoint hip, PlanarPoint target, NetworkWeights& w,
                  const IkHyperParams& hp, double l_upper, double l_lower, bool record_trace)
{
    IkResult result;
    Gradient g;
    const double alpha = hp.learning_rate;
    double err = backprop(w, hip, target, l_upper, l_lower, g);
    result.report.initial_error = err;
    if (record_trace) result.report.error_trace.push_back(err);
    int it = 0;
    while (err > hp.error_threshold && it < hp.max_iterations) {
        w.W1 -= alpha * g.W1;
        w.b1 -= alpha * g.b1;
        w.W2 -= alpha * g.W2;
        w.b2 -= alpha * g.b2;
        ++it;
        err = backprop(w, hip, target, l_upper, l_lower, g);
        if (record_trace) result.report.error_trace.push_back(err);
    }
    result.angles = forward(w, normalize_target(hip, target, l_upper + l_lower));
    result.report.iterations = it;
    result.report.final_error = err;
    result.report.converged = err <= hp.error_threshold;
    return result;
}

double gradient_check(const NetworkWeights& w, PlanarPoint target, PlanarPoint hip,
                      double l_upper, double l_lower)
{
    const Eigen::VectorXd analytic = error_gradient(w, hip, target, l_upper, l_lower);
    const Eigen::VectorXd base = pack(w);
    Eigen::VectorXd numeric(base.size());
    const double h = 1e-6;
    for (Eigen::Index i = 0; i < base.size(); ++i) {
        Eigen::VectorXd plus = base, minus = base;
        plus[i] += h;
        minus[i] -= h;
        auto err = [&](const Eigen::VectorXd& flat) {
            const NetworkWeights v = unpack(flat, w.hidden());
            return task_error(hip, target,
                              forward(v, normalize_target(hip, target, l_upper + l_lower)),
                              l_upper, l_lower);
        };
        numeric[i] = (err(plus) - err(minus)) / (2.0 * h);
    }
    const double scale =
        std::max({1.0, analytic.cwiseAbs().maxCoeff(), numeric.cwiseAbs().maxCoeff()});
    return (analytic - numeric).cwiseAbs().maxCoeff() / scale;
}

IkNetworkSolver::IkNetworkSolver(const IkHyperParams& hp, double l_upper, double l_lower,
                                 std::uint64_t seed)
    : hp_(hp), l_upper_(l_upper), l_lower_(l_lower), initial_(init_network(seed, hp)),
      weights_(initial_)
{
}

IkResult IkNetworkSolver::solve(PlanarPoint hip, PlanarPoint target)
{
    if (!hp_.warm_start) weights_ = initial_;
    return solve_ik(hip, target, weights_, hp_, l_upper_, l_lower_);
}

void write_weights(std::ostream& out, const NetworkWeights& w)
{
    const Eigen::VectorXd flat = pack(w);
    out << "stairgait-ikann 1 hidden " << w.hidden() << '\n';
    out << std::setprecision(17);
    for (Eigen::Index i = 0; i < flat.size(); ++i) out << flat[i] << '\n';
}

NetworkWeights read_weights(std::istream& in)
{
    std::string magic, tag;
    int version = 0, hidden = 0;
    if (!(in >> magic >> version >> tag >> hidden) || magic != "stairgait-ikann" ||
        version != 1 || tag != "hidden" || hidden < 1) {
        throw std::runtime_error("not a weight snapshot");
    }
    Eigen::VectorXd flat(5 * hidden + 2);
    for (Eigen::Index i = 0; i < flat.size(); ++i) {
        if (!(in >> flat[i])) throw std::runtime_error("truncated weight snapshot");
    }
    return unpack(flat, hidden);
}

}  // namespace stairgait
