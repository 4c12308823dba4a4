#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>

#include "stairgait/kinematics.hpp"
#include "stairgait/model.hpp"

namespace stairgait {

/// 2-H-2 sigmoid network. Layer convention: hidden = σ(W1ᵀ u + b1),
/// y = σ(W2ᵀ hidden + b2).
struct NetworkWeights {
    Eigen::MatrixXd W1;  // 2 x H
    Eigen::VectorXd b1;  // H
    Eigen::MatrixXd W2;  // H x 2
    Eigen::Vector2d b2 = Eigen::Vector2d::Zero();

    int hidden() const { return static_cast<int>(b1.size()); }
    bool operator==(const NetworkWeights& o) const;
};

/// Uniform U[-0.5, 0.5] from a seeded mt19937_64.
NetworkWeights init_network(std::uint64_t seed, const IkHyperParams& hp);
NetworkWeights zero_network(const IkHyperParams& hp);

/// Hip-centred box [-R, R]^2 mapped to [0, 1]^2 with R = l_upper + l_lower.
Eigen::Vector2d normalize_target(PlanarPoint hip, PlanarPoint target, double reach);

/// Raw outputs y in (0,1)^2.
Eigen::Vector2d network_output(const NetworkWeights& w, const Eigen::Vector2d& input);
/// θ1 = π y1 in [0, π], θ2 = π (y2 - 1) in [-π, 0].
LegAngles forward(const NetworkWeights& w, const Eigen::Vector2d& input);

/// Squared task-space error |FK(θ) - target|^2 in cm^2.
double task_error(PlanarPoint hip, PlanarPoint target, LegAngles angles,
                  double l_upper, double l_lower);

/// ∂E/∂W packed in the order W1, b1, W2, b2 (column-major matrices).
Eigen::VectorXd error_gradient(const NetworkWeights& w, PlanarPoint hip, PlanarPoint target,
                               double l_upper, double l_lower);
Eigen::VectorXd pack(const NetworkWeights& w);
NetworkWeights unpack(const Eigen::VectorXd& flat, int hidden);

struct TrainReport {
    int iterations = 0;
    double initial_error = 0.0;
    double final_error = 0.0;
    bool converged = false;
    std::vector<double> error_trace;  // filled when requested
};

struct IkResult {
    LegAngles angles;
    TrainReport report;
};

/// Gradient descent W <- W - α ∂E/∂W until E <= threshold or the iteration
/// cap. `w` is updated in place.
IkResult solve_ik(PlanarPoint hip, PlanarPoint target, NetworkWeights& w,
                  const IkHyperParams& hp, double l_upper, double l_lower,
                  bool record_trace = false);

/// max_i |g_i - g_fd,i| / max(1, |g|∞, |g_fd|∞) with central differences of
/// step 1e-6.
double gradient_check(const NetworkWeights& w, PlanarPoint target, PlanarPoint hip,
                      double l_upper, double l_lower);

/// One network per leg, warm-started across samples unless disabled.
class IkNetworkSolver {
public:
    IkNetworkSolver(const IkHyperParams& hp, double l_upper, double l_lower, std::uint64_t seed);

    IkResult solve(PlanarPoint hip, PlanarPoint target);
    const NetworkWeights& weights() const { return weights_; }

private:
    IkHyperParams hp_;
    double l_upper_;
    double l_lower_;
    NetworkWeights initial_;
    NetworkWeights weights_;
};

void write_weights(std::ostream& out, const NetworkWeights& w);
NetworkWeights read_weights(std::istream& in);

}  // namespace stairgait
