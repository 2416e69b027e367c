#pragma once

// Small dense network that parameterizes a trajectory: one scalar input
// (normalized time), two tanh hidden layers of 32 units, and a linear
// two-channel output for the angle pair (gamma, zeta). Parameters live in one
// flat vector so optimizers can treat the network as a generic R^1186 point.

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace pulseforge {

class Mlp {
public:
    static constexpr std::array<int, 4> kLayerSizes{1, 32, 32, 2};

    static constexpr int parameter_count() {
        int n = 0;
        for (std::size_t l = 0; l + 1 < kLayerSizes.size(); ++l)
            n += kLayerSizes[l + 1] * (kLayerSizes[l] + 1);
        return n;
    }

    Mlp() : params_(Eigen::VectorXd::Zero(parameter_count())) {}

    /// Weights uniform in +-sqrt(6 / (fan_in + fan_out)) per layer, biases
    /// zero. A fixed seed gives a reproducible starting point.
    explicit Mlp(std::uint64_t seed) : Mlp() {
        std::mt19937_64 rng(seed);
        int off = 0;
        for (std::size_t l = 0; l + 1 < kLayerSizes.size(); ++l) {
            const int in = kLayerSizes[l];
            const int out = kLayerSizes[l + 1];
            const double bound = std::sqrt(6.0 / (in + out));
            std::uniform_real_distribution<double> u(-bound, bound);
            for (int k = 0; k < out * in; ++k) params_[off + k] = u(rng);
            off += out * in + out;  // biases stay zero
        }
    }

    const Eigen::VectorXd& parameters() const { return params_; }
    void set_parameters(const Eigen::VectorXd& p) {
        if (p.size() != parameter_count())
            throw std::invalid_argument("Mlp::set_parameters: wrong parameter count");
        params_ = p;
    }

    /// Batch forward pass; input is a row of normalized times, output is
    /// 2 x N with row 0 = gamma, row 1 = zeta. Hidden activations are cached
    /// for the matching backward call.
    Eigen::Matrix2Xd forward(const Eigen::RowVectorXd& t_normalized) const {
        const auto [w1, b1, w2, b2, w3, b3] = views();
        x0_ = t_normalized;
        a1_ = ((w1 * t_normalized).colwise() + b1).array().tanh().matrix();
        a2_ = ((w2 * a1_).colwise() + b2).array().tanh().matrix();
        return (w3 * a2_).colwise() + b3;
    }

    std::pair<double, double> forward_one(double t_normalized) const {
        Eigen::RowVectorXd t(1);
        t(0) = t_normalized;
        const Eigen::Matrix2Xd y = forward(t);
        return {y(0, 0), y(1, 0)};
    }

    /// Reverse-mode pass for the most recent forward batch: maps output
    /// cotangents (2 x N) to the flat parameter gradient.
    Eigen::VectorXd backward(const Eigen::Matrix2Xd& dy) const {
        if (dy.cols() != a1_.cols())
            throw std::invalid_argument("Mlp::backward: cotangent batch does not match cached forward");
        const auto [w1, b1, w2, b2, w3, b3] = views();
        (void)b1; (void)b2; (void)b3;

        Eigen::VectorXd grad = Eigen::VectorXd::Zero(parameter_count());
        auto [gw1, gb1, gw2, gb2, gw3, gb3] = mutable_views(grad);

        gw3 = dy * a2_.transpose();
        gb3 = dy.rowwise().sum();
        const Eigen::MatrixXd dz2 =
            (w3.transpose() * dy).array() * (1.0 - a2_.array().square());
        gw2 = dz2 * a1_.transpose();
        gb2 = dz2.rowwise().sum();
        const Eigen::MatrixXd dz1 =
            (w2.transpose() * dz2).array() * (1.0 - a1_.array().square());
        gw1 = dz1 * x0_.transpose();
        gb1 = dz1.rowwise().sum();
        return grad;
    }

private:
    // Flat layout: [W1 (32x1), b1 (32), W2 (32x32), b2 (32), W3 (2x32), b3 (2)].
    using WMap = Eigen::Map<const Eigen::MatrixXd>;
    using BMap = Eigen::Map<const Eigen::VectorXd>;

    std::tuple<WMap, BMap, WMap, BMap, WMap, BMap> views() const {
        const double* p = params_.data();
        WMap w1(p, 32, 1);
        BMap b1(p + 32, 32);
        WMap w2(p + 64, 32, 32);
        BMap b2(p + 64 + 1024, 32);
        WMap w3(p + 64 + 1056, 2, 32);
        BMap b3(p + 64 + 1056 + 64, 2);
        return {w1, b1, w2, b2, w3, b3};
    }

    static std::tuple<Eigen::Map<Eigen::MatrixXd>, Eigen::Map<Eigen::VectorXd>,
                      Eigen::Map<Eigen::MatrixXd>, Eigen::Map<Eigen::VectorXd>,
                      Eigen::Map<Eigen::MatrixXd>, Eigen::Map<Eigen::VectorXd>>
    mutable_views(Eigen::VectorXd& v) {
        double* p = v.data();
        return {Eigen::Map<Eigen::MatrixXd>(p, 32, 1),
                Eigen::Map<Eigen::VectorXd>(p + 32, 32),
                Eigen::Map<Eigen::MatrixXd>(p + 64, 32, 32),
                Eigen::Map<Eigen::VectorXd>(p + 64 + 1024, 32),
                Eigen::Map<Eigen::MatrixXd>(p + 64 + 1056, 2, 32),
                Eigen::Map<Eigen::VectorXd>(p + 64 + 1056 + 64, 2)};
    }

    Eigen::VectorXd params_;
    mutable Eigen::RowVectorXd x0_;
    mutable Eigen::MatrixXd a1_, a2_;
};

static_assert(Mlp::parameter_count() == 1186, "layer sizes changed");

}  // namespace pulseforge
