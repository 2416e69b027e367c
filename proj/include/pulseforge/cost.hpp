#pragma once

// Training objective for network-parameterized trajectories. The network
// emits (gamma, zeta) samples on a uniform grid; the azimuth beta is implied
// by the zero-detuning construction and never enters the objective, because
// the noise integrands for additive detuning and amplitude errors do not
// depend on it. The objective combines the first-order infidelity of both
// noise channels with penalties that pin the realized gate angle, force the
// drive to switch on and off smoothly, and cap amplitude and slew.
//
// Gradients are exact reverse-mode derivatives of the discretized objective:
// the finite-difference stencil enters through its adjoint, and the bilinear
// noise terms through their kernel matrices.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "pulseforge/grid.hpp"
#include "pulseforge/infidelity.hpp"
#include "pulseforge/invariant_core.hpp"
#include "pulseforge/mlp.hpp"
#include "pulseforge/noise.hpp"
#include "pulseforge/quadrature.hpp"
#include "pulseforge/trajectory.hpp"

namespace pulseforge {

struct CostConfig {
    std::vector<NoiseChannel> channels;
    // Raw-term weights: [0] detuning infidelity, [1] amplitude infidelity,
    // [2] gate angle, [3] start amplitude, [4] end amplitude,
    // [5] amplitude cap, [6] slew cap.
    std::array<double, 7> weights{1.0, 1.0, 100.0, 100.0, 100.0, 100.0, 100.0};
    double omega_max = 1.0;
    double total_time = 0.0;
    double ramp_time = 0.5;
    int grid_samples = 256;
};

/// Unweighted values of the seven objective terms.
struct CostTerms {
    double infidelity_detuning = 0.0;
    double infidelity_amplitude = 0.0;
    double gate_angle = 0.0;
    double start_amplitude = 0.0;
    double end_amplitude = 0.0;
    double amplitude_excess = 0.0;
    double slew_excess = 0.0;

    std::array<double, 7> as_array() const {
        return {infidelity_detuning, infidelity_amplitude, gate_angle, start_amplitude,
                end_amplitude,       amplitude_excess,     slew_excess};
    }
    double total(const std::array<double, 7>& weights) const {
        const std::array<double, 7> raw = as_array();
        double s = 0.0;
        for (std::size_t k = 0; k < 7; ++k) s += weights[k] * raw[k];
        return s;
    }
    /// Largest of the five constraint terms (everything except the two
    /// infidelity integrals); feasibility thresholds compare against this.
    double max_constraint() const {
        return std::max({gate_angle, start_amplitude, end_amplitude, amplitude_excess,
                         slew_excess});
    }
};

class CostModel {
public:
    explicit CostModel(CostConfig cfg) : cfg_(std::move(cfg)), grid_(make_grid(cfg_)) {
        if (cfg_.weights[0] != cfg_.weights[1])
            throw std::invalid_argument("CostModel: the two infidelity weights must be equal");
        for (std::size_t k = 2; k < 7; ++k) {
            if (cfg_.weights[k] < 10.0 * cfg_.weights[0])
                throw std::invalid_argument(
                    "CostModel: constraint weights must be at least 10x the infidelity weight");
        }
        if (!(cfg_.omega_max > 0.0) || !(cfg_.ramp_time > 0.0))
            throw std::invalid_argument("CostModel: omega_max and ramp_time must be positive");

        const QuadratureNodes nodes = trapezoid_nodes(grid_);
        const Eigen::Index n = static_cast<Eigen::Index>(nodes.size());
        l_detuning_ = Eigen::MatrixXd::Zero(n, n);
        l_amplitude_ = Eigen::MatrixXd::Zero(n, n);
        for (const NoiseChannel& ch : cfg_.channels) {
            switch (ch.sensitivity) {
                case Sensitivity::AdditiveDetuning:
                    l_detuning_ += kernel_matrix(nodes, ch.psd);
                    break;
                case Sensitivity::MultiplicativeAmplitude:
                    l_amplitude_ += kernel_matrix(nodes, ch.psd);
                    break;
                case Sensitivity::MultiplicativeDetuning:
                    // Zero detuning is enforced by construction, so this
                    // channel cannot couple; reject rather than silently drop.
                    throw std::invalid_argument(
                        "CostModel: multiplicative-detuning channels are identically zero here");
            }
        }
    }

    const CostConfig& config() const { return cfg_; }
    const TimeGrid& grid() const { return grid_; }

    Eigen::RowVectorXd normalized_times() const {
        const int n = grid_.size();
        Eigen::RowVectorXd t(n);
        for (int i = 0; i < n; ++i) t(i) = 2.0 * grid_.time(i) / grid_.total_time() - 1.0;
        return t;
    }

    double evaluate(const Mlp& net, CostTerms* terms = nullptr) const {
        return run(net, nullptr, terms);
    }

    double evaluate_with_gradient(const Mlp& net, Eigen::VectorXd& grad,
                                  CostTerms* terms = nullptr) const {
        return run(net, &grad, terms);
    }

    /// Objective for explicit angle samples on the model grid (diagnostics
    /// and cross-grid drift checks).
    double evaluate_samples(const std::vector<double>& gamma, const std::vector<double>& zeta,
                            CostTerms* terms = nullptr) const {
        if (static_cast<int>(gamma.size()) != grid_.size() ||
            static_cast<int>(zeta.size()) != grid_.size())
            throw std::invalid_argument("CostModel: sample count does not match grid");
        Eigen::Matrix2Xd y(2, grid_.size());
        for (int i = 0; i < grid_.size(); ++i) {
            y(0, i) = gamma[i];
            y(1, i) = zeta[i];
        }
        return run_samples(y, nullptr, terms).first;
    }

    /// Zero-detuning trajectory realized by the network, on a grid of the
    /// requested resolution.
    InvariantTrajectory trajectory(const Mlp& net, int samples) const {
        const TimeGrid g(grid_.total_time(), samples);
        Eigen::RowVectorXd t(samples);
        for (int i = 0; i < samples; ++i) t(i) = 2.0 * g.time(i) / g.total_time() - 1.0;
        const Eigen::Matrix2Xd y = net.forward(t);
        std::vector<double> gamma(samples), zeta(samples);
        for (int i = 0; i < samples; ++i) {
            gamma[i] = y(0, i);
            zeta[i] = y(1, i);
        }
        return zero_detuning_trajectory(g, std::move(gamma), std::move(zeta));
    }

private:
    static TimeGrid make_grid(const CostConfig& cfg) {
        if (!(cfg.total_time > 0.0))
            throw std::invalid_argument("CostModel: total_time must be positive");
        return TimeGrid(cfg.total_time, cfg.grid_samples);
    }

    double run(const Mlp& net, Eigen::VectorXd* grad, CostTerms* terms) const {
        const Eigen::Matrix2Xd y = net.forward(normalized_times());
        auto [total, dy] = run_samples(y, grad ? &net : nullptr, terms);
        if (grad) *grad = net.backward(dy);
        return total;
    }

    // Evaluates the objective from raw angle samples; when `net` is non-null
    // also returns the cotangent of the 2 x N output batch.
    std::pair<double, Eigen::Matrix2Xd> run_samples(const Eigen::Matrix2Xd& y, const Mlp* net,
                                                    CostTerms* terms) const {
        const int n = grid_.size();
        const double dt = grid_.dt();
        const double om_max = cfg_.omega_max;
        const bool want_grad = net != nullptr;

        std::vector<double> gamma(n), zeta(n);
        for (int i = 0; i < n; ++i) {
            gamma[i] = y(0, i);
            zeta[i] = y(1, i);
        }
        const std::vector<double> gd = derivative_samples(gamma, dt);
        const std::vector<double> zd = derivative_samples(zeta, dt);

        std::vector<double> sg(n), cg(n), sz(n), cz(n);
        for (int i = 0; i < n; ++i) {
            sg[i] = std::sin(gamma[i]);
            cg[i] = std::cos(gamma[i]);
            sz[i] = std::sin(zeta[i]);
            cz[i] = std::cos(zeta[i]);
        }

        // Noise integrands, one column per component. The kernel matrices
        // already carry both quadrature weights, so the columns are the bare
        // integrand samples.
        Eigen::MatrixXd v_det(n, 3), v_amp(n, 3);
        for (int i = 0; i < n; ++i) {
            v_det(i, 0) = 0.5 * cg[i];
            v_det(i, 1) = 0.5 * sg[i] * cz[i];
            v_det(i, 2) = 0.5 * sg[i] * sz[i];
            v_amp(i, 0) = 0.5 * zd[i] * sg[i] * sg[i];
            v_amp(i, 1) = 0.5 * (zd[i] * sg[i] * cg[i] * cz[i] + gd[i] * sz[i]);
            v_amp(i, 2) = 0.5 * (zd[i] * sg[i] * cg[i] * sz[i] - gd[i] * cz[i]);
        }
        const Eigen::MatrixXd lv_det = l_detuning_ * v_det;
        const Eigen::MatrixXd lv_amp = l_amplitude_ * v_amp;
        const double i_det = (v_det.array() * lv_det.array()).sum();
        const double i_amp = (v_amp.array() * lv_amp.array()).sum();

        std::vector<double> omega(n);
        for (int i = 0; i < n; ++i)
            omega[i] = std::sqrt(gd[i] * gd[i] + zd[i] * zd[i] * sg[i] * sg[i] + 1e-24);
        const std::vector<double> omd = derivative_samples(omega, dt);

        const double zdiff = zeta[0] - zeta[n - 1];
        const double bracket =
            std::cos(zdiff) * sg[n - 1] * sg[0] + cg[n - 1] * cg[0];

        CostTerms t;
        t.infidelity_detuning = i_det;
        t.infidelity_amplitude = i_amp;
        t.gate_angle = std::abs(bracket);
        t.start_amplitude = omega[0] / om_max;
        t.end_amplitude = omega[n - 1] / om_max;
        const double slew_max = om_max / cfg_.ramp_time;
        double cap = 0.0, slew = 0.0;
        for (int i = 0; i < n; ++i) {
            cap += std::max(0.0, omega[i] / om_max - 1.0);
            slew += std::max(0.0, std::abs(omd[i]) / slew_max - 1.0);
        }
        t.amplitude_excess = cap / n;
        t.slew_excess = slew / n;
        if (terms) *terms = t;
        const double total = t.total(cfg_.weights);
        if (!want_grad) return {total, Eigen::Matrix2Xd()};

        const std::array<double, 7>& c = cfg_.weights;
        std::vector<double> cgam(n, 0.0), czet(n, 0.0), cgd(n, 0.0), czd(n, 0.0), com(n, 0.0),
            comd(n, 0.0);

        // Infidelity terms: d(v^T L v) = 2 L v, then component partials.
        const Eigen::MatrixXd u_det = 2.0 * c[0] * lv_det;
        const Eigen::MatrixXd u_amp = 2.0 * c[1] * lv_amp;
        for (int i = 0; i < n; ++i) {
            const double d0 = u_det(i, 0), d1 = u_det(i, 1), d2 = u_det(i, 2);
            cgam[i] += 0.5 * (-sg[i] * d0 + cg[i] * cz[i] * d1 + cg[i] * sz[i] * d2);
            czet[i] += 0.5 * sg[i] * (-sz[i] * d1 + cz[i] * d2);

            const double a0 = u_amp(i, 0), a1 = u_amp(i, 1), a2 = u_amp(i, 2);
            const double cos2g = cg[i] * cg[i] - sg[i] * sg[i];
            cgam[i] += zd[i] * sg[i] * cg[i] * a0 +
                       0.5 * zd[i] * cos2g * (cz[i] * a1 + sz[i] * a2);
            czet[i] += 0.5 * ((-zd[i] * sg[i] * cg[i] * sz[i] + gd[i] * cz[i]) * a1 +
                              (zd[i] * sg[i] * cg[i] * cz[i] + gd[i] * sz[i]) * a2);
            cgd[i] += 0.5 * (sz[i] * a1 - cz[i] * a2);
            czd[i] += 0.5 * (sg[i] * sg[i] * a0 + sg[i] * cg[i] * (cz[i] * a1 + sz[i] * a2));
        }

        // Gate-angle term (endpoints only).
        const double s3 = c[2] * ((bracket >= 0.0) ? 1.0 : -1.0);
        cgam[0] += s3 * (std::cos(zdiff) * sg[n - 1] * cg[0] - cg[n - 1] * sg[0]);
        cgam[n - 1] += s3 * (std::cos(zdiff) * cg[n - 1] * sg[0] - sg[n - 1] * cg[0]);
        czet[0] += s3 * (-std::sin(zdiff) * sg[n - 1] * sg[0]);
        czet[n - 1] += s3 * (std::sin(zdiff) * sg[n - 1] * sg[0]);

        // Boundary amplitudes, cap, and slew act through omega.
        com[0] += c[3] / om_max;
        com[n - 1] += c[4] / om_max;
        for (int i = 0; i < n; ++i) {
            if (omega[i] > om_max) com[i] += c[5] / (om_max * n);
            if (std::abs(omd[i]) > slew_max)
                comd[i] += c[6] * ((omd[i] >= 0.0) ? 1.0 : -1.0) / (slew_max * n);
        }
        const std::vector<double> comd_adj = derivative_adjoint(comd, dt);
        for (int i = 0; i < n; ++i) com[i] += comd_adj[i];
        for (int i = 0; i < n; ++i) {
            const double inv = com[i] / omega[i];
            cgd[i] += inv * gd[i];
            czd[i] += inv * zd[i] * sg[i] * sg[i];
            cgam[i] += inv * zd[i] * zd[i] * sg[i] * cg[i];
        }

        // Fold the stencil adjoints back onto the angle samples.
        const std::vector<double> cgd_adj = derivative_adjoint(cgd, dt);
        const std::vector<double> czd_adj = derivative_adjoint(czd, dt);
        Eigen::Matrix2Xd dy(2, n);
        for (int i = 0; i < n; ++i) {
            dy(0, i) = cgam[i] + cgd_adj[i];
            dy(1, i) = czet[i] + czd_adj[i];
        }
        return {total, dy};
    }

    CostConfig cfg_;
    TimeGrid grid_;
    Eigen::MatrixXd l_detuning_, l_amplitude_;
};

}  // namespace pulseforge
