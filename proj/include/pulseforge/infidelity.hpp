#pragma once

// First-order average gate infidelity as a bilinear form. The frequency
// integral of S_q(w) F_q(w) collapses into v^T L v where v holds the error
// integrand samples and L is built from the autocorrelation kernel of the
// noise process and the quadrature weights.

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "pulseforge/filter_function.hpp"
#include "pulseforge/noise.hpp"
#include "pulseforge/quadrature.hpp"
#include "pulseforge/trajectory.hpp"

namespace pulseforge {

/// L[i][j] = g(t_i - t_j) * w_i * w_j for the given nodes and noise process.
inline Eigen::MatrixXd kernel_matrix(const QuadratureNodes& nodes, const PsdSpec& psd) {
    const Eigen::Index n = static_cast<Eigen::Index>(nodes.size());
    Eigen::MatrixXd L(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            const double g = psd.kernel(nodes.t[static_cast<std::size_t>(i)] -
                                        nodes.t[static_cast<std::size_t>(j)]);
            const double val = g * nodes.w[static_cast<std::size_t>(i)] *
                               nodes.w[static_cast<std::size_t>(j)];
            L(i, j) = val;
            L(j, i) = val;
        }
    }
    return L;
}

/// Sum over the three vector components of v_c^T L v_c.
inline double bilinear_infidelity(const Eigen::MatrixXd& L, const Eigen::Matrix3Xd& v) {
    if (L.rows() != v.cols())
        throw std::invalid_argument("bilinear_infidelity: kernel/sample size mismatch");
    double total = 0.0;
    for (int c = 0; c < 3; ++c) {
        const Eigen::VectorXd vc = v.row(c).transpose();
        total += vc.dot(L * vc);
    }
    return total;
}

inline double bilinear_infidelity(const QuadratureNodes& nodes, const Eigen::Matrix3Xd& v,
                                  const PsdSpec& psd) {
    return bilinear_infidelity(kernel_matrix(nodes, psd), v);
}

/// Higher-order smallness diagnostic: xi^2 = T^2 * sum_q Var(delta_q) *
/// |chi_q(0)|^2. Values well below one justify keeping only the first-order
/// infidelity.
inline double magnus_smallness(const InvariantTrajectory& traj,
                               const std::vector<NoiseChannel>& channels) {
    if (traj.size() == 0) throw std::invalid_argument("magnus_smallness: empty trajectory");
    const double T = traj.grid.total_time();
    const double g0 = traj.gamma[0];
    const double gd0 = traj.gamma_dot[0], zd0 = traj.zeta_dot[0], bd0 = traj.beta_dot[0];
    const double sg = std::sin(g0);
    const double omega0 = std::sqrt(gd0 * gd0 + zd0 * zd0 * sg * sg);
    const double delta0 = bd0 - zd0 * std::cos(g0);
    double xi2 = 0.0;
    for (const NoiseChannel& ch : channels) {
        xi2 += ch.psd.variance() * sensitivity_norm_sq(ch.sensitivity, omega0, delta0) * T * T;
    }
    return xi2;
}

struct InfidelityEntry {
    std::string channel;
    double infidelity = 0.0;
    double ff_at_zero = 0.0;
};

struct InfidelityReport {
    std::vector<InfidelityEntry> entries;
    double total = 0.0;
    double smallness = 0.0;        // xi^2
    bool first_order_valid = true; // smallness <= 0.1
};

/// Threshold used throughout for trusting the first-order infidelity.
inline constexpr double kSmallnessLimit = 0.1;

/// Per-channel and total first-order infidelity of a trajectory, evaluated on
/// its own time grid with trapezoid weights.
inline InfidelityReport infidelity_report(const InvariantTrajectory& traj,
                                          const std::vector<NoiseChannel>& channels) {
    const QuadratureNodes nodes = trapezoid_nodes(traj.grid);
    InfidelityReport report;
    for (const NoiseChannel& ch : channels) {
        const Eigen::Matrix3Xd v = channel_integrand(traj, ch.sensitivity);
        InfidelityEntry e;
        e.channel = ch.id;
        e.infidelity = bilinear_infidelity(nodes, v, ch.psd);
        e.ff_at_zero = filter_function_value(nodes, v, 0.0);
        report.entries.push_back(e);
        report.total += e.infidelity;
    }
    report.smallness = magnus_smallness(traj, channels);
    report.first_order_valid = report.smallness <= kSmallnessLimit;
    return report;
}

/// Same report from externally supplied integrand samples (used for piecewise
/// pulse sequences evaluated on Gauss panels).
inline InfidelityReport infidelity_report(const QuadratureNodes& nodes,
                                          const std::vector<Eigen::Matrix3Xd>& integrands,
                                          const std::vector<NoiseChannel>& channels,
                                          double smallness) {
    if (integrands.size() != channels.size())
        throw std::invalid_argument("infidelity_report: one integrand per channel required");
    InfidelityReport report;
    for (std::size_t q = 0; q < channels.size(); ++q) {
        InfidelityEntry e;
        e.channel = channels[q].id;
        e.infidelity = bilinear_infidelity(nodes, integrands[q], channels[q].psd);
        e.ff_at_zero = filter_function_value(nodes, integrands[q], 0.0);
        report.entries.push_back(e);
        report.total += e.infidelity;
    }
    report.smallness = smallness;
    report.first_order_valid = smallness <= kSmallnessLimit;
    return report;
}

/// Scale factor a such that substituting S -> a*S makes the summed infidelity
/// of `reference` equal `target`. The first-order infidelity is linear in the
/// PSD amplitude, so this is a single division.
inline double calibrate_amplitude(double reference_infidelity, double target) {
    if (!(reference_infidelity > 0.0))
        throw std::invalid_argument("calibrate_amplitude: reference infidelity must be positive");
    if (!(target > 0.0)) throw std::invalid_argument("calibrate_amplitude: target must be positive");
    return target / reference_infidelity;
}

}  // namespace pulseforge
