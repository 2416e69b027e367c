#pragma once

// First-order filter functions of a driven qubit. The rotating-frame error
// integrand for a noise channel with sensitivity chi(t) is v(t) = L(t) chi(t),
// where L(t) is the real 3x3 frame matrix assembled from the invariant angles,
// and the filter function is F(w) = | integral v(t) e^{i w t} dt |^2 summed
// over the three components.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "pulseforge/noise.hpp"
#include "pulseforge/quadrature.hpp"
#include "pulseforge/trajectory.hpp"

namespace pulseforge {

/// Frame matrix mapping a sensitivity vector expressed in the drive frame to
/// the error integrand in the frame where the dynamics is undone.
inline Eigen::Matrix3d lambda_matrix(double gamma, double beta, double zeta) {
    const double cg = std::cos(gamma), sg = std::sin(gamma);
    const double cb = std::cos(beta), sb = std::sin(beta);
    const double cz = std::cos(zeta), sz = std::sin(zeta);
    Eigen::Matrix3d m;
    m(0, 0) = cb * sg;
    m(0, 1) = sb * sg;
    m(0, 2) = cg;
    m(1, 0) = -cb * cg * cz - sb * sz;
    m(1, 1) = -sb * cg * cz + cb * sz;
    m(1, 2) = sg * cz;
    m(2, 0) = -cb * cg * sz + sb * cz;
    m(2, 1) = -sb * cg * sz - cb * cz;
    m(2, 2) = sg * sz;
    return m;
}

/// Error integrand samples v_j = L(t_j) chi(t_j) for a caller-supplied
/// sensitivity history (3 x n).
inline Eigen::Matrix3Xd frame_mapped_samples(const InvariantTrajectory& traj,
                                             const Eigen::Matrix3Xd& chi) {
    const Eigen::Index n = static_cast<Eigen::Index>(traj.size());
    if (chi.cols() != n)
        throw std::invalid_argument("frame_mapped_samples: chi column count must match trajectory");
    Eigen::Matrix3Xd v(3, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        v.col(j) = lambda_matrix(traj.gamma[j], traj.beta[j], traj.zeta[j]) * chi.col(j);
    }
    return v;
}

// Specialized integrands for the three standard channels. These are the
// closed forms of L * chi; they depend only on gamma and zeta (and the
// derivatives), never on beta, which makes them cheap inside optimization.

/// v for additive detuning noise, chi = (0, 0, 1/2).
inline Eigen::Matrix3Xd detuning_integrand(const InvariantTrajectory& traj) {
    const Eigen::Index n = static_cast<Eigen::Index>(traj.size());
    Eigen::Matrix3Xd v(3, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const double g = traj.gamma[j], z = traj.zeta[j];
        v(0, j) = 0.5 * std::cos(g);
        v(1, j) = 0.5 * std::sin(g) * std::cos(z);
        v(2, j) = 0.5 * std::sin(g) * std::sin(z);
    }
    return v;
}

/// v for multiplicative amplitude noise, chi = (omega cos phi, omega sin phi, 0)/2,
/// with the drive fields eliminated through the auxiliary relations. The first
/// component is oriented to match r' x r'' of the space-curve view; it differs
/// from the frame-mapped product by a fixed sign, which no norm or bilinear
/// form can see.
inline Eigen::Matrix3Xd amplitude_integrand(const InvariantTrajectory& traj) {
    const Eigen::Index n = static_cast<Eigen::Index>(traj.size());
    Eigen::Matrix3Xd v(3, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const double g = traj.gamma[j], z = traj.zeta[j];
        const double gd = traj.gamma_dot[j], zd = traj.zeta_dot[j];
        const double sg = std::sin(g), cg = std::cos(g);
        const double sz = std::sin(z), cz = std::cos(z);
        v(0, j) = 0.5 * zd * sg * sg;
        v(1, j) = 0.5 * (zd * sg * cg * cz + gd * sz);
        v(2, j) = 0.5 * (zd * sg * cg * sz - gd * cz);
    }
    return v;
}

/// v for multiplicative detuning noise, chi = (0, 0, delta/2) with
/// delta = beta_dot - zeta_dot cos(gamma).
inline Eigen::Matrix3Xd mult_detuning_integrand(const InvariantTrajectory& traj) {
    const Eigen::Index n = static_cast<Eigen::Index>(traj.size());
    Eigen::Matrix3Xd v(3, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const double g = traj.gamma[j], z = traj.zeta[j];
        const double delta = traj.beta_dot[j] - traj.zeta_dot[j] * std::cos(g);
        v(0, j) = 0.5 * delta * std::cos(g);
        v(1, j) = 0.5 * delta * std::sin(g) * std::cos(z);
        v(2, j) = 0.5 * delta * std::sin(g) * std::sin(z);
    }
    return v;
}

inline Eigen::Matrix3Xd channel_integrand(const InvariantTrajectory& traj, Sensitivity s) {
    switch (s) {
        case Sensitivity::AdditiveDetuning: return detuning_integrand(traj);
        case Sensitivity::MultiplicativeAmplitude: return amplitude_integrand(traj);
        case Sensitivity::MultiplicativeDetuning: return mult_detuning_integrand(traj);
    }
    throw std::logic_error("channel_integrand: unknown sensitivity");
}

/// F(w) for one frequency from weighted samples of the error integrand.
inline double filter_function_value(const QuadratureNodes& nodes, const Eigen::Matrix3Xd& v,
                                    double omega) {
    if (v.cols() != static_cast<Eigen::Index>(nodes.size()))
        throw std::invalid_argument("filter_function_value: node/sample count mismatch");
    std::complex<double> acc0{0.0, 0.0}, acc1{0.0, 0.0}, acc2{0.0, 0.0};
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        const double ph = omega * nodes.t[j];
        const std::complex<double> e{nodes.w[j] * std::cos(ph), nodes.w[j] * std::sin(ph)};
        const Eigen::Index c = static_cast<Eigen::Index>(j);
        acc0 += v(0, c) * e;
        acc1 += v(1, c) * e;
        acc2 += v(2, c) * e;
    }
    return std::norm(acc0) + std::norm(acc1) + std::norm(acc2);
}

inline std::vector<double> filter_function_values(const QuadratureNodes& nodes,
                                                  const Eigen::Matrix3Xd& v,
                                                  const std::vector<double>& omegas) {
    std::vector<double> out(omegas.size());
    for (std::size_t i = 0; i < omegas.size(); ++i) out[i] = filter_function_value(nodes, v, omegas[i]);
    return out;
}

/// Filter function of a trajectory for an arbitrary sensitivity history.
inline std::vector<double> filter_function(const InvariantTrajectory& traj,
                                           const Eigen::Matrix3Xd& chi,
                                           const std::vector<double>& omegas) {
    const QuadratureNodes nodes = trapezoid_nodes(traj.grid);
    return filter_function_values(nodes, frame_mapped_samples(traj, chi), omegas);
}

inline std::vector<double> filter_function(const InvariantTrajectory& traj, Sensitivity s,
                                           const std::vector<double>& omegas) {
    return filter_function_values(trapezoid_nodes(traj.grid), channel_integrand(traj, s), omegas);
}

inline std::vector<double> ff_detuning(const InvariantTrajectory& traj,
                                       const std::vector<double>& omegas) {
    return filter_function_values(trapezoid_nodes(traj.grid), detuning_integrand(traj), omegas);
}

inline std::vector<double> ff_amplitude(const InvariantTrajectory& traj,
                                        const std::vector<double>& omegas) {
    return filter_function_values(trapezoid_nodes(traj.grid), amplitude_integrand(traj), omegas);
}

inline std::vector<double> ff_mult_detuning(const InvariantTrajectory& traj,
                                            const std::vector<double>& omegas) {
    return filter_function_values(trapezoid_nodes(traj.grid), mult_detuning_integrand(traj), omegas);
}

/// Log-spaced frequency grid spanning [1e-4, 10] times the peak drive rate.
inline std::vector<double> default_omega_grid(double omega_scale, std::size_t count = 400) {
    if (!(omega_scale > 0.0))
        throw std::invalid_argument("default_omega_grid: omega_scale must be positive");
    if (count < 2) throw std::invalid_argument("default_omega_grid: need at least two points");
    std::vector<double> w(count);
    const double lo = std::log(1e-4 * omega_scale);
    const double hi = std::log(10.0 * omega_scale);
    for (std::size_t i = 0; i < count; ++i) {
        const double u = static_cast<double>(i) / static_cast<double>(count - 1);
        w[i] = std::exp(lo + (hi - lo) * u);
    }
    return w;
}

struct FilterFunctionTrace {
    std::string channel;
    std::vector<double> omega;
    std::vector<double> value;
};

// Space-curve view of a trajectory: the unit tangent is
//   r'(t) = (cos gamma, -sin gamma cos zeta, -sin gamma sin zeta),
// so the net displacement of the curve and the integral of r' x r'' recover
// the zero-frequency detuning and amplitude filter functions.

struct CurveGeometry {
    Eigen::Vector3d closure;   // integral of r'
    Eigen::Vector3d binormal;  // integral of r' x r''
};

inline CurveGeometry curve_geometry(const InvariantTrajectory& traj) {
    const double dt = traj.grid.dt();
    const Eigen::Index n = static_cast<Eigen::Index>(traj.size());
    Eigen::Matrix3Xd rdot(3, n), cross(3, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const double g = traj.gamma[j], z = traj.zeta[j];
        const double gd = traj.gamma_dot[j], zd = traj.zeta_dot[j];
        const double sg = std::sin(g), cg = std::cos(g);
        const double sz = std::sin(z), cz = std::cos(z);
        rdot(0, j) = cg;
        rdot(1, j) = -sg * cz;
        rdot(2, j) = -sg * sz;
        // r' x r'' in closed form; equal to twice the amplitude integrand.
        cross(0, j) = zd * sg * sg;
        cross(1, j) = zd * sg * cg * cz + gd * sz;
        cross(2, j) = zd * sg * cg * sz - gd * cz;
    }
    CurveGeometry geo;
    for (int c = 0; c < 3; ++c) {
        std::vector<double> row(static_cast<std::size_t>(n));
        for (Eigen::Index j = 0; j < n; ++j) row[static_cast<std::size_t>(j)] = rdot(c, j);
        geo.closure(c) = trapezoid(row, dt);
        for (Eigen::Index j = 0; j < n; ++j) row[static_cast<std::size_t>(j)] = cross(c, j);
        geo.binormal(c) = trapezoid(row, dt);
    }
    return geo;
}

}  // namespace pulseforge
