#pragma once

// Single-qubit gate algebra: rotation generators, phase-insensitive gate
// comparison, the Z-X-Z Euler decomposition, and virtual-Z frame composition
// that turns one calibrated quarter-turn gate into an arbitrary target.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace pulseforge {

using complexd = std::complex<double>;
using Matrix2cd = Eigen::Matrix2cd;

inline const Matrix2cd& pauli_x() {
    static const Matrix2cd m = (Matrix2cd() << 0, 1, 1, 0).finished();
    return m;
}
inline const Matrix2cd& pauli_y() {
    static const Matrix2cd m = (Matrix2cd() << 0, complexd(0, -1), complexd(0, 1), 0).finished();
    return m;
}
inline const Matrix2cd& pauli_z() {
    static const Matrix2cd m = (Matrix2cd() << 1, 0, 0, -1).finished();
    return m;
}

/// exp(-i angle/2 * sigma_z)
inline Matrix2cd z_rotation(double angle) {
    Matrix2cd m = Matrix2cd::Zero();
    m(0, 0) = std::exp(complexd(0, -0.5 * angle));
    m(1, 1) = std::exp(complexd(0, 0.5 * angle));
    return m;
}

/// exp(-i angle/2 * sigma_y)
inline Matrix2cd y_rotation(double angle) {
    const double c = std::cos(0.5 * angle), s = std::sin(0.5 * angle);
    return (Matrix2cd() << c, -s, s, c).finished();
}

/// exp(-i angle/2 * sigma_x)
inline Matrix2cd x_rotation(double angle) {
    const double c = std::cos(0.5 * angle), s = std::sin(0.5 * angle);
    return (Matrix2cd() << c, complexd(0, -s), complexd(0, -s), c).finished();
}

/// exp(-i angle/2 * axis.sigma) for an axis in the equatorial plane at the
/// given phase, the propagator of a resonant segment with constant drive.
inline Matrix2cd planar_rotation(double angle, double phase) {
    const double c = std::cos(0.5 * angle), s = std::sin(0.5 * angle);
    const complexd off = complexd(0, -s) * std::exp(complexd(0, -phase));
    return (Matrix2cd() << c, off, -std::conj(off), c).finished();
}

inline double unitarity_defect(const Matrix2cd& u) {
    return (u.adjoint() * u - Matrix2cd::Identity()).cwiseAbs().maxCoeff();
}

/// |tr(a^dag b)| / 2: equals 1 exactly when a and b agree up to global phase.
inline double trace_fidelity(const Matrix2cd& a, const Matrix2cd& b) {
    return 0.5 * std::abs((a.adjoint() * b).trace());
}

inline double gate_distance(const Matrix2cd& a, const Matrix2cd& b) {
    return 1.0 - trace_fidelity(a, b);
}

inline double wrap_angle(double a) {
    a = std::fmod(a, 2.0 * M_PI);
    if (a <= -M_PI) a += 2.0 * M_PI;
    if (a > M_PI) a -= 2.0 * M_PI;
    return a;
}

/// Euler form U ~ Z(psi1) X(theta) Z(psi2) up to global phase,
/// with theta in [0, pi] and the psi angles in (-pi, pi].
struct ZxzDecomposition {
    double theta = 0.0;
    double psi1 = 0.0;
    double psi2 = 0.0;

    Matrix2cd reconstruct() const {
        return z_rotation(psi1) * x_rotation(theta) * z_rotation(psi2);
    }
};

inline ZxzDecomposition zxz_decompose(const Matrix2cd& u) {
    if (unitarity_defect(u) > 1e-8)
        throw std::invalid_argument("zxz_decompose: input is not unitary");
    // Normalize to SU(2); branch choice cancels because each psi is defined
    // modulo 2*pi at fixed global phase.
    const complexd det = u.determinant();
    const Matrix2cd su = u / std::sqrt(det);
    const complexd a = su(0, 0), b = su(0, 1);
    ZxzDecomposition d;
    d.theta = 2.0 * std::atan2(std::abs(b), std::abs(a));
    constexpr double kDegenerate = 1e-12;
    if (std::abs(b) < kDegenerate) {
        d.psi2 = 0.0;  // gauge: pure-Z gates carry their angle in psi1
        d.psi1 = wrap_angle(-2.0 * std::arg(a));
    } else if (std::abs(a) < kDegenerate) {
        d.psi2 = 0.0;
        d.psi1 = wrap_angle(-M_PI - 2.0 * std::arg(b));
    } else {
        const double sum = -2.0 * std::arg(a);
        const double diff = -M_PI - 2.0 * std::arg(b);
        d.psi1 = wrap_angle(0.5 * (sum + diff));
        d.psi2 = wrap_angle(0.5 * (sum - diff));
        // Re-anchor psi1 so the reconstruction matches even when the half-sum
        // picked the branch 2*pi away.
        if (trace_fidelity(d.reconstruct(), u) < 1.0 - 1e-9) d.psi1 = wrap_angle(d.psi1 + M_PI);
        if (trace_fidelity(d.reconstruct(), u) < 1.0 - 1e-9) d.psi2 = wrap_angle(d.psi2 + M_PI);
        if (trace_fidelity(d.reconstruct(), u) < 1.0 - 1e-9) d.psi1 = wrap_angle(d.psi1 + M_PI);
    }
    return d;
}

/// Virtual-Z frame angles (z1, z2, z3) such that
///   Z(z1) * gate * Z(z2) * gate * Z(z3) ~ target (up to global phase)
/// for a gate whose Euler theta is a quarter turn. The reconstruction is
/// exact to the extent the gate's theta equals pi/2; callers pass gates
/// within tolerance of that angle.
struct VirtualZFrames {
    double z1 = 0.0, z2 = 0.0, z3 = 0.0;
};

inline VirtualZFrames compose_target(const Matrix2cd& gate, const Matrix2cd& target,
                                     double theta_tolerance = 1e-3) {
    const ZxzDecomposition g = zxz_decompose(gate);
    if (std::abs(g.theta - 0.5 * M_PI) > theta_tolerance)
        throw std::invalid_argument(
            "compose_target: gate's Euler theta is not a quarter turn within tolerance");
    const ZxzDecomposition t = zxz_decompose(target);
    // Target as Z(e1) X(pi/2) Z(e2) X(pi/2) Z(e3) using
    // X(tau) ~ Z(-pi/2) X(pi/2) Z(pi - tau) X(pi/2) Z(-pi/2).
    const double e1 = t.psi1 - 0.5 * M_PI;
    const double e2 = M_PI - t.theta;
    const double e3 = t.psi2 - 0.5 * M_PI;
    VirtualZFrames f;
    f.z1 = wrap_angle(e1 - g.psi1);
    f.z2 = wrap_angle(e2 - g.psi1 - g.psi2);
    f.z3 = wrap_angle(e3 - g.psi2);
    return f;
}

inline Matrix2cd apply_virtual_z(const Matrix2cd& gate, const VirtualZFrames& f) {
    return z_rotation(f.z1) * gate * z_rotation(f.z2) * gate * z_rotation(f.z3);
}

}  // namespace pulseforge
