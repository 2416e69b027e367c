#pragma once

// Maps between invariant-frame angle trajectories and control pulses.
//
// The auxiliary system ties the invariant's polar/azimuth angles (gamma,
// beta) and phase angle zeta to the drive fields (omega, phi, delta):
//
//   gamma' = -omega * sin(beta - phi)
//   beta'  = delta - omega * cot(gamma) * cos(beta - phi)
//   zeta'  = -omega * cos(beta - phi) / sin(gamma)
//
// Inverting those relations turns a designed trajectory into the pulse that
// drives it; integrating them forward recovers the trajectory of a given
// pulse. The full propagator follows from the angles alone as a five-factor
// rotation product.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "pulseforge/gate.hpp"
#include "pulseforge/grid.hpp"
#include "pulseforge/trajectory.hpp"

namespace pulseforge {

/// Raised when a trajectory integration runs into the coordinate singularity
/// at the poles of the invariant sphere.
class SingularTrajectoryError : public std::runtime_error {
public:
    explicit SingularTrajectoryError(double t)
        : std::runtime_error("trajectory passed too close to a pole (|sin gamma| < 1e-9) at t = " +
                             std::to_string(t) +
                             "; perturb the initial polar angle gamma0 and retry") {}
};

namespace detail {
inline void unwrap_inplace(std::vector<double>& phase) {
    for (std::size_t k = 1; k < phase.size(); ++k) {
        double d = phase[k] - phase[k - 1];
        while (d > M_PI) { phase[k] -= 2.0 * M_PI; d = phase[k] - phase[k - 1]; }
        while (d < -M_PI) { phase[k] += 2.0 * M_PI; d = phase[k] - phase[k - 1]; }
    }
}
}  // namespace detail

/// Recovers the control fields that drive a given invariant trajectory.
///
/// omega is returned non-negative; phi is chosen on the branch that makes the
/// forward integration reproduce the input trajectory, then unwrapped to a
/// continuous phase. Samples where both quadrature components vanish leave
/// phi momentarily undefined; the previous sample's value is carried forward
/// and the index recorded in `degenerate` when provided.
inline ControlPulse reverse_engineer(const InvariantTrajectory& traj,
                                     std::vector<int>* degenerate = nullptr) {
    const int n = traj.size();
    ControlPulse pulse{traj.grid, std::vector<double>(n), std::vector<double>(n),
                       std::vector<double>(n)};
    double prev_phi = traj.beta.empty() ? 0.0 : traj.beta[0];
    for (int i = 0; i < n; ++i) {
        const double sg = std::sin(traj.gamma[i]);
        const double cg = std::cos(traj.gamma[i]);
        const double a = traj.gamma_dot[i];
        const double b = traj.zeta_dot[i] * sg;
        pulse.omega[i] = std::sqrt(a * a + b * b);
        if (pulse.omega[i] < 1e-15 * (1.0 + std::abs(traj.zeta_dot[i]))) {
            pulse.phi[i] = prev_phi;
            if (degenerate) degenerate->push_back(i);
        } else {
            pulse.phi[i] = traj.beta[i] - std::atan2(-a, -b);
            prev_phi = pulse.phi[i];
        }
        pulse.delta[i] = traj.beta_dot[i] - traj.zeta_dot[i] * cg;
    }
    detail::unwrap_inplace(pulse.phi);
    if (!pulse.phi.empty()) {
        // Anchor the first sample in (-pi, pi] and shift the rest with it.
        const double shift = wrap_angle(pulse.phi[0]) - pulse.phi[0];
        for (double& p : pulse.phi) p += shift;
    }
    return pulse;
}

/// Azimuth samples that cancel the detuning output of reverse_engineer:
/// beta(t) = -zeta(0) + cumulative integral of zeta' * cos(gamma).
inline std::vector<double> solve_beta_zero_detuning(const std::vector<double>& gamma,
                                                    const std::vector<double>& zeta,
                                                    const TimeGrid& grid) {
    if (static_cast<int>(gamma.size()) != grid.size() ||
        static_cast<int>(zeta.size()) != grid.size())
        throw std::invalid_argument("solve_beta_zero_detuning: array length does not match grid");
    const double dt = grid.dt();
    const std::vector<double> zeta_dot = derivative_samples(zeta, dt);
    std::vector<double> integrand(grid.size());
    for (int i = 0; i < grid.size(); ++i) integrand[i] = zeta_dot[i] * std::cos(gamma[i]);
    return cumulative_trapezoid(integrand, dt, -zeta[0]);
}

/// Full zero-detuning trajectory from (gamma, zeta) samples. The azimuth
/// derivative is stored as zeta' * cos(gamma) itself, which is what makes the
/// reverse-engineered detuning vanish identically rather than to stencil
/// accuracy.
inline InvariantTrajectory zero_detuning_trajectory(const TimeGrid& grid,
                                                    std::vector<double> gamma,
                                                    std::vector<double> zeta) {
    InvariantTrajectory traj{grid, std::move(gamma), {}, std::move(zeta), {}, {}, {}};
    const double dt = grid.dt();
    traj.gamma_dot = derivative_samples(traj.gamma, dt);
    traj.zeta_dot = derivative_samples(traj.zeta, dt);
    traj.beta = solve_beta_zero_detuning(traj.gamma, traj.zeta, grid);
    traj.beta_dot.resize(grid.size());
    for (int i = 0; i < grid.size(); ++i)
        traj.beta_dot[i] = traj.zeta_dot[i] * std::cos(traj.gamma[i]);
    return traj;
}

/// Continuous-time control fields used by the integrators.
struct ControlFields {
    std::function<double(double)> omega, phi, delta;
};

inline ControlFields interpolated_fields(const ControlPulse& pulse) {
    std::vector<double> phi = pulse.phi;
    detail::unwrap_inplace(phi);
    return ControlFields{UniformInterpolant(pulse.omega, pulse.grid),
                         UniformInterpolant(phi, pulse.grid),
                         UniformInterpolant(pulse.delta, pulse.grid)};
}

/// Right-hand side of the auxiliary system at one state point (zeta does not
/// enter its own derivative). Throws near a pole when the singular term is
/// actually being driven.
inline void auxiliary_rhs(const ControlFields& fields, double t, double g, double b,
                          double& gamma_dot, double& beta_dot, double& zeta_dot) {
    const double om = fields.omega(t);
    const double ph = fields.phi(t);
    const double de = fields.delta(t);
    const double sg = std::sin(g);
    const double drive = om * std::cos(b - ph);
    if (std::abs(sg) < 1e-9 && std::abs(drive) > 1e-9 * (1.0 + std::abs(om)))
        throw SingularTrajectoryError(t);
    const double inv_sg = (std::abs(sg) < 1e-9) ? 0.0 : 1.0 / sg;
    gamma_dot = -om * std::sin(b - ph);
    beta_dot = de - drive * std::cos(g) * inv_sg;
    zeta_dot = -drive * inv_sg;
}

/// Advances (gamma, beta, zeta) from t0 to t1 with fixed-step RK4.
inline void advance_auxiliary(const ControlFields& fields, double t0, double t1, std::size_t steps,
                              double& g, double& b, double& z) {
    if (steps == 0) throw std::invalid_argument("advance_auxiliary: steps must be >= 1");
    const double h = (t1 - t0) / static_cast<double>(steps);
    struct D { double g, b, z; };
    const auto rhs = [&fields](double t, double gg, double bb) -> D {
        D d;
        auxiliary_rhs(fields, t, gg, bb, d.g, d.b, d.z);
        return d;
    };
    for (std::size_t s = 0; s < steps; ++s) {
        const double ts = t0 + static_cast<double>(s) * h;
        const D k1 = rhs(ts, g, b);
        const D k2 = rhs(ts + 0.5 * h, g + 0.5 * h * k1.g, b + 0.5 * h * k1.b);
        const D k3 = rhs(ts + 0.5 * h, g + 0.5 * h * k2.g, b + 0.5 * h * k2.b);
        const D k4 = rhs(ts + h, g + h * k3.g, b + h * k3.b);
        g += h / 6.0 * (k1.g + 2.0 * k2.g + 2.0 * k3.g + k4.g);
        b += h / 6.0 * (k1.b + 2.0 * k2.b + 2.0 * k3.b + k4.b);
        z += h / 6.0 * (k1.z + 2.0 * k2.z + 2.0 * k3.z + k4.z);
    }
}

/// Integrates the auxiliary system from (gamma0, beta0) over [0, T] with
/// fixed-step RK4 (optionally substepped between grid nodes) and returns the
/// trajectory sampled on the grid, with derivative arrays evaluated from the
/// right-hand side at the nodes. zeta starts in the gauge zeta(0) = -beta(0).
inline InvariantTrajectory forward_solve_fields(const ControlFields& fields, const TimeGrid& grid,
                                                double gamma0, double beta0, int substeps = 1) {
    if (substeps < 1) throw std::invalid_argument("forward_solve: substeps must be >= 1");
    const int n = grid.size();
    InvariantTrajectory traj{grid,
                             std::vector<double>(n), std::vector<double>(n), std::vector<double>(n),
                             std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};

    double g = gamma0, b = beta0, z = -beta0;
    for (int i = 0; i < n; ++i) {
        const double t = grid.time(i);
        traj.gamma[i] = g;
        traj.beta[i] = b;
        traj.zeta[i] = z;
        auxiliary_rhs(fields, t, g, b, traj.gamma_dot[i], traj.beta_dot[i], traj.zeta_dot[i]);
        if (i + 1 == n) break;
        advance_auxiliary(fields, t, grid.time(i + 1), static_cast<std::size_t>(substeps), g, b, z);
    }
    return traj;
}

inline InvariantTrajectory forward_solve(const ControlPulse& pulse, double gamma0, double beta0,
                                         int substeps = 1) {
    return forward_solve_fields(interpolated_fields(pulse), pulse.grid, gamma0, beta0, substeps);
}

/// Propagator at grid node i reconstructed from the invariant angles alone:
///   U(t) = Z(beta_t) Y(gamma_t) Z(zeta_0 - zeta_t) Y(-gamma_0) Z(-beta_0)
/// with Z/Y the half-angle rotation conventions from gate.hpp.
inline Matrix2cd gate_at(const InvariantTrajectory& traj, int i) {
    if (i < 0 || i >= traj.size()) throw std::out_of_range("gate_at: index outside grid");
    return z_rotation(traj.beta[i]) * y_rotation(traj.gamma[i]) *
           z_rotation(traj.zeta[0] - traj.zeta[i]) * y_rotation(-traj.gamma[0]) *
           z_rotation(-traj.beta[0]);
}

inline Matrix2cd gate_from_invariants(const InvariantTrajectory& traj) {
    return gate_at(traj, traj.size() - 1);
}

/// Euler theta of the final gate, straight from the endpoint angles:
///   cos(theta) = cos(zeta_0 - zeta_T) sin(gamma_T) sin(gamma_0)
///              + cos(gamma_T) cos(gamma_0).
inline double endpoint_theta(const InvariantTrajectory& traj) {
    const int last = traj.size() - 1;
    const double c = std::cos(traj.zeta[0] - traj.zeta[last]) * std::sin(traj.gamma[last]) *
                         std::sin(traj.gamma[0]) +
                     std::cos(traj.gamma[last]) * std::cos(traj.gamma[0]);
    return std::acos(std::clamp(c, -1.0, 1.0));
}

}  // namespace pulseforge
