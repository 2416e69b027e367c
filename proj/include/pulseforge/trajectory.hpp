#pragma once

// Core data carriers: invariant-frame angle trajectories and control pulses,
// both sampled on a uniform time grid. Trajectories store derivative arrays
// alongside values; factory helpers fill them either from an analytic source
// or from the shared finite-difference stencil.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pulseforge/grid.hpp"

namespace pulseforge {

/// Angle parameterization of a dynamical invariant: polar angle gamma,
/// azimuth beta, and the accumulated phase angle zeta, with their time
/// derivatives sampled on the same grid.
struct InvariantTrajectory {
    TimeGrid grid{1.0, 2};
    std::vector<double> gamma, beta, zeta;
    std::vector<double> gamma_dot, beta_dot, zeta_dot;

    int size() const { return grid.size(); }
};

/// Piecewise control fields: drive amplitude omega (signed), drive phase phi,
/// and detuning delta, sampled on a uniform grid.
struct ControlPulse {
    TimeGrid grid{1.0, 2};
    std::vector<double> omega, phi, delta;

    int size() const { return grid.size(); }
    double max_abs_omega() const {
        double m = 0.0;
        for (double w : omega) m = std::max(m, std::abs(w));
        return m;
    }
};

namespace detail {
inline void check_sizes(const TimeGrid& grid, std::initializer_list<const std::vector<double>*> arrays,
                        const char* what) {
    for (const auto* a : arrays)
        if (static_cast<int>(a->size()) != grid.size())
            throw std::invalid_argument(std::string(what) + ": array length does not match grid");
}
}  // namespace detail

/// Builds a trajectory from value samples; derivatives come from the module's
/// finite-difference stencil.
inline InvariantTrajectory trajectory_from_samples(const TimeGrid& grid,
                                                   std::vector<double> gamma,
                                                   std::vector<double> beta,
                                                   std::vector<double> zeta) {
    detail::check_sizes(grid, {&gamma, &beta, &zeta}, "trajectory_from_samples");
    InvariantTrajectory traj{grid, std::move(gamma), std::move(beta), std::move(zeta), {}, {}, {}};
    const double dt = grid.dt();
    traj.gamma_dot = derivative_samples(traj.gamma, dt);
    traj.beta_dot = derivative_samples(traj.beta, dt);
    traj.zeta_dot = derivative_samples(traj.zeta, dt);
    return traj;
}

/// Builds a trajectory by sampling angle functions and their exact
/// derivatives on the grid.
inline InvariantTrajectory trajectory_from_functions(
    const TimeGrid& grid, const std::function<double(double)>& gamma,
    const std::function<double(double)>& beta, const std::function<double(double)>& zeta,
    const std::function<double(double)>& gamma_dot, const std::function<double(double)>& beta_dot,
    const std::function<double(double)>& zeta_dot) {
    InvariantTrajectory traj{grid, {}, {}, {}, {}, {}, {}};
    const int n = grid.size();
    traj.gamma.resize(n); traj.beta.resize(n); traj.zeta.resize(n);
    traj.gamma_dot.resize(n); traj.beta_dot.resize(n); traj.zeta_dot.resize(n);
    for (int i = 0; i < n; ++i) {
        const double t = grid.time(i);
        traj.gamma[i] = gamma(t);
        traj.beta[i] = beta(t);
        traj.zeta[i] = zeta(t);
        traj.gamma_dot[i] = gamma_dot(t);
        traj.beta_dot[i] = beta_dot(t);
        traj.zeta_dot[i] = zeta_dot(t);
    }
    return traj;
}

inline ControlPulse pulse_from_samples(const TimeGrid& grid, std::vector<double> omega,
                                       std::vector<double> phi, std::vector<double> delta) {
    detail::check_sizes(grid, {&omega, &phi, &delta}, "pulse_from_samples");
    return ControlPulse{grid, std::move(omega), std::move(phi), std::move(delta)};
}

}  // namespace pulseforge
