#pragma once

// Self-contained conformance suite: cross-checks every analytic shortcut in
// the library against an independent computation path (group representation
// identities, integrator round trips, closed-form kernels vs quadrature,
// reverse-mode gradients vs finite differences). Includes a mutation canary
// that deliberately corrupts one frame-map entry and demands the equivalence
// check notice, so a silent weakening of the suite itself shows up.

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pulseforge/cost.hpp"
#include "pulseforge/filter_function.hpp"
#include "pulseforge/gate.hpp"
#include "pulseforge/geometric.hpp"
#include "pulseforge/infidelity.hpp"
#include "pulseforge/invariant_core.hpp"
#include "pulseforge/mlp.hpp"
#include "pulseforge/noise.hpp"
#include "pulseforge/oracle.hpp"
#include "pulseforge/pulse_library.hpp"
#include "pulseforge/train.hpp"
#include "pulseforge/trajectory.hpp"

namespace pulseforge {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct VerifyOptions {
    double ff_tol = 1e-6;
    double kernel_tol = 1e-6;
    double bilinear_tol = 1e-4;
    double gradient_tol = 1e-4;
    std::uint64_t seed = 20240817;
};

/// Smooth random trajectory with analytic derivatives: a few Fourier modes
/// around the equator for gamma (pole-safe), drifting Fourier series for beta
/// and zeta so the reverse-engineered detuning is nonzero.
inline InvariantTrajectory random_smooth_trajectory(std::uint64_t seed, double total_time = 4.0,
                                                    int samples = 1024) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double w0 = 2.0 * M_PI / total_time;

    struct Series {
        double drift = 0.0;
        std::vector<double> amp, freq, phase;
        double operator()(double t) const {
            double s = drift * t;
            for (std::size_t k = 0; k < amp.size(); ++k)
                s += amp[k] * std::sin(freq[k] * t + phase[k]);
            return s;
        }
        double derivative(double t) const {
            double s = drift;
            for (std::size_t k = 0; k < amp.size(); ++k)
                s += amp[k] * freq[k] * std::cos(freq[k] * t + phase[k]);
            return s;
        }
    };
    const auto make_series = [&](double drift_scale, double amp_scale) {
        Series s;
        s.drift = drift_scale * u(rng);
        for (int k = 1; k <= 3; ++k) {
            s.amp.push_back(amp_scale / k * u(rng));
            s.freq.push_back(k * w0);
            s.phase.push_back(M_PI * u(rng));
        }
        return s;
    };
    const Series dg = make_series(0.0, 0.4);   // |sum| <= 0.73, keeps gamma off the poles
    const Series db = make_series(0.3, 0.5);
    const Series dz = make_series(1.0, 0.5);

    const TimeGrid grid(total_time, samples);
    return trajectory_from_functions(
        grid, [&](double t) { return 0.5 * M_PI + dg(t); }, [&](double t) { return db(t); },
        [&](double t) { return dz(t); }, [&](double t) { return dg.derivative(t); },
        [&](double t) { return db.derivative(t); }, [&](double t) { return dz.derivative(t); });
}

namespace detail {

inline std::string tol_detail(double worst, double tol) {
    std::ostringstream os;
    os << "max rel err " << worst << " (tol " << tol << ")";
    return os.str();
}

/// Largest relative disagreement between the frame-map filter function and
/// the propagator-based one, over the given channel and frequencies. When
/// `mutate_lambda22` is set the frame map's middle diagonal entry is sign
/// flipped first.
inline double ff_equivalence_error(const InvariantTrajectory& traj,
                                   const std::vector<Eigen::Matrix3d>& adjoints,
                                   const Eigen::Matrix3Xd& chi, const std::vector<double>& omegas,
                                   bool mutate_lambda22) {
    const QuadratureNodes nodes = trapezoid_nodes(traj.grid);
    Eigen::Matrix3Xd v_map(3, traj.size());
    for (int j = 0; j < traj.size(); ++j) {
        Eigen::Matrix3d lam = lambda_matrix(traj.gamma[j], traj.beta[j], traj.zeta[j]);
        if (mutate_lambda22) lam(1, 1) = -lam(1, 1);
        v_map.col(j) = lam * chi.col(j);
    }
    const std::vector<double> analytic = filter_function_values(nodes, v_map, omegas);
    const std::vector<double> direct = ff_direct(nodes, adjoints, chi, omegas);
    const double t2 = traj.grid.total_time() * traj.grid.total_time();
    double worst = 0.0;
    for (std::size_t i = 0; i < omegas.size(); ++i) {
        const double scale = std::max({std::abs(analytic[i]), std::abs(direct[i]), 1e-12 * t2});
        worst = std::max(worst, std::abs(analytic[i] - direct[i]) / scale);
    }
    return worst;
}

}  // namespace detail

inline std::vector<CheckResult> run_conformance(const VerifyOptions& opt = {}) {
    std::vector<CheckResult> checks;
    const auto add = [&checks](const std::string& name, bool pass, const std::string& detail) {
        checks.push_back({name, pass, detail});
    };
    const auto guarded = [&add](const std::string& name, auto&& body) {
        try {
            body();
        } catch (const std::exception& e) {
            add(name, false, std::string("exception: ") + e.what());
        }
    };

    guarded("so3-homomorphism", [&] {
        std::mt19937_64 rng(opt.seed);
        std::uniform_real_distribution<double> u(-M_PI, M_PI);
        double worst = 0.0;
        for (int k = 0; k < 50; ++k) {
            const Matrix2cd a = planar_rotation(u(rng), u(rng)) * z_rotation(u(rng));
            const Matrix2cd b = planar_rotation(u(rng), u(rng)) * z_rotation(u(rng));
            const Eigen::Matrix3d ra = adjoint_matrix(a), rb = adjoint_matrix(b);
            worst = std::max(worst, (adjoint_matrix(a * b) - ra * rb).cwiseAbs().maxCoeff());
            worst = std::max(worst,
                             (ra.transpose() * ra - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff());
            worst = std::max(worst, std::abs(ra.determinant() - 1.0));
        }
        add("so3-homomorphism", worst <= 1e-12, detail::tol_detail(worst, 1e-12));
    });

    guarded("gate-reconstruction", [&] {
        const InvariantTrajectory traj = random_smooth_trajectory(opt.seed + 1);
        const ControlPulse pulse = reverse_engineer(traj);
        const PropagationResult prop = tdse_propagate(pulse);
        const double dist = gate_distance(prop.unitaries.back(), gate_from_invariants(traj));
        add("gate-reconstruction", dist <= 1e-6, detail::tol_detail(dist, 1e-6));
    });

    guarded("filter-function-equivalence", [&] {
        std::vector<double> omegas;
        for (int k = 0; k < 12; ++k) omegas.push_back(1e-3 * std::pow(10.0, 4.0 * k / 11.0));
        double worst = 0.0;
        for (int rep = 0; rep < 2; ++rep) {
            const InvariantTrajectory traj = random_smooth_trajectory(opt.seed + 2 + rep);
            const ControlPulse pulse = reverse_engineer(traj);
            const PropagationResult prop = tdse_propagate(pulse);
            for (Sensitivity s : {Sensitivity::AdditiveDetuning, Sensitivity::MultiplicativeAmplitude,
                                  Sensitivity::MultiplicativeDetuning}) {
                worst = std::max(worst, detail::ff_equivalence_error(
                                            traj, prop.adjoints, chi_samples(pulse, s), omegas, false));
            }
        }
        add("filter-function-equivalence", worst <= opt.ff_tol, detail::tol_detail(worst, opt.ff_tol));
    });

    guarded("kernel-quadrature", [&] {
        const double T = 4.0;
        const PsdSpec band = PsdSpec::one_over_f_band(0.7, 1e-9, 0.1);
        const PsdSpec tail = PsdSpec::one_over_f_with_tail(0.7, 1e-9, 0.1);
        double worst = 0.0;
        for (const PsdSpec& psd : {band, tail}) {
            for (double f : {0.01, 0.1, 1.0, 10.0}) {
                const double tau = f * T;
                const double exact = psd.kernel(tau);
                const double quad = kernel_by_quadrature(psd, tau);
                worst = std::max(worst, std::abs(exact - quad) /
                                            std::max({std::abs(exact), std::abs(quad), 1e-300}));
            }
        }
        add("kernel-quadrature", worst <= opt.kernel_tol, detail::tol_detail(worst, opt.kernel_tol));
    });

    guarded("bilinear-vs-quadrature", [&] {
        const CompositeSpec naive = composite_spec(CompositeKind::Naive, 0.5 * M_PI);
        const QuadratureNodes nodes = composite_nodes(naive);
        double worst = 0.0;
        for (const NoiseChannel& ch : case_channels(ExperimentCase::A, 1.0)) {
            const Eigen::Matrix3Xd v = composite_integrand(naive, nodes, ch.sensitivity);
            const double bilinear = bilinear_infidelity(nodes, v, ch.psd);
            const double quad = infidelity_by_quadrature(nodes, v, ch.psd);
            worst = std::max(worst,
                             std::abs(bilinear - quad) / std::max(std::abs(quad), 1e-300));
        }
        add("bilinear-vs-quadrature", worst <= opt.bilinear_tol,
            detail::tol_detail(worst, opt.bilinear_tol));
    });

    guarded("gradient-vs-fd", [&] {
        CostConfig cfg;
        cfg.total_time = 16.0 * M_PI;
        cfg.grid_samples = 64;
        cfg.channels = case_channels(ExperimentCase::A, 0.01);
        const CostModel model(cfg);
        Mlp net(opt.seed + 10);
        Eigen::VectorXd grad(Mlp::parameter_count());
        model.evaluate_with_gradient(net, grad);
        std::mt19937_64 rng(opt.seed + 11);
        std::uniform_int_distribution<int> pick(0, Mlp::parameter_count() - 1);
        const double h = 1e-5;
        // Floor the denominator at a fraction of the gradient's largest entry:
        // coordinates that are zero relative to the overall gradient scale sit
        // below the finite-difference noise floor and cannot be compared
        // relatively.
        const double scale_floor = 1e-3 * grad.cwiseAbs().maxCoeff();
        double worst = 0.0;
        for (int k = 0; k < 10; ++k) {
            const int i = pick(rng);
            Eigen::VectorXd p = net.parameters();
            Mlp probe;
            p[i] += h;
            probe.set_parameters(p);
            const double up = model.evaluate(probe);
            p[i] -= 2.0 * h;
            probe.set_parameters(p);
            const double dn = model.evaluate(probe);
            const double fd = (up - dn) / (2.0 * h);
            worst = std::max(worst, std::abs(fd - grad[i]) /
                                        std::max({std::abs(fd), std::abs(grad[i]), scale_floor}));
        }
        add("gradient-vs-fd", worst <= opt.gradient_tol, detail::tol_detail(worst, opt.gradient_tol));
    });

    guarded("composite-phase", [&] {
        // Resonant sequences set up with the invariant along the drive axis
        // are cyclic, and their transformationless frame makes the whole
        // phase dynamical; the quarter-turn class lands at |alpha_d| = pi/4.
        const CompositeSpec corpse = composite_spec(CompositeKind::Corpse, 0.5 * M_PI);
        const InvariantTrajectory traj = composite_to_invariants(corpse, 2048, 0.5 * M_PI, 0.0);
        const PhaseReport phases = phase_decompose(traj, 1e-3);
        const bool pass = phases.cyclic && std::abs(std::abs(phases.alpha_dynamical) - 0.25 * M_PI) < 0.02 &&
                          std::abs(phases.alpha_dynamical) > 0.1;
        std::ostringstream os;
        os << "alpha_d = " << phases.alpha_dynamical << ", cyclic = " << phases.cyclic;
        add("composite-phase", pass, os.str());
    });

    guarded("mutation-canary", [&] {
        const InvariantTrajectory traj = random_smooth_trajectory(opt.seed + 2);
        const ControlPulse pulse = reverse_engineer(traj);
        const PropagationResult prop = tdse_propagate(pulse);
        std::vector<double> omegas;
        for (int k = 0; k < 8; ++k) omegas.push_back(1e-2 * std::pow(10.0, 3.0 * k / 7.0));
        const double err = detail::ff_equivalence_error(
            traj, prop.adjoints, chi_samples(pulse, Sensitivity::MultiplicativeAmplitude), omegas,
            true);
        std::ostringstream os;
        os << "corrupted frame map moved the equivalence error to " << err;
        add("mutation-canary", err > opt.ff_tol, os.str());
    });

    return checks;
}

inline bool all_passed(const std::vector<CheckResult>& checks) {
    for (const CheckResult& c : checks)
        if (!c.pass) return false;
    return !checks.empty();
}

}  // namespace pulseforge
