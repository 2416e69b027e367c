#pragma once

// Independent ground-truth paths: direct Schrodinger propagation, the adjoint
// (rotation) representation of the propagator, filter functions computed from
// it, frequency-domain quadrature of the infidelity integral, quadrature
// checks of the analytic kernels, and Monte Carlo infidelity with synthesized
// noise traces. Everything here deliberately avoids the closed forms used by
// the analytic modules so the two can check each other.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

#include "pulseforge/filter_function.hpp"
#include "pulseforge/gate.hpp"
#include "pulseforge/invariant_core.hpp"
#include "pulseforge/noise.hpp"
#include "pulseforge/parallel.hpp"
#include "pulseforge/quadrature.hpp"
#include "pulseforge/special_functions.hpp"
#include "pulseforge/trajectory.hpp"

namespace pulseforge {

/// Time-dependent Bloch coefficients (hx, hy, hz) of H = (hx sx + hy sy +
/// hz sz)/2. The generic propagator below consumes this signature.
using BlochCoefficients = std::function<void(double t, double& hx, double& hy, double& hz)>;

inline BlochCoefficients bloch_from_fields(const ControlFields& fields) {
    return [fields](double t, double& hx, double& hy, double& hz) {
        const double om = fields.omega(t);
        const double ph = fields.phi(t);
        hx = om * std::cos(ph);
        hy = om * std::sin(ph);
        hz = fields.delta(t);
    };
}

namespace detail {

// One RK4 step of U' = -i H(t) U with H = (hx sx + hy sy + hz sz)/2.
inline Matrix2cd schrodinger_rhs(const BlochCoefficients& h, double t, const Matrix2cd& u) {
    double hx = 0.0, hy = 0.0, hz = 0.0;
    h(t, hx, hy, hz);
    const complexd i{0.0, 1.0};
    Matrix2cd ham;
    ham << 0.5 * hz, 0.5 * (hx - i * hy), 0.5 * (hx + i * hy), -0.5 * hz;
    return -i * (ham * u);
}

inline void rk4_step(const BlochCoefficients& h, double t, double dt, Matrix2cd& u) {
    const Matrix2cd k1 = schrodinger_rhs(h, t, u);
    const Matrix2cd k2 = schrodinger_rhs(h, t + 0.5 * dt, u + 0.5 * dt * k1);
    const Matrix2cd k3 = schrodinger_rhs(h, t + 0.5 * dt, u + 0.5 * dt * k2);
    const Matrix2cd k4 = schrodinger_rhs(h, t + dt, u + dt * k3);
    u += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace detail

/// Propagate U from t0 to t1 with a fixed number of RK4 steps.
inline Matrix2cd propagate_interval(const BlochCoefficients& h, double t0, double t1,
                                    std::size_t steps, Matrix2cd u = Matrix2cd::Identity()) {
    if (steps == 0) throw std::invalid_argument("propagate_interval: steps must be positive");
    const double dt = (t1 - t0) / static_cast<double>(steps);
    for (std::size_t s = 0; s < steps; ++s) {
        detail::rk4_step(h, t0 + static_cast<double>(s) * dt, dt, u);
    }
    return u;
}

/// Rotation (adjoint) representation R_ik = tr(U^dag s_i U s_k) / 2.
inline Eigen::Matrix3d adjoint_matrix(const Matrix2cd& u) {
    const Matrix2cd paulis[3] = {pauli_x(), pauli_y(), pauli_z()};
    Eigen::Matrix3d r;
    for (int i = 0; i < 3; ++i) {
        const Matrix2cd lhs = u.adjoint() * paulis[i] * u;
        for (int k = 0; k < 3; ++k) {
            r(i, k) = 0.5 * (lhs * paulis[k]).trace().real();
        }
    }
    return r;
}

struct PropagationResult {
    TimeGrid grid{1.0, 2};
    std::vector<Matrix2cd> unitaries;
    std::vector<Eigen::Matrix3d> adjoints;
};

/// Propagate across the grid, storing U and its adjoint at every node. The
/// reported result uses `substeps` RK4 steps per grid interval; a shadow pass
/// at half the step verifies convergence of the final unitary.
inline PropagationResult tdse_propagate(const BlochCoefficients& h, const TimeGrid& grid,
                                        std::size_t substeps = 4,
                                        double convergence_tol = 1e-8) {
    PropagationResult out;
    out.grid = grid;
    out.unitaries.resize(grid.size());
    out.adjoints.resize(grid.size());
    Matrix2cd u = Matrix2cd::Identity();
    out.unitaries[0] = u;
    out.adjoints[0] = adjoint_matrix(u);
    for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
        u = propagate_interval(h, grid.time(j), grid.time(j + 1), substeps, u);
        if (unitarity_defect(u) > 1e-6)
            throw std::runtime_error("tdse_propagate: propagation lost unitarity");
        out.unitaries[j + 1] = u;
        out.adjoints[j + 1] = adjoint_matrix(u);
    }
    if (convergence_tol > 0.0) {
        Matrix2cd fine = Matrix2cd::Identity();
        for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
            fine = propagate_interval(h, grid.time(j), grid.time(j + 1), 2 * substeps, fine);
        }
        if (gate_distance(fine, u) > convergence_tol)
            throw std::runtime_error("tdse_propagate: step-halving check failed; increase substeps");
    }
    return out;
}

inline PropagationResult tdse_propagate(const ControlPulse& pulse, std::size_t substeps = 4,
                                        double convergence_tol = 1e-8) {
    return tdse_propagate(bloch_from_fields(interpolated_fields(pulse)), pulse.grid, substeps,
                          convergence_tol);
}

/// Filter function through the adjoint path: v_j = R(t_j)^T chi(t_j), then
/// the same windowed Fourier norm as the analytic route.
inline std::vector<double> ff_direct(const QuadratureNodes& nodes,
                                     const std::vector<Eigen::Matrix3d>& adjoints,
                                     const Eigen::Matrix3Xd& chi,
                                     const std::vector<double>& omegas) {
    if (adjoints.size() != nodes.size() || chi.cols() != static_cast<Eigen::Index>(nodes.size()))
        throw std::invalid_argument("ff_direct: node/adjoint/chi size mismatch");
    Eigen::Matrix3Xd v(3, static_cast<Eigen::Index>(nodes.size()));
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        v.col(static_cast<Eigen::Index>(j)) =
            adjoints[j].transpose() * chi.col(static_cast<Eigen::Index>(j));
    }
    return filter_function_values(nodes, v, omegas);
}

/// Sensitivity history of a channel along a pulse, sampled on its grid.
inline Eigen::Matrix3Xd chi_samples(const ControlPulse& pulse, Sensitivity s) {
    const Eigen::Index n = static_cast<Eigen::Index>(pulse.size());
    Eigen::Matrix3Xd chi = Eigen::Matrix3Xd::Zero(3, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        switch (s) {
            case Sensitivity::AdditiveDetuning:
                chi(2, j) = 0.5;
                break;
            case Sensitivity::MultiplicativeAmplitude:
                chi(0, j) = 0.5 * pulse.omega[j] * std::cos(pulse.phi[j]);
                chi(1, j) = 0.5 * pulse.omega[j] * std::sin(pulse.phi[j]);
                break;
            case Sensitivity::MultiplicativeDetuning:
                chi(2, j) = 0.5 * pulse.delta[j];
                break;
        }
    }
    return chi;
}

inline std::vector<double> ff_direct(const ControlPulse& pulse, Sensitivity s,
                                     const std::vector<double>& omegas,
                                     std::size_t substeps = 4) {
    const PropagationResult prop = tdse_propagate(pulse, substeps);
    return ff_direct(trapezoid_nodes(pulse.grid), prop.adjoints, chi_samples(pulse, s), omegas);
}

// ---------------------------------------------------------------------------
// Frequency-domain quadrature of the infidelity integral
// I = (1/pi) * integral_0^inf S(w) Fhat(w) dw, evaluated numerically from
// the discrete filter function. Used to validate the bilinear kernel form,
// which must agree because both are exact functionals of the same samples.
// ---------------------------------------------------------------------------

inline double infidelity_by_quadrature(const QuadratureNodes& nodes, const Eigen::Matrix3Xd& v,
                                       const PsdSpec& psd, double rel_tol = 1e-7) {
    const auto fhat = [&](double w) { return filter_function_value(nodes, v, w); };
    switch (psd.kind) {
        case PsdKind::DeltaAtZero:
            return psd.amplitude / M_PI * fhat(0.0);
        case PsdKind::OneOverFBand: {
            // (1/pi) * int_{w0}^{wc} (A/w) Fhat dw, log substitution u = ln w.
            const auto integrand = [&](double u) { return fhat(std::exp(u)); };
            const double val = adaptive_simpson(integrand, std::log(psd.omega_min),
                                                std::log(psd.omega_max), rel_tol * 1e-2);
            return psd.amplitude / M_PI * val;
        }
        case PsdKind::OneOverFWithTail: {
            const auto band_integrand = [&](double u) { return fhat(std::exp(u)); };
            const double band = psd.amplitude / M_PI *
                                adaptive_simpson(band_integrand, std::log(psd.omega_min),
                                                 std::log(psd.omega_max), rel_tol * 1e-2);
            // Tail (A wc / pi) int_{wc}^{W} Fhat / w^2 dw in blocks of one
            // Fourier oscillation, then a mean-value remainder for [W, inf).
            // The remainder uses the exact almost-periodic mean of Fhat,
            // sum_j w_j^2 |v_j|^2.
            double mean_f = 0.0;
            for (std::size_t j = 0; j < nodes.size(); ++j) {
                mean_f += nodes.w[j] * nodes.w[j] *
                          v.col(static_cast<Eigen::Index>(j)).squaredNorm();
            }
            const double span = nodes.t.back() - nodes.t.front();
            const double block = 2.0 * M_PI / span;
            const double scale = psd.amplitude * psd.omega_max / M_PI;
            double total = band;
            double w_lo = psd.omega_max;
            const auto tail_integrand = [&](double w) { return fhat(w) / (w * w); };
            for (std::size_t k = 0; k < 2000000; ++k) {
                QuadratureNodes q;
                append_gl_panels(q, w_lo, w_lo + block, 0.26 * block);
                double contrib = 0.0;
                for (std::size_t j = 0; j < q.size(); ++j) contrib += q.w[j] * tail_integrand(q.t[j]);
                total += scale * contrib;
                w_lo += block;
                const double remainder = scale * mean_f / w_lo;
                if (remainder < 0.1 * rel_tol * std::abs(total) && w_lo > 10.0 * psd.omega_max) {
                    return total + remainder;
                }
            }
            throw std::runtime_error("infidelity_by_quadrature: tail integral failed to converge");
        }
    }
    throw std::logic_error("infidelity_by_quadrature: unknown PSD kind");
}

/// Autocorrelation kernel by direct numerical quadrature of
/// (1/pi) * int_0^inf S(w) cos(w tau) dw; validates the Ci/Si closed forms.
inline double kernel_by_quadrature(const PsdSpec& psd, double tau, double rel_tol = 1e-9) {
    const double at = std::abs(tau);
    switch (psd.kind) {
        case PsdKind::DeltaAtZero:
            return psd.amplitude / M_PI;
        case PsdKind::OneOverFBand:
        case PsdKind::OneOverFWithTail: {
            const auto band_integrand = [&](double u) { return std::cos(std::exp(u) * at); };
            double total = psd.amplitude / M_PI *
                           adaptive_simpson(band_integrand, std::log(psd.omega_min),
                                            std::log(psd.omega_max), rel_tol * 1e-3);
            if (psd.kind == PsdKind::OneOverFWithTail) {
                // (A wc / pi) int_{wc}^inf cos(w tau) / w^2 dw. With x = w tau
                // this is (A wc tau / pi) int_a^inf cos x / x^2 dx, a = wc tau.
                if (at == 0.0) {
                    total += psd.amplitude / M_PI;  // integral of wc/w^2 from wc
                } else {
                    const double a = psd.omega_max * at;
                    const double cutoff = std::max(a + 64.0 * 2.0 * M_PI, 3000.0);
                    // cos(x)/x^2 is steep across the first oscillations when
                    // a << 1, so integrate the head adaptively before
                    // switching to oscillation-sized panels.
                    const double head_end = a + 4.0 * M_PI;
                    const auto tail_integrand = [](double x) { return std::cos(x) / (x * x); };
                    double num = adaptive_simpson(tail_integrand, a, head_end, rel_tol * 1e-2);
                    QuadratureNodes q;
                    append_gl_panels(q, head_end, cutoff, 0.26 * 2.0 * M_PI);
                    for (std::size_t j = 0; j < q.size(); ++j)
                        num += q.w[j] * tail_integrand(q.t[j]);
                    // Integration by parts remainder for [cutoff, inf).
                    const double X = cutoff;
                    num += -std::sin(X) / (X * X) + 2.0 * std::cos(X) / (X * X * X) +
                           6.0 * std::sin(X) / (X * X * X * X);
                    total += psd.amplitude * psd.omega_max * at / M_PI * num;
                }
            }
            return total;
        }
    }
    throw std::logic_error("kernel_by_quadrature: unknown PSD kind");
}

// ---------------------------------------------------------------------------
// Monte Carlo infidelity with synthesized noise traces.
// ---------------------------------------------------------------------------

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// One realization of a noise process: static offset plus random-phase
/// cosines whose amplitudes carry the PSD's per-bin variance.
struct NoiseTrace {
    double offset = 0.0;
    std::vector<double> amp, freq, phase;

    double operator()(double t) const {
        double x = offset;
        for (std::size_t k = 0; k < amp.size(); ++k) x += amp[k] * std::cos(freq[k] * t + phase[k]);
        return x;
    }
};

inline void add_cosine_bins(NoiseTrace& trace, const PsdSpec& psd, double lo, double hi,
                            std::size_t bins, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uphase(0.0, 2.0 * M_PI);
    const double llo = std::log(lo), lhi = std::log(hi);
    for (std::size_t k = 0; k < bins; ++k) {
        const double e0 = std::exp(llo + (lhi - llo) * static_cast<double>(k) / bins);
        const double e1 = std::exp(llo + (lhi - llo) * static_cast<double>(k + 1) / bins);
        const double wk = std::sqrt(e0 * e1);
        const double s = psd.value(wk);
        // Bin variance (1/pi)*S*dw, realized by a cosine of amplitude
        // sqrt(2 S dw / pi) since <cos^2> = 1/2.
        trace.amp.push_back(std::sqrt(2.0 * s * (e1 - e0) / M_PI));
        trace.freq.push_back(wk);
        trace.phase.push_back(uphase(rng));
    }
}

inline NoiseTrace synthesize_trace(const PsdSpec& psd, std::mt19937_64& rng,
                                   std::size_t band_bins = 200, std::size_t tail_bins = 96) {
    NoiseTrace trace;
    switch (psd.kind) {
        case PsdKind::DeltaAtZero: {
            std::normal_distribution<double> normal(0.0, std::sqrt(psd.variance()));
            trace.offset = normal(rng);
            break;
        }
        case PsdKind::OneOverFBand:
            add_cosine_bins(trace, psd, psd.omega_min, psd.omega_max, band_bins, rng);
            break;
        case PsdKind::OneOverFWithTail:
            add_cosine_bins(trace, psd, psd.omega_min, psd.omega_max, band_bins, rng);
            // The tail carries variance A/pi in total; bins out to 1000 wc
            // capture all but 0.1% of it.
            add_cosine_bins(trace, psd, psd.omega_max, 1000.0 * psd.omega_max, tail_bins, rng);
            break;
    }
    return trace;
}

}  // namespace detail

struct MonteCarloResult {
    double mean = 0.0;
    double stderr_mean = 0.0;
    std::size_t traces = 0;
    // Fraction of traces violating the Magnus convergence criterion
    // int (sum_i xi_i^2)^{1/2} dt < pi.
    double magnus_violation_fraction = 0.0;
};

/// Average infidelity over noise realizations. `segment_ends` lists interior
/// time points where the control fields jump so integration steps never
/// straddle a discontinuity; pass {} for smooth fields.
inline MonteCarloResult monte_carlo_infidelity(const BlochCoefficients& control,
                                               const std::vector<double>& segment_ends,
                                               double total_time,
                                               const std::vector<NoiseChannel>& channels,
                                               std::size_t n_traces, std::uint64_t seed,
                                               std::size_t steps_per_unit_angle = 64,
                                               unsigned threads = 0) {
    if (n_traces == 0) throw std::invalid_argument("monte_carlo_infidelity: need traces");

    // Breakpoints: 0, interior jumps, T.
    std::vector<double> edges{0.0};
    for (double e : segment_ends) {
        if (e > edges.back() + 1e-15 && e < total_time - 1e-15) edges.push_back(e);
    }
    edges.push_back(total_time);

    // Ideal gate, computed once with the same integrator.
    Matrix2cd ideal = Matrix2cd::Identity();
    std::vector<std::size_t> steps(edges.size() - 1);
    for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
        const double len = edges[s + 1] - edges[s];
        steps[s] = std::max<std::size_t>(16, static_cast<std::size_t>(
                                                 std::ceil(len * steps_per_unit_angle)));
        ideal = propagate_interval(control, edges[s], edges[s + 1], steps[s], ideal);
    }

    std::vector<double> infid(n_traces, 0.0);
    std::vector<char> violated(n_traces, 0);

    parallel_for(
        n_traces,
        [&](std::size_t trace_idx) {
            std::mt19937_64 rng(detail::splitmix64(seed ^ detail::splitmix64(trace_idx + 1)));
            std::vector<detail::NoiseTrace> noise;
            noise.reserve(channels.size());
            for (const NoiseChannel& ch : channels) noise.push_back(detail::synthesize_trace(ch.psd, rng));

            const auto noisy = [&](double t, double& hx, double& hy, double& hz) {
                control(t, hx, hy, hz);
                for (std::size_t q = 0; q < channels.size(); ++q) {
                    const double d = noise[q](t);
                    switch (channels[q].sensitivity) {
                        case Sensitivity::AdditiveDetuning: hz += d; break;
                        case Sensitivity::MultiplicativeAmplitude:
                            hx += d * hx;
                            hy += d * hy;
                            break;
                        case Sensitivity::MultiplicativeDetuning: hz += d * hz; break;
                    }
                }
            };

            Matrix2cd u = Matrix2cd::Identity();
            for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
                u = propagate_interval(noisy, edges[s], edges[s + 1], steps[s], u);
            }
            const double fid = trace_fidelity(ideal, u);
            infid[trace_idx] = 1.0 - fid * fid;

            // Magnus criterion along the trace: xi_i(t) = sum_q delta_q chi_{q,i}.
            double arc = 0.0;
            double prev = -1.0;
            const std::size_t n_check = 257;
            for (std::size_t j = 0; j < n_check; ++j) {
                const double t = total_time * static_cast<double>(j) / (n_check - 1);
                double hx = 0.0, hy = 0.0, hz = 0.0;
                control(t, hx, hy, hz);
                double xx = 0.0, xy = 0.0, xz = 0.0;
                for (std::size_t q = 0; q < channels.size(); ++q) {
                    const double d = noise[q](t);
                    switch (channels[q].sensitivity) {
                        case Sensitivity::AdditiveDetuning: xz += 0.5 * d; break;
                        case Sensitivity::MultiplicativeAmplitude:
                            xx += 0.5 * d * hx;
                            xy += 0.5 * d * hy;
                            break;
                        case Sensitivity::MultiplicativeDetuning: xz += 0.5 * d * hz; break;
                    }
                }
                const double mag = std::sqrt(xx * xx + xy * xy + xz * xz);
                if (prev >= 0.0) arc += 0.5 * (prev + mag) * total_time / (n_check - 1);
                prev = mag;
            }
            violated[trace_idx] = arc < M_PI ? 0 : 1;
        },
        threads);

    MonteCarloResult out;
    out.traces = n_traces;
    double sum = 0.0, sumsq = 0.0, bad = 0.0;
    for (std::size_t i = 0; i < n_traces; ++i) {
        sum += infid[i];
        sumsq += infid[i] * infid[i];
        bad += violated[i];
    }
    out.mean = sum / static_cast<double>(n_traces);
    const double var = std::max(0.0, sumsq / static_cast<double>(n_traces) - out.mean * out.mean);
    out.stderr_mean = std::sqrt(var / static_cast<double>(n_traces));
    out.magnus_violation_fraction = bad / static_cast<double>(n_traces);
    return out;
}

}  // namespace pulseforge
