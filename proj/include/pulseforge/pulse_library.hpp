#pragma once

// Reference pulses: the naive square pulse and the composite sequences used
// as robustness baselines. Each sequence is a list of (rotation angle, phase)
// segments executed at a fixed amplitude on resonance. Piecewise-constant
// controls admit closed-form propagators, so sequence evaluation never
// touches an ODE solver: unitaries come from products of planar rotations and
// noise integrands are sampled on Gauss panels that respect segment
// boundaries.

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "pulseforge/filter_function.hpp"
#include "pulseforge/gate.hpp"
#include "pulseforge/infidelity.hpp"
#include "pulseforge/invariant_core.hpp"
#include "pulseforge/noise.hpp"
#include "pulseforge/oracle.hpp"
#include "pulseforge/quadrature.hpp"
#include "pulseforge/trajectory.hpp"

namespace pulseforge {

struct PulseSegment {
    double angle = 0.0;  // rotation angle, radians; duration = angle / amplitude
    double phase = 0.0;  // drive phase, radians
};

struct CompositeSpec {
    std::vector<PulseSegment> segments;
    double amplitude = 1.0;

    double duration() const {
        double t = 0.0;
        for (const PulseSegment& s : segments) t += s.angle / amplitude;
        return t;
    }
    /// Cumulative segment end times (size = segment count).
    std::vector<double> boundaries() const {
        std::vector<double> b;
        double t = 0.0;
        for (const PulseSegment& s : segments) {
            t += s.angle / amplitude;
            b.push_back(t);
        }
        return b;
    }
    /// Index of the segment containing time t (right-continuous at joints).
    std::size_t segment_at(double t) const {
        double acc = 0.0;
        for (std::size_t s = 0; s < segments.size(); ++s) {
            acc += segments[s].angle / amplitude;
            if (t < acc || s + 1 == segments.size()) return s;
        }
        return segments.size() - 1;
    }
};

enum class CompositeKind { Naive, ShortCorpse, Corpse, Bb1, Sk1, CinBb, CinSk };

inline const char* composite_kind_name(CompositeKind k) {
    switch (k) {
        case CompositeKind::Naive: return "naive";
        case CompositeKind::ShortCorpse: return "short_corpse";
        case CompositeKind::Corpse: return "corpse";
        case CompositeKind::Bb1: return "bb1";
        case CompositeKind::Sk1: return "sk1";
        case CompositeKind::CinBb: return "cinbb";
        case CompositeKind::CinSk: return "cinsk";
    }
    return "unknown";
}

inline CompositeKind parse_composite_kind(const std::string& name) {
    if (name == "naive") return CompositeKind::Naive;
    if (name == "short_corpse") return CompositeKind::ShortCorpse;
    if (name == "corpse") return CompositeKind::Corpse;
    if (name == "bb1") return CompositeKind::Bb1;
    if (name == "sk1") return CompositeKind::Sk1;
    if (name == "cinbb") return CompositeKind::CinBb;
    if (name == "cinsk") return CompositeKind::CinSk;
    throw std::invalid_argument("unknown composite pulse kind: " + name);
}

/// Segment list for an X rotation by theta. Correction blocks precede the
/// base rotation in execution order; every sequence realizes X_theta exactly
/// (up to global phase) and differs only in its first-order noise response.
inline CompositeSpec composite_spec(CompositeKind kind, double theta, double amplitude = 1.0) {
    if (!(theta > 0.0 && theta < 2.0 * M_PI))
        throw std::invalid_argument("composite_spec: theta must lie in (0, 2*pi)");
    if (!(amplitude > 0.0)) throw std::invalid_argument("composite_spec: amplitude must be positive");

    const double k = std::asin(0.5 * std::sin(0.5 * theta));
    const double phi_w = std::acos(-theta / (4.0 * M_PI));

    CompositeSpec spec;
    spec.amplitude = amplitude;
    const auto corpse_segments = [&](bool with_winding) {
        const double wind = with_winding ? 2.0 * M_PI : 0.0;
        spec.segments.push_back({wind + 0.5 * theta - k, 0.0});
        spec.segments.push_back({2.0 * M_PI - 2.0 * k, M_PI});
        spec.segments.push_back({0.5 * theta - k, 0.0});
    };
    const auto bb1_corrections = [&] {
        spec.segments.push_back({M_PI, phi_w});
        spec.segments.push_back({2.0 * M_PI, 3.0 * phi_w});
        spec.segments.push_back({M_PI, phi_w});
    };
    const auto sk1_corrections = [&] {
        spec.segments.push_back({2.0 * M_PI, -phi_w});
        spec.segments.push_back({2.0 * M_PI, phi_w});
    };

    switch (kind) {
        case CompositeKind::Naive:
            spec.segments.push_back({theta, 0.0});
            break;
        case CompositeKind::ShortCorpse:
            corpse_segments(false);
            break;
        case CompositeKind::Corpse:
            corpse_segments(true);
            break;
        case CompositeKind::Bb1:
            bb1_corrections();
            spec.segments.push_back({theta, 0.0});
            break;
        case CompositeKind::Sk1:
            sk1_corrections();
            spec.segments.push_back({theta, 0.0});
            break;
        case CompositeKind::CinBb:
            bb1_corrections();
            corpse_segments(true);
            break;
        case CompositeKind::CinSk:
            sk1_corrections();
            corpse_segments(true);
            break;
    }
    return spec;
}

/// Exact total gate: the product of per-segment planar rotations.
inline Matrix2cd composite_gate(const CompositeSpec& spec) {
    Matrix2cd u = Matrix2cd::Identity();
    for (const PulseSegment& s : spec.segments) {
        u = planar_rotation(s.angle, s.phase) * u;
    }
    return u;
}

/// Exact propagator at an arbitrary time inside the sequence.
inline Matrix2cd composite_unitary(const CompositeSpec& spec, double t) {
    Matrix2cd u = Matrix2cd::Identity();
    double acc = 0.0;
    for (const PulseSegment& s : spec.segments) {
        const double seg_len = s.angle / spec.amplitude;
        if (t >= acc + seg_len) {
            u = planar_rotation(s.angle, s.phase) * u;
            acc += seg_len;
        } else {
            const double partial = std::max(0.0, t - acc);
            u = planar_rotation(partial * spec.amplitude, s.phase) * u;
            return u;
        }
    }
    return u;
}

/// Piecewise-constant sampling onto a uniform grid (right-continuous at
/// segment joints).
inline ControlPulse sample_pulse(const CompositeSpec& spec, std::size_t n) {
    ControlPulse pulse{TimeGrid(spec.duration(), static_cast<int>(n)),
                       std::vector<double>(n, spec.amplitude), std::vector<double>(n),
                       std::vector<double>(n, 0.0)};
    for (std::size_t j = 0; j < n; ++j) {
        const int i = static_cast<int>(j);
        pulse.phi[j] = spec.segments[spec.segment_at(pulse.grid.time(i))].phase;
    }
    return pulse;
}

/// Gauss panels subdividing every segment, so the integrand is smooth on each
/// panel despite phase jumps at joints.
inline QuadratureNodes composite_nodes(const CompositeSpec& spec, double max_panel = 0.2) {
    QuadratureNodes q;
    double t0 = 0.0;
    for (const PulseSegment& s : spec.segments) {
        const double t1 = t0 + s.angle / spec.amplitude;
        append_gl_panels(q, t0, t1, max_panel);
        t0 = t1;
    }
    return q;
}

/// Error integrand v(t) = R(t)^T chi(t) on the given nodes, with R from the
/// closed-form propagator.
inline Eigen::Matrix3Xd composite_integrand(const CompositeSpec& spec, const QuadratureNodes& nodes,
                                            Sensitivity sensitivity) {
    Eigen::Matrix3Xd v(3, static_cast<Eigen::Index>(nodes.size()));
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        const double t = nodes.t[j];
        const PulseSegment& s = spec.segments[spec.segment_at(t)];
        Eigen::Vector3d chi = Eigen::Vector3d::Zero();
        switch (sensitivity) {
            case Sensitivity::AdditiveDetuning:
                chi(2) = 0.5;
                break;
            case Sensitivity::MultiplicativeAmplitude:
                chi(0) = 0.5 * spec.amplitude * std::cos(s.phase);
                chi(1) = 0.5 * spec.amplitude * std::sin(s.phase);
                break;
            case Sensitivity::MultiplicativeDetuning:
                break;  // resonant sequences have delta = 0, so chi = 0
        }
        const Eigen::Matrix3d r = adjoint_matrix(composite_unitary(spec, t));
        v.col(static_cast<Eigen::Index>(j)) = r.transpose() * chi;
    }
    return v;
}

inline std::vector<double> composite_ff(const CompositeSpec& spec, Sensitivity sensitivity,
                                        const std::vector<double>& omegas,
                                        double max_panel = 0.2) {
    const QuadratureNodes nodes = composite_nodes(spec, max_panel);
    return filter_function_values(nodes, composite_integrand(spec, nodes, sensitivity), omegas);
}

/// Per-channel first-order infidelity of a sequence via the bilinear form on
/// its Gauss nodes.
inline InfidelityReport composite_infidelity(const CompositeSpec& spec,
                                             const std::vector<NoiseChannel>& channels,
                                             double max_panel = 0.2) {
    const QuadratureNodes nodes = composite_nodes(spec, max_panel);
    std::vector<Eigen::Matrix3Xd> integrands;
    integrands.reserve(channels.size());
    for (const NoiseChannel& ch : channels) {
        integrands.push_back(composite_integrand(spec, nodes, ch.sensitivity));
    }
    const double T = spec.duration();
    double xi2 = 0.0;
    for (const NoiseChannel& ch : channels) {
        xi2 += ch.psd.variance() * sensitivity_norm_sq(ch.sensitivity, spec.amplitude, 0.0) * T * T;
    }
    return infidelity_report(nodes, integrands, channels, xi2);
}

/// Control fields of a sequence in Bloch-coefficient form, plus the interior
/// jump times, for the Monte Carlo driver.
inline BlochCoefficients composite_bloch(const CompositeSpec& spec) {
    return [spec](double t, double& hx, double& hy, double& hz) {
        const PulseSegment& s = spec.segments[spec.segment_at(t)];
        hx = spec.amplitude * std::cos(s.phase);
        hy = spec.amplitude * std::sin(s.phase);
        hz = 0.0;
    };
}

/// Invariant-angle trajectory of a sampled pulse (thin forward-solve wrapper).
inline InvariantTrajectory pulse_to_invariants(const ControlPulse& pulse, double gamma0,
                                               double beta0, std::size_t substeps = 8) {
    return forward_solve(pulse, gamma0, beta0, substeps);
}

/// Invariant-angle trajectory of a sequence on a uniform grid, integrating
/// the auxiliary system piecewise so integration steps never straddle a
/// segment joint. Node derivatives use the right-continuous fields.
inline InvariantTrajectory composite_to_invariants(const CompositeSpec& spec, std::size_t n,
                                                   double gamma0, double beta0,
                                                   double steps_per_unit_time = 64.0) {
    const double total = spec.duration();
    const TimeGrid grid(total, n);
    const std::vector<double> bounds = spec.boundaries();

    const auto constant_fields = [&spec](double phase) {
        ControlFields f;
        const double om = spec.amplitude;
        f.omega = [om](double) { return om; };
        f.phi = [phase](double) { return phase; };
        f.delta = [](double) { return 0.0; };
        return f;
    };

    InvariantTrajectory traj{grid,
                             std::vector<double>(n), std::vector<double>(n), std::vector<double>(n),
                             std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};

    double g = gamma0, b = beta0, z = -beta0;
    const auto record = [&](std::size_t j) {
        traj.gamma[j] = g;
        traj.beta[j] = b;
        traj.zeta[j] = z;
        // Node derivatives use the right-continuous fields, matching
        // sample_pulse at segment joints.
        const double tj = grid.time(static_cast<int>(j));
        const double phase = spec.segments[spec.segment_at(tj)].phase;
        auxiliary_rhs(constant_fields(phase), tj, g, b, traj.gamma_dot[j],
                      traj.beta_dot[j], traj.zeta_dot[j]);
    };
    record(0);
    std::size_t next_bound = 0;
    for (std::size_t j = 0; j + 1 < n; ++j) {
        double t = grid.time(static_cast<int>(j));
        const double t_end = grid.time(static_cast<int>(j) + 1);
        while (t < t_end - 1e-14 * total) {
            double t_stop = t_end;
            while (next_bound < bounds.size() && bounds[next_bound] <= t + 1e-14 * total) ++next_bound;
            if (next_bound < bounds.size() && bounds[next_bound] < t_stop) t_stop = bounds[next_bound];
            const double len = t_stop - t;
            const std::size_t steps =
                std::max<std::size_t>(4, static_cast<std::size_t>(std::ceil(len * steps_per_unit_time)));
            const double phase = spec.segments[spec.segment_at(0.5 * (t + t_stop))].phase;
            advance_auxiliary(constant_fields(phase), t, t_stop, steps, g, b, z);
            t = t_stop;
        }
        record(j + 1);
    }
    return traj;
}

}  // namespace pulseforge
