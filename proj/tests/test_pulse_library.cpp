// Composite pulse sequences: exact gates, segment bookkeeping, noise
// integrands on Gauss panels, and the auxiliary-system trajectories.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <pulseforge/pulse_library.hpp>

using namespace pulseforge;

namespace {
const double kTheta = 0.5 * M_PI;
const double kK = std::asin(0.5 * std::sin(0.5 * kTheta));
}  // namespace

TEST_CASE("spec validation and naming") {
    REQUIRE_THROWS_AS(composite_spec(CompositeKind::Naive, 0.0), std::invalid_argument);
    REQUIRE_THROWS_AS(composite_spec(CompositeKind::Naive, 2.0 * M_PI), std::invalid_argument);
    REQUIRE_THROWS_AS(composite_spec(CompositeKind::Naive, 1.0, -1.0), std::invalid_argument);
    for (CompositeKind kind : {CompositeKind::Naive, CompositeKind::ShortCorpse,
                               CompositeKind::Corpse, CompositeKind::Bb1, CompositeKind::Sk1,
                               CompositeKind::CinBb, CompositeKind::CinSk}) {
        REQUIRE(parse_composite_kind(composite_kind_name(kind)) == kind);
    }
    REQUIRE_THROWS_AS(parse_composite_kind("corpsey"), std::invalid_argument);
}

TEST_CASE("every sequence realizes the target X rotation exactly") {
    for (double theta : {0.5 * M_PI, 1.0, 2.5}) {
        for (CompositeKind kind : {CompositeKind::Naive, CompositeKind::ShortCorpse,
                                   CompositeKind::Corpse, CompositeKind::Bb1, CompositeKind::Sk1,
                                   CompositeKind::CinBb, CompositeKind::CinSk}) {
            const CompositeSpec spec = composite_spec(kind, theta);
            REQUIRE(trace_fidelity(composite_gate(spec), x_rotation(theta)) ==
                    Catch::Approx(1.0).margin(1e-12));
        }
    }
}

TEST_CASE("sequence durations") {
    REQUIRE(composite_spec(CompositeKind::Naive, kTheta).duration() ==
            Catch::Approx(kTheta).epsilon(1e-14));
    REQUIRE(composite_spec(CompositeKind::ShortCorpse, kTheta).duration() ==
            Catch::Approx(2.0 * M_PI + kTheta - 4.0 * kK).epsilon(1e-14));
    const double corpse = 4.0 * M_PI + kTheta - 4.0 * kK;
    REQUIRE(composite_spec(CompositeKind::Corpse, kTheta).duration() ==
            Catch::Approx(corpse).epsilon(1e-14));
    REQUIRE(composite_spec(CompositeKind::Bb1, kTheta).duration() ==
            Catch::Approx(kTheta + 4.0 * M_PI).epsilon(1e-14));
    REQUIRE(composite_spec(CompositeKind::Sk1, kTheta).duration() ==
            Catch::Approx(kTheta + 4.0 * M_PI).epsilon(1e-14));
    REQUIRE(composite_spec(CompositeKind::CinBb, kTheta).duration() ==
            Catch::Approx(corpse + 4.0 * M_PI).epsilon(1e-14));
    REQUIRE(composite_spec(CompositeKind::CinSk, kTheta).duration() ==
            Catch::Approx(corpse + 4.0 * M_PI).epsilon(1e-14));
    // Doubling the amplitude halves every duration.
    REQUIRE(composite_spec(CompositeKind::Corpse, kTheta, 2.0).duration() ==
            Catch::Approx(0.5 * corpse).epsilon(1e-14));
}

TEST_CASE("segment lookup is right-continuous at joints") {
    const CompositeSpec spec = composite_spec(CompositeKind::Bb1, kTheta);
    const std::vector<double> bounds = spec.boundaries();
    REQUIRE(bounds.size() == spec.segments.size());
    REQUIRE(bounds.back() == Catch::Approx(spec.duration()).epsilon(1e-14));
    for (std::size_t s = 0; s + 1 < bounds.size(); ++s) {
        REQUIRE(spec.segment_at(bounds[s]) == s + 1);
        REQUIRE(spec.segment_at(bounds[s] - 1e-9) == s);
    }
    REQUIRE(spec.segment_at(0.0) == 0);
    REQUIRE(spec.segment_at(spec.duration() + 1.0) == spec.segments.size() - 1);
}

TEST_CASE("partial propagator is continuous and hits the endpoints") {
    const CompositeSpec spec = composite_spec(CompositeKind::CinBb, kTheta);
    REQUIRE((composite_unitary(spec, 0.0) - Matrix2cd::Identity()).cwiseAbs().maxCoeff() < 1e-14);
    REQUIRE((composite_unitary(spec, spec.duration()) - composite_gate(spec)).cwiseAbs().maxCoeff() <
            1e-12);
    for (double b : spec.boundaries()) {
        if (b >= spec.duration()) break;
        REQUIRE((composite_unitary(spec, b - 1e-12) - composite_unitary(spec, b))
                    .cwiseAbs()
                    .maxCoeff() < 1e-10);
    }
}

TEST_CASE("sampled pulse carries the segment fields") {
    const CompositeSpec spec = composite_spec(CompositeKind::ShortCorpse, kTheta, 0.5);
    ControlPulse pulse = sample_pulse(spec, 257);
    REQUIRE(pulse.grid.total_time() == Catch::Approx(spec.duration()).epsilon(1e-14));
    for (int j = 0; j < pulse.size(); ++j) {
        REQUIRE(pulse.omega[j] == 0.5);
        REQUIRE(pulse.delta[j] == 0.0);
        const std::size_t s = spec.segment_at(pulse.grid.time(j));
        REQUIRE(pulse.phi[j] == spec.segments[s].phase);
    }
}

TEST_CASE("Gauss nodes tile the sequence") {
    const CompositeSpec spec = composite_spec(CompositeKind::Corpse, kTheta);
    const QuadratureNodes nodes = composite_nodes(spec);
    double weight_sum = 0.0;
    for (int j = 0; j < nodes.size(); ++j) weight_sum += nodes.w[j];
    REQUIRE(weight_sum == Catch::Approx(spec.duration()).epsilon(1e-13));
    for (int j = 1; j < nodes.size(); ++j) REQUIRE(nodes.t[j] >= nodes.t[j - 1]);
}

TEST_CASE("zero-frequency filter function flags reproduce the robustness table") {
    const double tol_rel = 1e-8;  // flag threshold relative to T^2
    struct Row {
        CompositeKind kind;
        bool detuning_robust;
        bool amplitude_robust;
    };
    const Row rows[] = {{CompositeKind::Naive, false, false},
                        {CompositeKind::ShortCorpse, true, false},
                        {CompositeKind::Bb1, false, true},
                        {CompositeKind::CinBb, true, true},
                        {CompositeKind::CinSk, true, true}};
    for (const Row& row : rows) {
        const CompositeSpec spec = composite_spec(row.kind, kTheta);
        const double limit = tol_rel * spec.duration() * spec.duration();
        const double f_det = composite_ff(spec, Sensitivity::AdditiveDetuning, {0.0})[0];
        const double f_amp = composite_ff(spec, Sensitivity::MultiplicativeAmplitude, {0.0})[0];
        REQUIRE((f_det <= limit) == row.detuning_robust);
        REQUIRE((f_amp <= limit) == row.amplitude_robust);
    }
    // The robust flags are exact cancellations, not just small values.
    const CompositeSpec cinbb = composite_spec(CompositeKind::CinBb, kTheta);
    REQUIRE(composite_ff(cinbb, Sensitivity::AdditiveDetuning, {0.0})[0] < 1e-15);
    REQUIRE(composite_ff(cinbb, Sensitivity::MultiplicativeAmplitude, {0.0})[0] < 1e-15);
}

TEST_CASE("plain quarter turn has detuning filter function 1/2 at zero frequency") {
    const CompositeSpec naive = composite_spec(CompositeKind::Naive, kTheta);
    REQUIRE(composite_ff(naive, Sensitivity::AdditiveDetuning, {0.0})[0] ==
            Catch::Approx(0.5).margin(1e-12));
    // Resonant sequences carry no multiplicative-detuning sensitivity.
    REQUIRE(composite_ff(naive, Sensitivity::MultiplicativeDetuning, {0.0, 0.5})[0] == 0.0);
}

TEST_CASE("sequence infidelity report carries per-channel entries") {
    const CompositeSpec naive = composite_spec(CompositeKind::Naive, kTheta);
    const std::vector<NoiseChannel> channels{
        {"detuning", PsdSpec::one_over_f_band(1.0, 1e-9, 0.1), Sensitivity::AdditiveDetuning},
        {"amplitude", PsdSpec::one_over_f_band(1.0, 1e-9, 0.1),
         Sensitivity::MultiplicativeAmplitude}};
    const InfidelityReport report = composite_infidelity(naive, channels);
    REQUIRE(report.entries.size() == 2);
    REQUIRE(report.entries[0].channel == "detuning");
    REQUIRE(report.entries[1].channel == "amplitude");
    REQUIRE(report.total == Catch::Approx(report.entries[0].infidelity +
                                          report.entries[1].infidelity).epsilon(1e-14));
    REQUIRE(report.entries[0].infidelity > 0.0);
    // Smallness at unit strength: variance * (0.25 + 0.25) * T^2.
    const double var = 1.0 / M_PI * std::log(0.1 / 1e-9);
    const double expect = var * 0.5 * std::pow(naive.duration(), 2);
    REQUIRE(report.smallness == Catch::Approx(expect).epsilon(1e-12));
    REQUIRE_FALSE(report.first_order_valid);
}

TEST_CASE("auxiliary trajectory reproduces the exact sequence gate") {
    for (CompositeKind kind :
         {CompositeKind::Naive, CompositeKind::Corpse, CompositeKind::CinBb}) {
        const CompositeSpec spec = composite_spec(kind, kTheta);
        InvariantTrajectory traj = composite_to_invariants(spec, 2048, 0.5 * M_PI, 0.0);
        REQUIRE(gate_distance(gate_from_invariants(traj), composite_gate(spec)) < 1e-8);
    }
}

TEST_CASE("great-circle chart of the short sequence is symmetric") {
    const CompositeSpec spec = composite_spec(CompositeKind::ShortCorpse, kTheta);
    const std::size_t n = 2049;
    InvariantTrajectory traj = composite_to_invariants(spec, n, 0.5 * M_PI, -0.5 * M_PI);
    const double mid = traj.gamma[(n - 1) / 2];
    for (std::size_t i = 0; i < n; ++i) {
        REQUIRE(traj.gamma[i] + traj.gamma[n - 1 - i] == Catch::Approx(2.0 * mid).margin(1e-6));
        REQUIRE(traj.beta[i] == Catch::Approx(-0.5 * M_PI).margin(1e-6));
        REQUIRE(traj.zeta[i] == Catch::Approx(traj.zeta[0]).margin(1e-6));
    }
    REQUIRE(gate_distance(gate_from_invariants(traj), composite_gate(spec)) < 1e-7);
}

TEST_CASE("sampled-pulse trajectory matches the closed-form gate") {
    const CompositeSpec naive = composite_spec(CompositeKind::Naive, kTheta);
    ControlPulse pulse = sample_pulse(naive, 513);
    InvariantTrajectory traj = pulse_to_invariants(pulse, 0.5 * M_PI, 0.0);
    REQUIRE(gate_distance(gate_from_invariants(traj), composite_gate(naive)) < 1e-8);
}
