// Benchmark table for the reference sequences: first-order infidelity of a
// pi/2 X rotation in both noise settings at calibrated strength, plus the
// zero-frequency robustness of each channel. Reproduces the numbers the
// acceptance checks pin down, in human-readable form.

#include <cmath>
#include <cstdio>
#include <vector>

#include "pulseforge/pulseforge.hpp"

using namespace pulseforge;

int main() {
    const double theta = 0.5 * M_PI;
    const std::vector<CompositeKind> kinds{CompositeKind::Naive, CompositeKind::ShortCorpse,
                                           CompositeKind::Bb1, CompositeKind::CinBb,
                                           CompositeKind::CinSk};

    const std::vector<NoiseChannel> channels_a =
        case_channels(ExperimentCase::A, calibrated_amplitude(ExperimentCase::A));
    const std::vector<NoiseChannel> channels_b =
        case_channels(ExperimentCase::B, calibrated_amplitude(ExperimentCase::B));

    std::printf("pi/2 X rotation, noise strengths calibrated to I(naive) = 1e-1\n\n");
    std::printf("%-13s %9s %11s %11s %8s %8s\n", "sequence", "duration", "I(A)", "I(B)",
                "det(0)", "amp(0)");
    for (const CompositeKind kind : kinds) {
        const CompositeSpec spec = composite_spec(kind, theta);
        const double T = spec.duration();
        const double eps = 1e-8 * T * T;
        const bool det0 = composite_ff(spec, Sensitivity::AdditiveDetuning, {0.0})[0] <= eps;
        const bool amp0 = composite_ff(spec, Sensitivity::MultiplicativeAmplitude, {0.0})[0] <= eps;
        const double ia = composite_infidelity(spec, channels_a).total;
        const double ib = composite_infidelity(spec, channels_b).total;
        std::printf("%-13s %9.4f %11.3e %11.3e %8s %8s\n", composite_kind_name(kind), T, ia, ib,
                    det0 ? "robust" : "-", amp0 ? "robust" : "-");
    }

    std::printf("\ndet(0)/amp(0): zero-frequency filter function at or below 1e-8 T^2.\n");
    return 0;
}
