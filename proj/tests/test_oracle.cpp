// Ground-truth cross-checks: direct propagation against closed-form
// propagators, the adjoint representation, direct filter functions, the
// frequency-domain infidelity quadrature, and Monte Carlo averaging.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include <pulseforge/oracle.hpp>
#include <pulseforge/pulse_library.hpp>
#include <pulseforge/verify.hpp>

using namespace pulseforge;

TEST_CASE("propagation reproduces closed-form segment unitaries") {
    const double omega = 1.0, phase = 0.3, T = 2.0;
    const BlochCoefficients resonant = [=](double, double& hx, double& hy, double& hz) {
        hx = omega * std::cos(phase);
        hy = omega * std::sin(phase);
        hz = 0.0;
    };
    PropagationResult prop = tdse_propagate(resonant, TimeGrid(T, 65), 8);
    REQUIRE((prop.unitaries.back() - planar_rotation(omega * T, phase)).cwiseAbs().maxCoeff() <
            1e-9);

    const BlochCoefficients detuned = [](double, double& hx, double& hy, double& hz) {
        hx = 0.0;
        hy = 0.0;
        hz = 0.7;
    };
    prop = tdse_propagate(detuned, TimeGrid(T, 65), 4);
    REQUIRE((prop.unitaries.back() - z_rotation(0.7 * T)).cwiseAbs().maxCoeff() < 1e-10);
    for (const Matrix2cd& u : prop.unitaries) REQUIRE(unitarity_defect(u) < 1e-10);
}

TEST_CASE("step-halving check rejects under-resolved propagation") {
    const BlochCoefficients fast = [](double t, double& hx, double& hy, double& hz) {
        hx = 3.0 * std::cos(8.0 * t);
        hy = 3.0 * std::sin(8.0 * t);
        hz = 0.0;
    };
    REQUIRE_THROWS_AS(tdse_propagate(fast, TimeGrid(4.0, 5), 1), std::runtime_error);
}

TEST_CASE("adjoint representation is a rotation homomorphism") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> angle(-M_PI, M_PI);
    for (int k = 0; k < 20; ++k) {
        Matrix2cd a = z_rotation(angle(rng)) * y_rotation(angle(rng)) * z_rotation(angle(rng));
        Matrix2cd b = z_rotation(angle(rng)) * y_rotation(angle(rng)) * z_rotation(angle(rng));
        Eigen::Matrix3d ra = adjoint_matrix(a), rb = adjoint_matrix(b);
        REQUIRE((adjoint_matrix(a * b) - ra * rb).cwiseAbs().maxCoeff() < 1e-12);
        REQUIRE((ra * ra.transpose() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
        REQUIRE(ra.determinant() == Catch::Approx(1.0).margin(1e-12));
    }
    // Basis check: a z rotation by +pi/2 carries a state's x axis to y
    // (column action), while the Heisenberg row gives U^dag sx U = -sy.
    Eigen::Matrix3d rz = adjoint_matrix(z_rotation(0.5 * M_PI));
    Eigen::Vector3d ex(1.0, 0.0, 0.0), ey(0.0, 1.0, 0.0);
    REQUIRE((rz * ex - ey).cwiseAbs().maxCoeff() < 1e-12);
    REQUIRE((rz.transpose() * ex + ey).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("direct filter function agrees with the analytic route") {
    InvariantTrajectory traj = random_smooth_trajectory(8);
    ControlPulse pulse = reverse_engineer(traj);
    PropagationResult prop = tdse_propagate(pulse, 8);
    const QuadratureNodes nodes = trapezoid_nodes(pulse.grid);
    const double floor = 1e-12 * std::pow(traj.grid.total_time(), 2);
    const std::vector<double> omegas{1e-3, 0.1, 0.7, 2.0, 10.0};
    for (Sensitivity s : {Sensitivity::AdditiveDetuning, Sensitivity::MultiplicativeAmplitude,
                          Sensitivity::MultiplicativeDetuning}) {
        const std::vector<double> direct = ff_direct(nodes, prop.adjoints, chi_samples(pulse, s), omegas);
        const std::vector<double> analytic =
            filter_function_values(nodes, channel_integrand(traj, s), omegas);
        for (std::size_t i = 0; i < omegas.size(); ++i) {
            const double denom = std::max({std::abs(direct[i]), std::abs(analytic[i]), floor});
            REQUIRE(std::abs(direct[i] - analytic[i]) / denom < 1e-6);
        }
    }
}

TEST_CASE("frequency-domain quadrature matches the bilinear infidelity") {
    const CompositeSpec naive = composite_spec(CompositeKind::Naive, 0.5 * M_PI);
    const QuadratureNodes nodes = composite_nodes(naive);

    const PsdSpec band = PsdSpec::one_over_f_band(1.0, 1e-9, 0.1);
    const PsdSpec tail = PsdSpec::one_over_f_with_tail(1.0, 1e-9, 0.1);
    const PsdSpec stat = PsdSpec::delta(10.0);

    const Eigen::Matrix3Xd v_det = composite_integrand(naive, nodes, Sensitivity::AdditiveDetuning);
    const Eigen::Matrix3Xd v_amp =
        composite_integrand(naive, nodes, Sensitivity::MultiplicativeAmplitude);

    REQUIRE(infidelity_by_quadrature(nodes, v_det, band) ==
            Catch::Approx(bilinear_infidelity(nodes, v_det, band)).epsilon(1e-4));
    REQUIRE(infidelity_by_quadrature(nodes, v_amp, band) ==
            Catch::Approx(bilinear_infidelity(nodes, v_amp, band)).epsilon(1e-4));
    REQUIRE(infidelity_by_quadrature(nodes, v_amp, tail) ==
            Catch::Approx(bilinear_infidelity(nodes, v_amp, tail)).epsilon(1e-4));
    // The static spike is exact on both routes.
    REQUIRE(infidelity_by_quadrature(nodes, v_det, stat) ==
            Catch::Approx(bilinear_infidelity(nodes, v_det, stat)).epsilon(1e-12));
}

TEST_CASE("Monte Carlo averaging is deterministic in the seed") {
    const CompositeSpec naive = composite_spec(CompositeKind::Naive, 0.5 * M_PI);
    const std::vector<NoiseChannel> channels{
        {"detuning", PsdSpec::delta(0.01), Sensitivity::AdditiveDetuning}};
    MonteCarloResult a = monte_carlo_infidelity(composite_bloch(naive), naive.boundaries(),
                                                naive.duration(), channels, 50, 99);
    MonteCarloResult b = monte_carlo_infidelity(composite_bloch(naive), naive.boundaries(),
                                                naive.duration(), channels, 50, 99);
    REQUIRE(a.mean == b.mean);
    REQUIRE(a.stderr_mean == b.stderr_mean);
    MonteCarloResult c = monte_carlo_infidelity(composite_bloch(naive), naive.boundaries(),
                                                naive.duration(), channels, 50, 100);
    REQUIRE(a.mean != c.mean);
}

TEST_CASE("Monte Carlo mean matches first-order theory for weak static noise") {
    const CompositeSpec naive = composite_spec(CompositeKind::Naive, 0.5 * M_PI);
    const double weight = 0.01;
    const std::vector<NoiseChannel> channels{
        {"detuning", PsdSpec::delta(weight), Sensitivity::AdditiveDetuning}};
    const InfidelityReport report = composite_infidelity(naive, channels);
    MonteCarloResult mc = monte_carlo_infidelity(composite_bloch(naive), naive.boundaries(),
                                                 naive.duration(), channels, 400, 7);
    REQUIRE(std::abs(mc.mean - report.total) < 4.0 * mc.stderr_mean + 1e-6);
    REQUIRE(mc.magnus_violation_fraction == 0.0);
    REQUIRE(mc.traces == 400);
}
