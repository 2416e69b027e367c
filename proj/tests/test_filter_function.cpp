// Frame matrix, error integrands, filter functions, and the space-curve
// identities that tie the zero-frequency values to curve closure.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include <pulseforge/filter_function.hpp>
#include <pulseforge/invariant_core.hpp>
#include <pulseforge/oracle.hpp>
#include <pulseforge/verify.hpp>

using namespace pulseforge;

TEST_CASE("frame matrix is a rotation") {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> angle(-M_PI, M_PI);
    for (int k = 0; k < 20; ++k) {
        Eigen::Matrix3d m = lambda_matrix(angle(rng), angle(rng), angle(rng));
        REQUIRE((m * m.transpose() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
        REQUIRE(m.determinant() == Catch::Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("frame matrix composes with the propagator's rotation") {
    // R(U(t))^T = L(0)^T L(t): the frame at time t differs from the adjoint
    // rotation of the reconstructed gate by the constant initial frame.
    InvariantTrajectory traj = random_smooth_trajectory(77);
    const Eigen::Matrix3d l0 = lambda_matrix(traj.gamma[0], traj.beta[0], traj.zeta[0]);
    for (int j : {0, 17, 300, 1023}) {
        const Eigen::Matrix3d lj = lambda_matrix(traj.gamma[j], traj.beta[j], traj.zeta[j]);
        const Eigen::Matrix3d r = adjoint_matrix(gate_at(traj, j));
        REQUIRE((r - lj.transpose() * l0).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("specialized integrands equal the frame-mapped products") {
    InvariantTrajectory traj = random_smooth_trajectory(4);
    ControlPulse pulse = reverse_engineer(traj);
    const Eigen::Index n = traj.size();

    Eigen::Matrix3Xd v = frame_mapped_samples(traj, chi_samples(pulse, Sensitivity::AdditiveDetuning));
    Eigen::Matrix3Xd v_det = detuning_integrand(traj);
    REQUIRE((v - v_det).cwiseAbs().maxCoeff() < 1e-12);

    v = frame_mapped_samples(traj, chi_samples(pulse, Sensitivity::MultiplicativeDetuning));
    Eigen::Matrix3Xd v_mdet = mult_detuning_integrand(traj);
    REQUIRE((v - v_mdet).cwiseAbs().maxCoeff() < 1e-12);

    // The amplitude integrand is oriented as r' x r''; it differs from the
    // frame-mapped product by a sign on the first component only.
    v = frame_mapped_samples(traj, chi_samples(pulse, Sensitivity::MultiplicativeAmplitude));
    Eigen::Matrix3Xd v_amp = amplitude_integrand(traj);
    REQUIRE((v.row(0) + v_amp.row(0)).cwiseAbs().maxCoeff() < 1e-10);
    REQUIRE((v.row(1) - v_amp.row(1)).cwiseAbs().maxCoeff() < 1e-10);
    REQUIRE((v.row(2) - v_amp.row(2)).cwiseAbs().maxCoeff() < 1e-10);

    // No filter function can see that sign.
    const std::vector<double> omegas{0.0, 0.3, 1.7};
    const QuadratureNodes nodes = trapezoid_nodes(traj.grid);
    const std::vector<double> fa = filter_function_values(nodes, v, omegas);
    const std::vector<double> fb = filter_function_values(nodes, v_amp, omegas);
    for (std::size_t i = 0; i < omegas.size(); ++i)
        REQUIRE(fa[i] == Catch::Approx(fb[i]).epsilon(1e-9));

    REQUIRE_THROWS_AS(frame_mapped_samples(traj, Eigen::Matrix3Xd::Zero(3, n - 1)),
                      std::invalid_argument);
}

TEST_CASE("detuning filter function of the plain quarter turn at zero frequency") {
    // Equatorial trajectory of a resonant square pulse: gamma = pi/2, beta = 0,
    // zeta = -t. The zero-frequency detuning filter function is 1/2.
    const double T = 0.5 * M_PI;
    TimeGrid grid(T, 2049);
    InvariantTrajectory traj = trajectory_from_functions(
        grid, [](double) { return 0.5 * M_PI; }, [](double) { return 0.0; },
        [](double t) { return -t; }, [](double) { return 0.0; }, [](double) { return 0.0; },
        [](double) { return -1.0; });
    const std::vector<double> f0 = ff_detuning(traj, {0.0});
    REQUIRE(f0[0] == Catch::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("curve closure identities recover the zero-frequency filter functions") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        InvariantTrajectory traj = random_smooth_trajectory(seed);
        CurveGeometry geo = curve_geometry(traj);
        const double f_det0 = ff_detuning(traj, {0.0})[0];
        const double f_amp0 = ff_amplitude(traj, {0.0})[0];
        REQUIRE(geo.closure.squaredNorm() == Catch::Approx(4.0 * f_det0).epsilon(1e-12));
        REQUIRE(geo.binormal.squaredNorm() == Catch::Approx(4.0 * f_amp0).epsilon(1e-12));
    }
}

TEST_CASE("default frequency grid") {
    const std::vector<double> w = default_omega_grid(2.0, 10);
    REQUIRE(w.size() == 10);
    REQUIRE(w.front() == Catch::Approx(2e-4).epsilon(1e-12));
    REQUIRE(w.back() == Catch::Approx(20.0).epsilon(1e-12));
    for (std::size_t i = 1; i < w.size(); ++i) REQUIRE(w[i] > w[i - 1]);
    REQUIRE_THROWS_AS(default_omega_grid(0.0), std::invalid_argument);
    REQUIRE_THROWS_AS(default_omega_grid(1.0, 1), std::invalid_argument);
}
