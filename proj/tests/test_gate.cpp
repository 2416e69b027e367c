// Gate algebra: rotation conventions, Euler decomposition, and virtual-Z
// frame composition.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include <pulseforge/gate.hpp>

using namespace pulseforge;

namespace {

Matrix2cd random_unitary(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> angle(-M_PI, M_PI);
    std::uniform_real_distribution<double> half(0.0, M_PI);
    return z_rotation(angle(rng)) * y_rotation(half(rng)) * z_rotation(angle(rng));
}

}  // namespace

TEST_CASE("Pauli algebra") {
    REQUIRE((pauli_x() * pauli_y() - complexd(0, 1) * pauli_z()).cwiseAbs().maxCoeff() < 1e-15);
    REQUIRE((pauli_x() * pauli_x() - Matrix2cd::Identity()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("rotation conventions") {
    // Half-angle generators: a full turn is -identity.
    REQUIRE((x_rotation(2.0 * M_PI) + Matrix2cd::Identity()).cwiseAbs().maxCoeff() < 1e-14);
    // Rotations about one axis compose additively.
    Matrix2cd lhs = z_rotation(0.4) * z_rotation(1.1);
    REQUIRE((lhs - z_rotation(1.5)).cwiseAbs().maxCoeff() < 1e-14);
    // Planar rotation reduces to the x and y generators at phases 0 and pi/2.
    REQUIRE((planar_rotation(0.7, 0.0) - x_rotation(0.7)).cwiseAbs().maxCoeff() < 1e-14);
    REQUIRE((planar_rotation(0.7, 0.5 * M_PI) - y_rotation(0.7)).cwiseAbs().maxCoeff() < 1e-14);
    // Opposite-phase rotations are inverses of each other.
    Matrix2cd p = planar_rotation(1.3, 2.1);
    Matrix2cd q = planar_rotation(-1.3, 2.1);
    REQUIRE((p * q - Matrix2cd::Identity()).cwiseAbs().maxCoeff() < 1e-14);
    REQUIRE(unitarity_defect(p) < 1e-15);
}

TEST_CASE("trace fidelity ignores global phase") {
    std::mt19937_64 rng(11);
    Matrix2cd u = random_unitary(rng);
    Matrix2cd v = std::exp(complexd(0, 0.9)) * u;
    REQUIRE(trace_fidelity(u, v) == Catch::Approx(1.0).margin(1e-14));
    REQUIRE(gate_distance(u, v) < 1e-14);
    REQUIRE(trace_fidelity(u, pauli_x() * u) < 1.0);
}

TEST_CASE("wrap angle lands in (-pi, pi]") {
    REQUIRE(wrap_angle(M_PI) == Catch::Approx(M_PI));
    REQUIRE(wrap_angle(-M_PI) == Catch::Approx(M_PI));
    REQUIRE(wrap_angle(3.0 * M_PI) == Catch::Approx(M_PI));
    REQUIRE(wrap_angle(0.25) == Catch::Approx(0.25));
    REQUIRE(wrap_angle(2.0 * M_PI + 0.25) == Catch::Approx(0.25));
    REQUIRE(wrap_angle(-5.5) == Catch::Approx(-5.5 + 2.0 * M_PI));
}

TEST_CASE("Euler decomposition round trips random unitaries") {
    std::mt19937_64 rng(23);
    for (int k = 0; k < 50; ++k) {
        Matrix2cd u = random_unitary(rng);
        ZxzDecomposition d = zxz_decompose(u);
        REQUIRE(d.theta >= 0.0);
        REQUIRE(d.theta <= M_PI + 1e-12);
        REQUIRE(trace_fidelity(d.reconstruct(), u) == Catch::Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("Euler decomposition of axis rotations") {
    ZxzDecomposition x = zxz_decompose(x_rotation(0.7));
    REQUIRE(x.theta == Catch::Approx(0.7).margin(1e-12));
    REQUIRE(std::abs(wrap_angle(x.psi1)) < 1e-9);
    REQUIRE(std::abs(wrap_angle(x.psi2)) < 1e-9);

    ZxzDecomposition z = zxz_decompose(z_rotation(1.2));
    REQUIRE(z.theta == Catch::Approx(0.0).margin(1e-9));
    REQUIRE(trace_fidelity(z.reconstruct(), z_rotation(1.2)) == Catch::Approx(1.0).margin(1e-12));

    REQUIRE_THROWS_AS(zxz_decompose(Matrix2cd::Identity() * 2.0), std::invalid_argument);
}

TEST_CASE("virtual-Z frames build arbitrary targets from a quarter turn") {
    std::mt19937_64 rng(31);
    // An ideal quarter turn dressed with stray Z frames on both sides.
    Matrix2cd gate = z_rotation(0.3) * x_rotation(0.5 * M_PI) * z_rotation(-0.8);
    for (int k = 0; k < 20; ++k) {
        Matrix2cd target = random_unitary(rng);
        VirtualZFrames f = compose_target(gate, target);
        REQUIRE(trace_fidelity(apply_virtual_z(gate, f), target) ==
                Catch::Approx(1.0).margin(1e-12));
    }
    // A gate whose Euler angle is off by more than the tolerance is rejected.
    Matrix2cd bad = x_rotation(0.5 * M_PI + 5e-3);
    REQUIRE_THROWS_AS(compose_target(bad, x_rotation(1.0)), std::invalid_argument);
    // Slightly imperfect gates compose with an error of the same order.
    Matrix2cd near = x_rotation(0.5 * M_PI + 2e-4);
    VirtualZFrames f = compose_target(near, y_rotation(0.9));
    REQUIRE(gate_distance(apply_virtual_z(near, f), y_rotation(0.9)) < 1e-6);
}
