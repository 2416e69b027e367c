// Noise spectra: closed-form variance and autocorrelation kernels against
// direct numerical quadrature of the defining integrals.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <pulseforge/noise.hpp>
#include <pulseforge/oracle.hpp>

using namespace pulseforge;

TEST_CASE("spectral density shapes") {
    PsdSpec band = PsdSpec::one_over_f_band(0.7, 1e-9, 0.1);
    REQUIRE(band.value(1e-3) == Catch::Approx(700.0).epsilon(1e-14));
    REQUIRE(band.value(-1e-3) == Catch::Approx(700.0).epsilon(1e-14));  // even
    REQUIRE(band.value(0.2) == 0.0);
    REQUIRE(band.value(1e-10) == 0.0);

    PsdSpec tail = PsdSpec::one_over_f_with_tail(0.7, 1e-9, 0.1);
    REQUIRE(tail.value(1e-3) == Catch::Approx(700.0).epsilon(1e-14));
    REQUIRE(tail.value(0.2) == Catch::Approx(0.7 * 0.1 / 0.04).epsilon(1e-14));

    PsdSpec delta = PsdSpec::delta(2.0);
    REQUIRE(delta.value(0.5) == 0.0);
    REQUIRE(delta.variance() == Catch::Approx(2.0 / M_PI).epsilon(1e-14));

    PsdSpec scaled = band.scaled(3.0);
    REQUIRE(scaled.value(1e-3) == Catch::Approx(2100.0).epsilon(1e-14));
}

TEST_CASE("construction validation") {
    REQUIRE_THROWS_AS(PsdSpec::delta(-1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(PsdSpec::one_over_f_band(1.0, 0.0, 0.1), std::invalid_argument);
    REQUIRE_THROWS_AS(PsdSpec::one_over_f_band(1.0, 0.1, 0.1), std::invalid_argument);
    REQUIRE_THROWS_AS(PsdSpec::one_over_f_band(-1.0, 1e-9, 0.1), std::invalid_argument);
    REQUIRE_THROWS_AS(PsdSpec::one_over_f_with_tail(1.0, 0.2, 0.1), std::invalid_argument);
}

TEST_CASE("variance closed forms") {
    const double a = 0.7, w0 = 1e-9, wc = 0.1;
    PsdSpec band = PsdSpec::one_over_f_band(a, w0, wc);
    REQUIRE(band.variance() == Catch::Approx(a / M_PI * std::log(wc / w0)).epsilon(1e-14));
    PsdSpec tail = PsdSpec::one_over_f_with_tail(a, w0, wc);
    REQUIRE(tail.variance() == Catch::Approx(band.variance() + a / M_PI).epsilon(1e-14));
}

TEST_CASE("kernel at zero lag equals the variance") {
    for (const PsdSpec& psd : {PsdSpec::delta(2.0), PsdSpec::one_over_f_band(0.7, 1e-9, 0.1),
                               PsdSpec::one_over_f_with_tail(0.7, 1e-9, 0.1)}) {
        REQUIRE(psd.kernel(0.0) == Catch::Approx(psd.variance()).epsilon(1e-14));
    }
}

TEST_CASE("kernels agree with direct quadrature") {
    const PsdSpec band = PsdSpec::one_over_f_band(0.7, 1e-9, 0.1);
    const PsdSpec tail = PsdSpec::one_over_f_with_tail(0.7, 1e-9, 0.1);
    const double T = 16.0 * M_PI;
    for (double factor : {0.01, 0.1, 1.0, 10.0}) {
        const double tau = factor * T;
        const double gb = band.kernel(tau);
        REQUIRE(gb == Catch::Approx(kernel_by_quadrature(band, tau)).epsilon(1e-6));
        const double gt = tail.kernel(tau);
        REQUIRE(gt == Catch::Approx(kernel_by_quadrature(tail, tau)).epsilon(1e-6));
        // Kernels are even in the lag.
        REQUIRE(band.kernel(-tau) == Catch::Approx(gb).epsilon(1e-14));
        REQUIRE(tail.kernel(-tau) == Catch::Approx(gt).epsilon(1e-14));
    }
    const PsdSpec delta = PsdSpec::delta(2.0);
    REQUIRE(delta.kernel(3.7) == Catch::Approx(kernel_by_quadrature(delta, 3.7)).epsilon(1e-14));
}

TEST_CASE("sensitivity norms") {
    REQUIRE(sensitivity_norm_sq(Sensitivity::AdditiveDetuning, 2.0, 0.5) == Catch::Approx(0.25));
    REQUIRE(sensitivity_norm_sq(Sensitivity::MultiplicativeAmplitude, 2.0, 0.5) ==
            Catch::Approx(1.0));
    REQUIRE(sensitivity_norm_sq(Sensitivity::MultiplicativeDetuning, 2.0, 0.5) ==
            Catch::Approx(0.0625));
}
