#pragma once

// Sine and cosine integrals Si(x), Ci(x). Power series below the switchover
// point, complex continued fraction for the exponential integral above it.

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

namespace pulseforge {

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

namespace detail {

// Power series, reliable for 0 < x <= ~4:
//   Si(x) = sum (-1)^k x^(2k+1) / ((2k+1)(2k+1)!)
//   Ci(x) = euler_gamma + ln x + sum (-1)^k x^(2k) / ((2k)(2k)!)
inline void sici_series(double x, double& si, double& ci) {
    double sum_s = 0.0, sum_c = 0.0;
    double term = x;  // x^(2k+1)/(2k+1)! for k = 0
    const double x2 = x * x;
    for (int k = 0; k < 64; ++k) {
        const int n = 2 * k + 1;
        const double s_contrib = term / n;
        sum_s += (k % 2 == 0) ? s_contrib : -s_contrib;
        const double term_even = term * x / (n + 1);  // x^(2k+2)/(2k+2)!
        const double c_contrib = term_even / (n + 1);
        sum_c += (k % 2 == 0) ? -c_contrib : c_contrib;
        term = term_even * x / (n + 2);
        if (std::abs(term) < 1e-18 * (std::abs(sum_s) + 1.0)) break;
    }
    si = sum_s;
    ci = kEulerGamma + std::log(x) + sum_c;
}

// Modified Lentz continued fraction for E1(i x), x >= ~2. Then
//   Ci(x) = -Re E1(ix),  Si(x) = pi/2 + Im E1(ix).
inline void sici_continued_fraction(double x, double& si, double& ci) {
    using cd = std::complex<double>;
    const cd z(0.0, x);
    const double fpmin = std::numeric_limits<double>::min() / 1e-30;
    cd b = z + 1.0;
    cd c = 1.0 / fpmin;
    cd d = 1.0 / b;
    cd h = d;
    for (int i = 1; i <= 200; ++i) {
        const double a = -static_cast<double>(i) * i;
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        const cd del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    const cd e1 = h * std::exp(-z);
    ci = -e1.real();
    si = 1.5707963267948966 + e1.imag();
}

inline constexpr double kSiCiSwitch = 4.0;

}  // namespace detail

/// Sine integral Si(x) = integral of sin(t)/t over [0, x]. Odd in x.
inline double sine_integral(double x) {
    const double ax = std::abs(x);
    double si = 0.0, ci = 0.0;
    if (ax == 0.0) return 0.0;
    if (ax <= detail::kSiCiSwitch)
        detail::sici_series(ax, si, ci);
    else
        detail::sici_continued_fraction(ax, si, ci);
    return x < 0.0 ? -si : si;
}

/// Cosine integral Ci(x) for x > 0.
inline double cosine_integral(double x) {
    if (!(x > 0.0)) throw std::domain_error("cosine_integral: requires x > 0");
    double si = 0.0, ci = 0.0;
    if (x <= detail::kSiCiSwitch)
        detail::sici_series(x, si, ci);
    else
        detail::sici_continued_fraction(x, si, ci);
    return ci;
}

}  // namespace pulseforge
