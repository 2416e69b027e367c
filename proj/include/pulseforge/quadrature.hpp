#pragma once

// Weighted quadrature node sets and the adaptive integrators used by the
// cross-check oracles. Node sets unify two sampling styles: trapezoid rules
// on uniform grids and Gauss-Legendre panels laid out segment by segment
// (the latter keep piecewise-defined pulses exact to machine order).

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "pulseforge/grid.hpp"

namespace pulseforge {

/// Arbitrary weighted nodes for integrals over [0, T]. Times are
/// non-decreasing; duplicates are allowed at interior breakpoints so a
/// discontinuous integrand can carry one-sided values.
struct QuadratureNodes {
    std::vector<double> t;
    std::vector<double> w;

    int size() const { return static_cast<int>(t.size()); }
};

inline QuadratureNodes trapezoid_nodes(const TimeGrid& grid) {
    QuadratureNodes q;
    q.t = grid.times();
    q.w.assign(grid.size(), grid.dt());
    q.w.front() *= 0.5;
    q.w.back() *= 0.5;
    return q;
}

namespace detail {
// 8-point Gauss-Legendre abscissae/weights on [-1, 1].
inline constexpr double kGl8X[8] = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
     0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
inline constexpr double kGl8W[8] = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
}  // namespace detail

/// Gauss-Legendre panels covering [t0, t1], appended to an existing node set.
inline void append_gl_panels(QuadratureNodes& q, double t0, double t1, double max_panel) {
    if (!(t1 > t0)) throw std::invalid_argument("append_gl_panels: empty interval");
    const int panels = std::max(1, static_cast<int>(std::ceil((t1 - t0) / max_panel)));
    const double h = (t1 - t0) / panels;
    for (int p = 0; p < panels; ++p) {
        const double a = t0 + p * h;
        const double mid = a + 0.5 * h;
        for (int j = 0; j < 8; ++j) {
            q.t.push_back(mid + 0.5 * h * detail::kGl8X[j]);
            q.w.push_back(0.5 * h * detail::kGl8W[j]);
        }
    }
}

inline QuadratureNodes gl_nodes(double t0, double t1, double max_panel) {
    QuadratureNodes q;
    append_gl_panels(q, t0, t1, max_panel);
    return q;
}

namespace detail {
inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b,
                                   double fa, double fm, double fb, double whole, double tol,
                                   int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

/// Adaptive Simpson integration with an absolute tolerance.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-12, int max_depth = 48) {
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

}  // namespace pulseforge
