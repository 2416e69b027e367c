#pragma once

// Uniform time grids plus the small stencil toolbox (finite differences,
// cumulative integrals, cubic resampling) shared by every module.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace pulseforge {

/// Uniformly spaced sampling grid over [0, T].
class TimeGrid {
public:
    TimeGrid(double total_time, int samples)
        : total_time_(total_time), samples_(samples) {
        if (!(total_time > 0.0) || !std::isfinite(total_time))
            throw std::invalid_argument("TimeGrid: total time must be positive and finite");
        if (samples < 2)
            throw std::invalid_argument("TimeGrid: need at least two samples");
    }

    double total_time() const { return total_time_; }
    int size() const { return samples_; }
    double dt() const { return total_time_ / (samples_ - 1); }
    double time(int i) const { return total_time_ * i / (samples_ - 1); }

    std::vector<double> times() const {
        std::vector<double> t(samples_);
        for (int i = 0; i < samples_; ++i) t[i] = time(i);
        return t;
    }

    bool operator==(const TimeGrid& other) const {
        return total_time_ == other.total_time_ && samples_ == other.samples_;
    }

private:
    double total_time_;
    int samples_;
};

/// Second-order finite-difference derivative: central in the interior,
/// one-sided three-point stencils at both endpoints.
inline std::vector<double> derivative_samples(const std::vector<double>& f, double dt) {
    const std::size_t n = f.size();
    if (n < 3) throw std::invalid_argument("derivative_samples: need at least three samples");
    std::vector<double> d(n);
    const double inv2 = 1.0 / (2.0 * dt);
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) * inv2;
    for (std::size_t k = 1; k + 1 < n; ++k) d[k] = (f[k + 1] - f[k - 1]) * inv2;
    d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) * inv2;
    return d;
}

/// Adjoint of derivative_samples: accumulates g^T * D into the returned
/// vector, so that dot(D f, g) == dot(f, derivative_adjoint(g)).
inline std::vector<double> derivative_adjoint(const std::vector<double>& g, double dt) {
    const std::size_t n = g.size();
    if (n < 3) throw std::invalid_argument("derivative_adjoint: need at least three samples");
    std::vector<double> a(n, 0.0);
    const double inv2 = 1.0 / (2.0 * dt);
    a[0] += -3.0 * g[0] * inv2;
    a[1] += 4.0 * g[0] * inv2;
    a[2] += -g[0] * inv2;
    for (std::size_t k = 1; k + 1 < n; ++k) {
        a[k + 1] += g[k] * inv2;
        a[k - 1] -= g[k] * inv2;
    }
    a[n - 1] += 3.0 * g[n - 1] * inv2;
    a[n - 2] += -4.0 * g[n - 1] * inv2;
    a[n - 3] += g[n - 1] * inv2;
    return a;
}

/// Running trapezoid integral with a caller-chosen starting value.
inline std::vector<double> cumulative_trapezoid(const std::vector<double>& f, double dt,
                                                double initial = 0.0) {
    std::vector<double> out(f.size());
    if (f.empty()) return out;
    out[0] = initial;
    for (std::size_t k = 1; k < f.size(); ++k)
        out[k] = out[k - 1] + 0.5 * dt * (f[k - 1] + f[k]);
    return out;
}

/// Plain trapezoid integral over the whole grid.
inline double trapezoid(const std::vector<double>& f, double dt) {
    if (f.size() < 2) return 0.0;
    double s = 0.5 * (f.front() + f.back());
    for (std::size_t k = 1; k + 1 < f.size(); ++k) s += f[k];
    return s * dt;
}

/// Cubic interpolation on uniformly sampled data (four-point Catmull-Rom in
/// the interior, quadratic fits in the first and last cells). Used when an
/// integrator needs field values between grid nodes.
class UniformInterpolant {
public:
    UniformInterpolant(const std::vector<double>& values, const TimeGrid& grid)
        : v_(values), dt_(grid.dt()), total_(grid.total_time()) {
        if (static_cast<int>(values.size()) != grid.size())
            throw std::invalid_argument("UniformInterpolant: value count does not match grid");
        if (values.size() < 4)
            throw std::invalid_argument("UniformInterpolant: need at least four samples");
    }

    double operator()(double t) const {
        if (t <= 0.0) return v_.front();
        if (t >= total_) return v_.back();
        const std::size_t n = v_.size();
        double x = t / dt_;
        std::size_t cell = static_cast<std::size_t>(x);
        if (cell >= n - 1) cell = n - 2;
        const double u = x - cell;
        if (cell == 0) {
            // quadratic through the first three samples
            return v_[0] + u * (-1.5 * v_[0] + 2.0 * v_[1] - 0.5 * v_[2]) +
                   u * u * (0.5 * v_[0] - v_[1] + 0.5 * v_[2]);
        }
        if (cell == n - 2) {
            const double w = 1.0 - u;  // mirror into the last three samples
            return v_[n - 1] + w * (-1.5 * v_[n - 1] + 2.0 * v_[n - 2] - 0.5 * v_[n - 3]) +
                   w * w * (0.5 * v_[n - 1] - v_[n - 2] + 0.5 * v_[n - 3]);
        }
        const double p0 = v_[cell - 1], p1 = v_[cell], p2 = v_[cell + 1], p3 = v_[cell + 2];
        return p1 + 0.5 * u * (p2 - p0 +
                     u * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 +
                          u * (3.0 * (p1 - p2) + p3 - p0)));
    }

private:
    std::vector<double> v_;
    double dt_;
    double total_;
};

}  // namespace pulseforge
