#pragma once

// Noise model descriptions: power spectral densities over non-negative
// frequency, their time-domain autocorrelation kernels in closed form, and
// the coupling rules that map a control pulse to the three-vector
// sensitivity of each channel.

#include <cmath>
#include <stdexcept>
#include <string>

#include "pulseforge/special_functions.hpp"

namespace pulseforge {

enum class PsdKind {
    DeltaAtZero,      // S(w) = weight * delta(w): static noise
    OneOverFBand,     // S(w) = A/|w| for omega_min <= |w| <= omega_max, else 0
    OneOverFWithTail  // band as above, A*omega_max/w^2 beyond the upper edge
};

/// Power spectral density from a small closed family, defined for
/// omega >= 0 and extended evenly to negative frequencies.
struct PsdSpec {
    PsdKind kind = PsdKind::DeltaAtZero;
    double amplitude = 0.0;  // delta weight, or the 1/f strength A
    double omega_min = 0.0;
    double omega_max = 0.0;

    static PsdSpec delta(double weight) {
        if (!(weight >= 0.0) || !std::isfinite(weight))
            throw std::invalid_argument("PsdSpec: delta weight must be finite and non-negative");
        return PsdSpec{PsdKind::DeltaAtZero, weight, 0.0, 0.0};
    }
    static PsdSpec one_over_f_band(double strength, double w0, double wc) {
        check_band(strength, w0, wc);
        return PsdSpec{PsdKind::OneOverFBand, strength, w0, wc};
    }
    static PsdSpec one_over_f_with_tail(double strength, double w0, double wc) {
        check_band(strength, w0, wc);
        return PsdSpec{PsdKind::OneOverFWithTail, strength, w0, wc};
    }

    PsdSpec scaled(double factor) const {
        PsdSpec s = *this;
        s.amplitude *= factor;
        return s;
    }

    /// Spectral density at a nonzero frequency (the delta kind carries its
    /// point mass in `amplitude` instead).
    double value(double omega) const {
        const double w = std::abs(omega);
        switch (kind) {
            case PsdKind::DeltaAtZero:
                return 0.0;
            case PsdKind::OneOverFBand:
                return (w >= omega_min && w <= omega_max) ? amplitude / w : 0.0;
            case PsdKind::OneOverFWithTail:
                if (w < omega_min) return 0.0;
                if (w <= omega_max) return amplitude / w;
                return amplitude * omega_max / (w * w);
        }
        return 0.0;
    }

    /// Process variance (1/pi) * integral of S over omega >= 0; a point
    /// mass at zero frequency is counted with its full weight.
    double variance() const {
        switch (kind) {
            case PsdKind::DeltaAtZero:
                return amplitude / M_PI;
            case PsdKind::OneOverFBand:
                return amplitude / M_PI * std::log(omega_max / omega_min);
            case PsdKind::OneOverFWithTail:
                return amplitude / M_PI * (std::log(omega_max / omega_min) + 1.0);
        }
        return 0.0;
    }

    /// Autocorrelation kernel g(tau) = (1/pi) * integral_0^inf of
    /// S(w) cos(w tau) dw, expressed through sine/cosine integrals.
    double kernel(double tau) const {
        const double at = std::abs(tau);
        switch (kind) {
            case PsdKind::DeltaAtZero:
                return amplitude / M_PI;
            case PsdKind::OneOverFBand: {
                if (at == 0.0) return variance();
                return amplitude / M_PI *
                       (cosine_integral(omega_max * at) - cosine_integral(omega_min * at));
            }
            case PsdKind::OneOverFWithTail: {
                if (at == 0.0) return variance();
                const double band = cosine_integral(omega_max * at) - cosine_integral(omega_min * at);
                const double x = omega_max * at;
                const double tail = std::cos(x) - x * (0.5 * M_PI - sine_integral(x));
                return amplitude / M_PI * (band + tail);
            }
        }
        return 0.0;
    }

private:
    static void check_band(double strength, double w0, double wc) {
        if (!(strength >= 0.0) || !std::isfinite(strength))
            throw std::invalid_argument("PsdSpec: strength must be finite and non-negative");
        if (!(0.0 < w0 && w0 < wc) || !std::isfinite(wc))
            throw std::invalid_argument("PsdSpec: band edges must satisfy 0 < omega_min < omega_max");
    }
};

/// How a noise process enters the Hamiltonian.
enum class Sensitivity {
    AdditiveDetuning,         // chi = (0, 0, 1/2)
    MultiplicativeAmplitude,  // chi = (omega cos phi, omega sin phi, 0) / 2
    MultiplicativeDetuning    // chi = (0, 0, delta/2)
};

struct NoiseChannel {
    std::string id;
    PsdSpec psd;
    Sensitivity sensitivity = Sensitivity::AdditiveDetuning;
};

/// Squared norm of the channel's sensitivity vector given the control fields
/// at one instant. Used by the first-order smallness diagnostic.
inline double sensitivity_norm_sq(Sensitivity s, double omega, double delta) {
    switch (s) {
        case Sensitivity::AdditiveDetuning: return 0.25;
        case Sensitivity::MultiplicativeAmplitude: return 0.25 * omega * omega;
        case Sensitivity::MultiplicativeDetuning: return 0.25 * delta * delta;
    }
    return 0.0;
}

}  // namespace pulseforge
