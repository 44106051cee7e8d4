// Seedable, portable random number generation. The generator is the
// standard 64-bit Mersenne Twister (mt19937_64); all variate transforms
// below are written out explicitly so that a given seed produces the same
// stream on every platform. std::*_distribution is deliberately avoided
// because its output is implementation-defined.
//
// Uniforms take the top 53 bits of one 64-bit draw: (x >> 11) * 2^-53.
// Normals use the Box-Muller transform on two uniforms.
// Gamma(shape >= 1) uses the Marsaglia-Tsang squeeze method; shape < 1
// is boosted via Gamma(a) = Gamma(a+1) * U^(1/a).
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

#include "pelcov/special.hpp"

namespace pelcov {

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform draw on (0, 1); 0 is remapped to the smallest positive step.
    double uniform() {
        const std::uint64_t x = engine_();
        double u = static_cast<double>(x >> 11) * 0x1.0p-53;
        if (u <= 0.0) u = 0x1.0p-53;
        return u;
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * kPi * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    double gamma(double shape) {
        if (!(shape > 0.0)) throw std::domain_error("Rng::gamma: shape must be positive");
        if (shape < 1.0) {
            const double u = uniform();
            return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    double chi_square(double dof) { return 2.0 * gamma(0.5 * dof); }

    std::uint64_t raw() { return engine_(); }

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace pelcov
