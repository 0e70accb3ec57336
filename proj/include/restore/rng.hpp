#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace restore {

/// Deterministic noise generator with a pinned seed-to-stream mapping.
///
/// The mapping is part of the toolkit's compatibility contract (golden
/// regression tests depend on it): a std::mt19937_64 engine seeded directly
/// with `seed` supplies 64-bit words, uniforms are derived from the top 53
/// bits, and the variate transforms below are fixed here rather than
/// delegated to std::*_distribution (whose algorithms are
/// implementation-defined). Draw order is always raster-scan order of the
/// consuming loop.
class NoiseRng {
public:
    explicit NoiseRng(uint64_t seed) : engine_(seed) {}

    /// Uniform on (0, 1].
    double uniform_pos() {
        return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    }

    /// Uniform on [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; two uniforms per pair, spare cached.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u = uniform_pos();
        const double v = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u));
        const double angle = 2.0 * M_PI * v;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

    /// Exponential with mean 1.
    double exponential() { return -std::log(uniform_pos()); }

    /// Rayleigh with scale parameter `scale` (mode), mean scale*sqrt(pi/2).
    double rayleigh(double scale) {
        return scale * std::sqrt(-2.0 * std::log(uniform_pos()));
    }

    /// Gamma(shape = looks, scale = 1/looks): mean 1, variance 1/looks.
    /// Integer shape only; drawn as a scaled sum of unit exponentials.
    double gamma_unit_mean(int looks) {
        double sum = 0.0;
        for (int i = 0; i < looks; ++i) sum += exponential();
        return sum / static_cast<double>(looks);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace restore
