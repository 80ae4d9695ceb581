#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace geonas {

/// Deterministic random source. Wraps std::mt19937_64 (whose output sequence
/// is fixed by the standard) and implements its own distributions so that
/// streams are bit-identical across compilers and platforms.
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t next_u64() { return eng_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [a, b).
    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    /// Unbiased uniform integer in [0, n); n must be positive.
    uint64_t below(uint64_t n) {
        const uint64_t limit =
            std::numeric_limits<uint64_t>::max() - std::numeric_limits<uint64_t>::max() % n;
        uint64_t x;
        do {
            x = eng_();
        } while (x >= limit);
        return x % n;
    }

    /// Standard normal via Box-Muller; the second variate of each pair is
    /// cached, so draws remain a deterministic function of the seed.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        if (u1 <= 0.0) u1 = 0x1.0p-53;  // keep log() finite
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * 3.141592653589793238462643383279502884 * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    /// Fisher-Yates shuffle driven by below(), independent of std::shuffle's
    /// unspecified implementation.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            const size_t j = static_cast<size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace geonas
