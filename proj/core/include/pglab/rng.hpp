#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>

namespace pglab {

/// splitmix64: counter-based generator (Steele et al.), bit-reproducible across
/// platforms. The generator name and seed are recorded in run metadata.
class SplitMix64 {
public:
    static constexpr const char* kName = "splitmix64";

    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in (0, 1]; never returns 0 (safe for logs and normalized rows).
    double next_positive() { return 1.0 - next_double(); }

    /// Standard normal via Box-Muller.
    double next_normal() {
        const double u1 = next_positive();
        const double u2 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    /// Sample an index from a probability vector (cumulative scan).
    int next_index(const Eigen::VectorXd& probs) {
        const double u = next_double();
        double acc = 0.0;
        const int n = static_cast<int>(probs.size());
        for (int i = 0; i < n; ++i) {
            acc += probs(i);
            if (u < acc) return i;
        }
        return n - 1;  // round-off guard
    }

private:
    std::uint64_t state_;
};

}  // namespace pglab
