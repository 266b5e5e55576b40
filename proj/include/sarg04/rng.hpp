#pragma once

#include <cstdint>
#include <random>

namespace sarg04 {

/// SplitMix64 output function (Steele, Lea, Vigna).
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed-to-stream mapping for reproducible batch partitioning: stream i of
/// master seed s is seeded with the i-th output of SplitMix64 started at s.
/// The mapping is part of the output contract; changing it changes every
/// fixed-seed simulation result.
inline std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t stream_index) {
    return splitmix64(master_seed + stream_index * 0x9E3779B97F4A7C15ULL);
}

/// One independent random stream. The draw primitives below are pinned
/// explicitly (no std::*_distribution) so sequences are identical across
/// standard-library implementations.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : gen_(seed) {}

    /// Uniform in [0, 1): 53 high bits of one engine output.
    double uniform01() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Uniform integer in [0, n) via one draw; n is small (2 or 4 here).
    int uniform_index(int n) {
        int k = static_cast<int>(uniform01() * n);
        return k < n ? k : n - 1;
    }

    /// Knuth product-method Poisson sample; exact for any mu with
    /// e^(-mu) representable, intended for the weak-pulse regime mu <~ 30.
    int poisson(double exp_neg_mu) {
        int k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= uniform01();
        } while (p > exp_neg_mu);
        return k - 1;
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace sarg04
