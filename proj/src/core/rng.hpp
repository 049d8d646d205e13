#ifndef MINNORM_RNG_HPP
#define MINNORM_RNG_HPP

#include <cmath>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "core/common.hpp"

namespace minnorm {

/// Deterministic, addressable random stream.
///
/// A stream is identified by (master seed, tag) and sub-streams by an
/// additional index, so tensors, data rows and Monte-Carlo trials each get
/// their own independent sequence regardless of evaluation order. The
/// generator is SplitMix64 and all derived distributions are computed with
/// explicit formulas, so the byte-level output for a given address is part
/// of the reproducibility contract (it does not depend on the standard
/// library's distribution implementations).
class RngStream {
public:
    RngStream(std::uint64_t seed, std::string_view tag)
        : key_(mix64(seed ^ fnv1a64(tag))), state_(key_) {}

    /// Independent stream addressed by (seed, tag, index). Derivation uses
    /// the stream identity, not the current draw position.
    RngStream substream(std::uint64_t index) const {
        return RngStream(mix64(key_ ^ mix64(index)));
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Standard normal via Box-Muller. Consumes exactly two draws.
    double normal() {
        double u1 = 1.0 - uniform01(); // (0, 1], keeps log finite
        double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        // Rejection-free modulo is biased for huge n; all uses here have
        // n far below 2^32 where the bias is negligible for shuffling,
        // but we keep the unbiased form anyway.
        std::uint64_t x, r;
        do {
            x = next_u64();
            r = x % n;
        } while (x - r > std::uint64_t(0) - n);
        return r;
    }

    /// Fisher-Yates shuffle with this stream.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[below(i)]);
    }

private:
    explicit RngStream(std::uint64_t key) : key_(key), state_(key) {}

    std::uint64_t key_;
    std::uint64_t state_;
};

} // namespace minnorm

#endif
