#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

namespace qrec {

/// SplitMix64 (Steele, Lea & Flood). The state is a plain counter
/// advanced by the golden-ratio increment and the output a bijective
/// finalizer of it, so a seed fully determines the stream on every
/// platform. Distributions are built on top of it by hand (53-bit
/// uniform doubles, Box-Muller normals, rejection-sampled bounded
/// integers) instead of <random> so that streams stay reproducible
/// across standard libraries.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform in (0, 1]; never zero, so log() is safe.
    double next_unit() {
        return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; the sine mate of each pair is cached.
    double next_normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        const double radius = std::sqrt(-2.0 * std::log(next_unit()));
        const double angle = 2.0 * 3.14159265358979323846 * next_unit();
        cached_ = radius * std::sin(angle);
        have_cached_ = true;
        return radius * std::cos(angle);
    }

    /// Uniform in [0, n); unbiased (rejects the wrap-around band).
    std::uint64_t next_below(std::uint64_t n) {
        const std::uint64_t limit = (0 - n) % n;  // 2^64 mod n
        std::uint64_t draw = next();
        while (draw < limit) draw = next();
        return draw % n;
    }

    /// In-place Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            std::swap(values[i - 1], values[next_below(i)]);
        }
    }

    /// k distinct indices drawn uniformly from [0, n), returned ascending.
    std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k) {
        std::vector<std::size_t> indices(n);
        std::iota(indices.begin(), indices.end(), std::size_t{0});
        for (std::size_t i = 0; i < k; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(next_below(n - i));
            std::swap(indices[i], indices[j]);
        }
        indices.resize(k);
        std::sort(indices.begin(), indices.end());
        return indices;
    }

private:
    std::uint64_t state_;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

}  // namespace qrec
