#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace mcf {

/// Counter-based generator (SplitMix64). A stream is fully determined by
/// (seed, stream_id), so parallel workers get reproducible disjoint streams.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed, std::uint64_t stream_id = 0)
        : state_(mix(seed ^ mix(stream_id * 0x9e3779b97f4a7c15ULL + 1))) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    /// Uniform on [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform on (0, 1]; safe as a log() argument.
    double next_open_double() { return 1.0 - next_double(); }

    std::uint64_t next_below(std::uint64_t bound) {
        return next_u64() % bound; // bias negligible for desk-scale bounds
    }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    std::uint64_t state_;
};

/// Uniform sample from {1 >= x_1 >= ... >= x_n >= 0} (sorted uniforms).
inline std::vector<double> sample_ordered_simplex(int n, SplitMix64& rng) {
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = rng.next_open_double();
    // insertion sort, descending; n is small
    for (int i = 1; i < n; ++i) {
        double v = x[i];
        int j = i - 1;
        while (j >= 0 && x[j] < v) { x[j + 1] = x[j]; --j; }
        x[j + 1] = v;
    }
    return x;
}

/// Uniform barycentric weights on the standard k-simplex (Dirichlet(1,..,1)).
inline std::vector<double> sample_barycentric(int k, SplitMix64& rng) {
    std::vector<double> w(k);
    double total = 0.0;
    for (int i = 0; i < k; ++i) {
        w[i] = -std::log(rng.next_open_double());
        total += w[i];
    }
    for (int i = 0; i < k; ++i) w[i] /= total;
    return w;
}

} // namespace mcf
