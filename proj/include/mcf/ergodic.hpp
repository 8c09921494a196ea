#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "mcf/cells.hpp"
#include "mcf/errors.hpp"
#include "mcf/maps.hpp"
#include "mcf/rng.hpp"
#include "mcf/scalar.hpp"
#include "mcf/simplex.hpp"

namespace mcf {

template <class S>
struct JumpOutcomeT {
    long long block_end = 0;       // smallest m with digits b_{m-(n-2)}..b_m all zero
    SimplexPoint<S> landing;       // T^{m+1}(x): the block is fully consumed
};

/// Accelerates the fast map to the first completed block of n-1 zero digits.
/// Replaying digits from the landing point continues the original tail.
template <class S>
JumpOutcomeT<S> jump_step(const SimplexPoint<S>& x, long max_scan = 10000) {
    const int n = x.n();
    if (n < 2) throw PreconditionViolated("jump transformation needs n >= 2");
    SimplexPoint<S> cur = x;
    int run = 0;
    for (long m = 0; m < max_scan; ++m) {
        auto [next, b] = fast_step(cur);
        run = (b == 0) ? run + 1 : 0;
        cur = std::move(next);
        if (run >= n - 1) {
            JumpOutcomeT<S> out;
            out.block_end = m;
            out.landing = std::move(cur);
            return out;
        }
        if (!orbit_alive(cur)) break;
    }
    throw NoJumpFound("no zero block within the scan budget");
}

struct BirkhoffEntry {
    std::string region;
    double time_average = 0.0;
    double space_average = 0.0;
    double abs_error = 0.0;
};

/// Aggregated orbit statistics of a survey run. Frequencies are over all
/// digits emitted before termination; `measure_ratio_bound` carries the
/// closed-form cell-ratio lower bound for the same n.
struct ErgodicReport {
    int n = 0;
    Flavor flavor = Flavor::Fast;
    long samples = 0;
    long orbit_length = 0;
    std::uint64_t seed = 0;
    int workers = 1;
    long long bound = 0;       // digit bound B defining a qualifying window
    int block_length = 0;      // defaults to n-1
    std::map<long long, std::uint64_t> digit_counts;
    std::uint64_t total_digits = 0;
    long block_hits = 0;       // orbits containing >= 1 qualifying block
    double zero_block_hit_fraction = 0.0;
    std::uint64_t window_count = 0;      // disjoint n-digit windows scanned
    std::uint64_t window_qualifying = 0; // first digit >= 1, last n-1 all <= B
    double window_rate = 0.0;
    double measure_ratio_bound = 0.0;    // 1/((n-1)n...(2n-2)n^{n-1}), n >= 2
    std::map<long long, std::uint64_t> jump_length_counts;
    long no_jump_count = 0;
    long terminated_orbits = 0;
    std::vector<BirkhoffEntry> birkhoff_estimates;

    std::map<long long, double> digit_histogram() const {
        std::map<long long, double> h;
        if (total_digits == 0) return h;
        for (const auto& [d, c] : digit_counts)
            h[d] = static_cast<double>(c) / static_cast<double>(total_digits);
        return h;
    }
};

struct SurveyParams {
    int n = 2;
    long samples = 1000;
    long orbit_length = 1000;
    long long bound = 0;     // B
    int block_length = 0;    // 0 means n-1
    std::uint64_t seed = 42;
    int workers = 4;
    long jump_scan = 10000;
};

namespace detail {

struct SurveyPartial {
    std::map<long long, std::uint64_t> digit_counts;
    std::uint64_t total_digits = 0;
    long block_hits = 0;
    std::uint64_t window_count = 0;
    std::uint64_t window_qualifying = 0;
    std::map<long long, std::uint64_t> jump_length_counts;
    long no_jump_count = 0;
    long terminated_orbits = 0;
};

inline void survey_worker(const SurveyParams& p, int worker_id, long lo, long hi,
                          SurveyPartial& out) {
    const int n = p.n;
    const int block = p.block_length > 0 ? p.block_length : n - 1;
    SplitMix64 rng(p.seed, static_cast<std::uint64_t>(worker_id) + 1);
    std::vector<double> x;
    for (long s = lo; s < hi; ++s) {
        x = sample_ordered_simplex(n, rng);
        int run = 0;
        bool hit = false;
        long long first_block_end = -1;
        int window_pos = 0;
        long long window_first = 0;
        bool window_tail_ok = true;
        for (long k = 0; k < p.orbit_length; ++k) {
            long long b = fast_step_inplace(x);
            if (b < 0) {
                ++out.terminated_orbits;
                break;
            }
            ++out.digit_counts[b];
            ++out.total_digits;
            run = (b <= p.bound) ? run + 1 : 0;
            if (run >= block && !hit) {
                hit = true;
                first_block_end = k;
            }
            // disjoint n-digit windows, aligned to the orbit start
            if (window_pos == 0) {
                window_first = b;
                window_tail_ok = true;
            } else if (b > p.bound) {
                window_tail_ok = false;
            }
            if (++window_pos == n) {
                ++out.window_count;
                if (window_first >= 1 && window_tail_ok) ++out.window_qualifying;
                window_pos = 0;
            }
        }
        if (hit) {
            ++out.block_hits;
            if (p.bound == 0 && block == n - 1 && first_block_end >= 0)
                ++out.jump_length_counts[first_block_end];
        } else if (p.bound == 0 && block == n - 1) {
            ++out.no_jump_count;
        }
    }
}

} // namespace detail

/// Runs `samples` independent fast orbits and merges per-worker statistics in
/// worker order, so output is deterministic for a fixed (seed, workers).
inline ErgodicReport zero_block_survey(const SurveyParams& p) {
    if (p.n < 1) throw PreconditionViolated("dimension must be >= 1");
    const int workers = p.workers > 0 ? p.workers : 1;
    std::vector<detail::SurveyPartial> partials(workers);
    std::vector<std::thread> pool;
    const long chunk = (p.samples + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const long lo = w * chunk;
        const long hi = std::min<long>(p.samples, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back(detail::survey_worker, std::cref(p), w, lo, hi,
                          std::ref(partials[w]));
    }
    for (auto& t : pool) t.join();

    ErgodicReport r;
    r.n = p.n;
    r.samples = p.samples;
    r.orbit_length = p.orbit_length;
    r.seed = p.seed;
    r.workers = workers;
    r.bound = p.bound;
    r.block_length = p.block_length > 0 ? p.block_length : p.n - 1;
    if (p.n >= 2) r.measure_ratio_bound = measure_ratio_lower_bound(p.n).get_d();
    for (const auto& part : partials) {
        for (const auto& [d, c] : part.digit_counts) r.digit_counts[d] += c;
        r.total_digits += part.total_digits;
        r.block_hits += part.block_hits;
        r.window_count += part.window_count;
        r.window_qualifying += part.window_qualifying;
        for (const auto& [d, c] : part.jump_length_counts) r.jump_length_counts[d] += c;
        r.no_jump_count += part.no_jump_count;
        r.terminated_orbits += part.terminated_orbits;
    }
    r.zero_block_hit_fraction =
        p.samples > 0 ? static_cast<double>(r.block_hits) / static_cast<double>(p.samples) : 0.0;
    r.window_rate = r.window_count > 0 ? static_cast<double>(r.window_qualifying) /
                                             static_cast<double>(r.window_count)
                                       : 0.0;
    return r;
}

} // namespace mcf
