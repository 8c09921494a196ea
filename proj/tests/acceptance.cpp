// Acceptance suite: one criterion per entry, each printing a PASS/FAIL line.
// Run with no arguments for all criteria, or pass criterion numbers.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "mcf/mcf.hpp"
#include "support/oracles.hpp"

using namespace mcf;
using mcf::testing::closed_form_window;
using mcf::testing::random_rational_point;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& msg) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += msg;
        }
    }
};

double elapsed_s(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof buf, f, args);
    va_end(args);
    return buf;
}

// ---- criterion 1: normalizing constants ----
Outcome criterion_constants() {
    Outcome out;
    for (int n = 1; n <= 4; ++n) {
        auto t0 = std::chrono::steady_clock::now();
        double closed = normalizing_constant_closed_form(n);
        double series = normalizing_constant_series(n);
        McEstimate mc = normalizing_constant_quadrature(n, 10000000, 42);
        double dt = elapsed_s(t0);
        out.require(std::fabs(series - closed) < 1e-9,
                    fmt("n=%d series %.12f vs closed %.12f", n, series, closed));
        out.require(std::fabs(mc.value - closed) < 3.0 * mc.std_error,
                    fmt("n=%d MC %.7f +- %.2g vs %.7f", n, mc.value, mc.std_error, closed));
        out.require(dt < 30.0, fmt("n=%d took %.1fs", n, dt));
    }
    // the four closed forms themselves
    out.require(std::fabs(normalizing_constant_closed_form(1) - std::log(2.0)) < 1e-14, "C_1");
    const double pi = 3.14159265358979323846;
    out.require(std::fabs(normalizing_constant_closed_form(2) - pi * pi / 12.0) < 1e-12, "C_2");
    out.require(std::fabs(normalizing_constant_closed_form(3) - 0.9015426773696957) < 1e-9, "C_3");
    out.require(std::fabs(normalizing_constant_closed_form(4) - 7.0 * std::pow(pi, 4) / 720.0) <
                    1e-12,
                "C_4");
    return out;
}

// ---- criterion 2: transfer-operator fixed points ----
Outcome criterion_transfer_fixed_points() {
    Outcome out;
    auto t0 = std::chrono::steady_clock::now();
    SplitMix64 rng(42, 2);
    for (int n : {2, 3, 4}) {
        DensityKind kind{Flavor::Fast, n};
        auto f = [&](const SimplexPoint<double>& y) { return density(kind, y); };
        double worst = 0.0;
        for (int rep = 0; rep < 100; ++rep) {
            std::vector<double> x;
            do {
                x = sample_ordered_simplex(n, rng);
            } while (x[n - 1] < 0.01 || x[0] > 1 - 1e-3);
            SimplexPoint<double> p(x);
            double fx = density(kind, p);
            double res = std::fabs(transfer_apply_fast(f, p, 1e-10) - fx) / fx;
            worst = std::max(worst, res);
        }
        out.require(worst < 1e-8, fmt("fast n=%d worst residual %.3g", n, worst));
    }
    for (int n : {1, 2, 3, 4}) {
        DensityKind slow{Flavor::Slow, n};
        auto fs = [&](const SimplexPoint<Rational>& y) { return density(slow, y); };
        for (int rep = 0; rep < 100; ++rep) {
            auto x = random_rational_point(n, rng, 997);
            if (transfer_apply_slow(fs, x) != density(slow, x)) {
                out.require(false, fmt("slow n=%d not exactly fixed", n));
                break;
            }
        }
    }
    out.require(elapsed_s(t0) < 10.0, fmt("took %.1fs", elapsed_s(t0)));
    return out;
}

// ---- criterion 3: combinatorial identities ----
Outcome criterion_combinatorics() {
    Outcome out;
    auto t0 = std::chrono::steady_clock::now();
    SplitMix64 rng(42, 3);
    for (int n = 2; n <= 12; ++n)
        for (int rep = 0; rep < 200; ++rep) {
            Rational x(1 + static_cast<long>(rng.next_below(60)),
                       1 + static_cast<long>(rng.next_below(60)));
            Rational y(1 + static_cast<long>(rng.next_below(60)),
                       1 + static_cast<long>(rng.next_below(60)));
            x.canonicalize();
            y.canonicalize();
            auto [lhs, rhs] = partial_fraction_sides(n, x, y);
            if (lhs != rhs) {
                out.require(false, fmt("partial fraction n=%d", n));
                break;
            }
        }
    for (int n = 0; n <= 16; ++n)
        for (int k = 0; k <= n; ++k) {
            BigInt expect = binomial(n, k);
            if (k % 2 == 1) expect = -expect;
            if (tree_prefix_sum(n, k) != expect) {
                out.require(false, fmt("tree identity n=%d k=%d", n, k));
                break;
            }
        }
    out.require(tree_prefix_sum(4, 3) == -4, "worked sum -4");
    for (int n = 1; n <= 18; ++n)
        out.require(row_sum(n) == ((n % 2 == 1) ? 1 : -1), fmt("row sum n=%d", n));
    auto c5 = compositions_standard_order(5);
    out.require(c5[6].parts == std::vector<int>{2, 1, 2}, "seventh composition of 5");
    out.require(multinomial(c5[6].parts) == 30, "its multinomial");
    double dt = elapsed_s(t0);
    out.require(dt < 60.0, fmt("took %.1fs", dt));
    return out;
}

// ---- criterion 4: vertex recursion vs closed form ----
Outcome criterion_vertex_recursion() {
    Outcome out;
    SplitMix64 rng(42, 4);
    for (int n = 1; n <= 6; ++n) {
        for (int rep = 0; rep < 170; ++rep) {
            std::vector<long long> prefix(1 + rng.next_below(6));
            for (auto& d : prefix) d = static_cast<long long>(rng.next_below(10));
            Cell base = cell_from_sequence(n, prefix);
            std::vector<long long> window(n);
            for (auto& d : window) d = static_cast<long long>(rng.next_below(10));
            Cell stepped = base;
            for (long long b : window) stepped = extend_cell(stepped, b);
            if (stepped.cols != closed_form_window(base, window)) {
                out.require(false, fmt("closed form mismatch n=%d", n));
                break;
            }
            BigInt det = cell_determinant(stepped);
            if (det != 1 && det != -1) {
                out.require(false, fmt("non-unimodular cell n=%d", n));
                break;
            }
        }
    }
    return out;
}

// ---- criterion 5: diameter contraction across bounded windows ----
Outcome criterion_contraction() {
    Outcome out;
    const std::pair<int, long long> combos[] = {{2, 0}, {2, 3}, {3, 0}, {3, 2}, {4, 1}};
    for (auto [n, B] : combos) {
        SplitMix64 rng(42, 50 + n * 10 + static_cast<int>(B));
        const double factor = contraction_factor(n, B).get_d();
        long violations = 0;
        double worst = 0.0;
        for (int rep = 0; rep < 1000; ++rep) {
            Cell c = initial_cell(n);
            std::vector<double> diam;
            for (int block = 0; block < 6; ++block) {
                c = extend_cell(c, static_cast<long long>(rng.next_below(31)));
                for (int j = 0; j < n - 1; ++j)
                    c = extend_cell(c, static_cast<long long>(rng.next_below(B + 1)));
                diam.push_back(cell_diameter(c));
            }
            // window ends m = kn-1 need m > n, so compare from the second block
            for (std::size_t m = 1; m < diam.size(); ++m) {
                double ratio = diam[m] / diam[m - 1];
                worst = std::max(worst, ratio);
                if (!(diam[m] <= factor * diam[m - 1] * (1.0 + 1e-9))) ++violations;
            }
        }
        out.require(violations == 0,
                    fmt("n=%d B=%lld: %ld violations, worst ratio %.6f vs %.6f", n, B,
                        violations, worst, factor));
    }
    return out;
}

// sample a slice-uniform point of the cell and return its digit string after
// the known prefix; false when float drift loses the prefix
bool sample_next_digits(const Cell& c, const std::vector<std::vector<double>>& verts,
                        SplitMix64& rng, int extra, std::vector<long long>& digits_out) {
    const int n = c.n;
    auto w = sample_barycentric(n + 1, rng);
    std::vector<double> u(n + 1, 0.0);
    for (int k = 0; k <= n; ++k)
        for (int r = 0; r <= n; ++r) u[r] += w[k] * verts[k][r];
    std::vector<double> x(n);
    for (int j = 0; j < n; ++j) x[j] = u[j + 1] / u[0];
    for (long long expected : c.digits) {
        if (fast_step_inplace(x) != expected) return false;
    }
    digits_out.clear();
    for (int j = 0; j < extra; ++j) {
        long long b = fast_step_inplace(x);
        if (b < 0) return false;
        digits_out.push_back(b);
    }
    return true;
}

// ---- criterion 6: measure-ratio lower bound (MC at 99% confidence) ----
Outcome criterion_measure_ratio() {
    Outcome out;
    for (int n : {2, 3}) {
        const double bound = measure_ratio_lower_bound(n).get_d();
        SplitMix64 cells_rng(42, 60 + n);
        for (int cell_idx = 0; cell_idx < 10; ++cell_idx) {
            std::vector<long long> prefix(2 + cells_rng.next_below(3));
            for (auto& d : prefix) d = static_cast<long long>(cells_rng.next_below(5));
            Cell c = cell_from_sequence(n, prefix);
            auto verts = slice_vertices(c);
            SplitMix64 rng(42, 600 + n * 100 + cell_idx);
            const long N = 1000000;
            long hits = 0, valid = 0;
            std::vector<long long> next;
            for (long i = 0; i < N; ++i) {
                if (!sample_next_digits(c, verts, rng, n, next)) continue;
                ++valid;
                if (next[0] >= 1) {
                    bool zeros = true;
                    for (int j = 1; j < n && zeros; ++j) zeros = next[j] == 0;
                    if (zeros) ++hits;
                }
            }
            double p = static_cast<double>(hits) / static_cast<double>(valid);
            double se = std::sqrt(p * (1.0 - p) / static_cast<double>(valid));
            bool ok = p - 2.326 * se > bound;
            out.require(ok, fmt("n=%d cell %d: ratio %.4f (99%% lo %.4f) vs bound %.4f", n,
                                cell_idx, p, p - 2.326 * se, bound));
        }
    }
    return out;
}

// ---- criterion 7: zero-block prevalence ----
Outcome criterion_zero_blocks() {
    Outcome out;
    for (int n : {2, 3}) {
        SplitMix64 rng(42, 70 + n);
        const long points = 10000, budget = 10000;
        long with_block = 0, no_jump = 0;
        for (long rep = 0; rep < points; ++rep) {
            auto x = sample_ordered_simplex(n, rng);
            int run = 0;
            bool found = false;
            for (long k = 0; k < budget; ++k) {
                long long b = fast_step_inplace(x);
                if (b < 0) break;
                run = (b == 0) ? run + 1 : 0;
                if (run >= n - 1) {
                    found = true;
                    break;
                }
            }
            if (found)
                ++with_block;
            else
                ++no_jump;
        }
        double frac = static_cast<double>(with_block) / points;
        out.require(frac >= 0.999, fmt("n=%d block fraction %.5f", n, frac));
        out.require(static_cast<double>(no_jump) / points < 1e-3,
                    fmt("n=%d no-jump rate %.5f", n, static_cast<double>(no_jump) / points));
    }
    return out;
}

// ---- criterion 8: Birkhoff averages ----
Outcome criterion_birkhoff() {
    Outcome out;
    const long steps = 10000000;
    std::vector<Region> boxes = {
        BoxRegion{{0.5, 0.0}, {1.0, 0.5}},  BoxRegion{{0.0, 0.0}, {0.5, 0.5}},
        BoxRegion{{0.2, 0.1}, {0.7, 0.5}},  BoxRegion{{0.6, 0.3}, {1.0, 1.0}},
        BoxRegion{{0.1, 0.05}, {0.9, 0.6}},
    };
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        BirkhoffResult r = birkhoff_averages(2, boxes, steps, seed);
        for (std::size_t i = 0; i < boxes.size(); ++i) {
            double rel = std::fabs(r.time_averages[i] - r.space_averages[i]) /
                         r.space_averages[i];
            if (rel > 0.02)
                out.require(false, fmt("n=2 seed %llu box %zu: rel err %.4f",
                                       (unsigned long long)seed, i, rel));
        }
    }
    std::vector<Region> digit0 = {DigitRegion{0}};
    const double kuzmin = 0.4150374992788438; // log(4/3)/log 2
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        BirkhoffResult r = birkhoff_averages(1, digit0, steps, seed);
        double rel = std::fabs(r.time_averages[0] - kuzmin) / kuzmin;
        if (rel > 0.005)
            out.require(false,
                        fmt("n=1 seed %llu: freq %.6f vs %.6f", (unsigned long long)seed,
                            r.time_averages[0], kuzmin));
    }
    return out;
}

// ---- criterion 9: algebraic certification ----
Outcome criterion_certification() {
    Outcome out;
    auto c1 = certify_periodic(1, {0});
    out.require(c1.reciprocal_poly == std::vector<BigInt>{BigInt(-1), BigInt(1), BigInt(1)},
                "n=1 polynomial is not x^2+x-1");
    out.require(std::fabs(c1.dominant_root - 0.6180339887) < 1e-9,
                fmt("n=1 root %.10f", c1.dominant_root));
    out.require(c1.eigen_residual < 1e-10, fmt("n=1 residual %.3g", c1.eigen_residual));
    out.require(c1.replay_ok && c1.replay_periods == 5, "n=1 digit replay");

    auto c2 = certify_periodic(2, {0});
    out.require(c2.reciprocal_poly ==
                    std::vector<BigInt>{BigInt(-1), BigInt(1), BigInt(0), BigInt(1)},
                "n=2 polynomial is not x^3+x-1");
    out.require(std::fabs(c2.dominant_root - 0.6823278038) < 1e-9,
                fmt("n=2 root %.10f", c2.dominant_root));
    out.require(c2.eigen_residual < 1e-10, fmt("n=2 residual %.3g", c2.eigen_residual));
    out.require(c2.replay_ok && c2.replay_periods == 5, "n=2 digit replay");
    return out;
}

// ---- criterion 10: slow/fast coherence ----
Outcome criterion_slow_fast() {
    Outcome out;
    SplitMix64 rng(42, 10);
    for (int rep = 0; rep < 1000; ++rep) {
        BitSequence b;
        int len = static_cast<int>(rng.next_below(40));
        for (int i = 0; i < len; ++i) b.bits.push_back(static_cast<int>(rng.next_u64() & 1));
        b.bits.push_back(0);
        if (!(fast_to_slow(slow_to_fast(b)).bits == b.bits)) {
            out.require(false, "bit round trip");
            break;
        }
    }
    // every digit b <= 20: slow_step applied b+1 times equals fast_step, exactly
    for (long long b = 0; b <= 20; ++b) {
        for (int n : {1, 2, 3}) {
            SplitMix64 point_rng(42, 100 + 10 * b + n);
            auto target = random_rational_point(n, point_rng, 211);
            auto y = inverse_branch_fast(target, b);
            auto [fy, fb] = fast_step(y);
            if (fb != b) {
                out.require(false, fmt("preimage digit b=%lld n=%d", b, n));
                continue;
            }
            SimplexPoint<Rational> cur = y;
            bool ok = true;
            for (long long i = 0; i < b && ok; ++i) {
                auto [next, bit] = slow_step(cur);
                ok = bit == 1;
                cur = next;
            }
            if (ok) {
                auto [last, bit] = slow_step(cur);
                ok = bit == 0 && last.coords == fy.coords;
            }
            out.require(ok, fmt("factorization b=%lld n=%d", b, n));
        }
    }
    return out;
}

// ---- criterion 11: volume-weight vs Monte Carlo slice areas ----
Outcome criterion_volume_weights() {
    Outcome out;
    for (int n : {2, 3}) {
        SplitMix64 cells_rng(42, 110 + n);
        for (int cell_idx = 0; cell_idx < 10; ++cell_idx) {
            std::vector<long long> digits(2 + cells_rng.next_below(3));
            for (auto& d : digits) d = static_cast<long long>(cells_rng.next_below(3));
            // chain of nested prefixes; each stage ratio is a digit probability
            double est = 1.0;
            Cell parent = initial_cell(n);
            SplitMix64 rng(42, 1100 + n * 100 + cell_idx);
            for (std::size_t depth = 0; depth < digits.size(); ++depth) {
                auto verts = slice_vertices(parent);
                const long N = 400000;
                long hits = 0, valid = 0;
                std::vector<long long> next;
                for (long i = 0; i < N; ++i) {
                    if (!sample_next_digits(parent, verts, rng, 1, next)) continue;
                    ++valid;
                    if (next[0] == digits[depth]) ++hits;
                }
                est *= static_cast<double>(hits) / static_cast<double>(valid);
                parent = extend_cell(parent, digits[depth]);
            }
            Rational expect_ratio = volume_weight(parent) / volume_weight(initial_cell(n));
            double expected = expect_ratio.get_d();
            double rel = std::fabs(est / expected - 1.0);
            out.require(rel <= 0.03, fmt("n=%d cell %d: MC/W ratio off by %.4f", n, cell_idx, rel));
        }
    }
    return out;
}

struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
};

} // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria = {
        {1, "normalizing constants: series, MC quadrature, closed forms", criterion_constants},
        {2, "transfer-operator fixed points (fast 1e-8, slow exact)", criterion_transfer_fixed_points},
        {3, "combinatorial identities, exhaustive at desk scale", criterion_combinatorics},
        {4, "vertex recursion matches closed-form windows; unimodularity", criterion_vertex_recursion},
        {5, "diameter contraction across bounded digit windows", criterion_contraction},
        {6, "cell measure-ratio lower bound (MC, 99% confidence)", criterion_measure_ratio},
        {7, "zero-block prevalence within 10^4 digits", criterion_zero_blocks},
        {8, "Birkhoff time vs space averages", criterion_birkhoff},
        {9, "algebraic certification of periodic sequences", criterion_certification},
        {10, "slow/fast digit coherence and factorization", criterion_slow_fast},
        {11, "volume weights proportional to MC slice areas", criterion_volume_weights},
    };
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
    int failures = 0;
    for (const Criterion& c : criteria) {
        if (!selected.empty() &&
            std::find(selected.begin(), selected.end(), c.id) == selected.end())
            continue;
        auto t0 = std::chrono::steady_clock::now();
        Outcome o = c.run();
        double dt = elapsed_s(t0);
        std::printf("[%s] criterion %2d: %s (%.1fs)%s%s\n", o.pass ? "PASS" : "FAIL", c.id,
                    c.name, dt, o.detail.empty() ? "" : " -- ", o.detail.c_str());
        std::fflush(stdout);
        if (!o.pass) ++failures;
    }
    return failures;
}
