#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <utility>
#include <variant>
#include <vector>

#include "mcf/errors.hpp"
#include "mcf/maps.hpp"
#include "mcf/rng.hpp"
#include "mcf/scalar.hpp"
#include "mcf/simplex.hpp"

namespace mcf {

struct DensityKind {
    Flavor flavor = Flavor::Fast;
    int n = 1;
};

/// Fast invariant density 1/(x_1...x_{n-1}(1+x_n)); slow density 1/(x_1...x_n).
/// Both unnormalized.
template <class S>
S density(const DensityKind& kind, const SimplexPoint<S>& x) {
    for (const S& c : x.coords)
        if (!(c > S(0))) throw BoundaryPoint("density requires interior points");
    S denom(1);
    const int n = x.n();
    const int last_factor = (kind.flavor == Flavor::Fast) ? n - 1 : n;
    for (int i = 0; i < last_factor; ++i) denom *= x.coords[i];
    if (kind.flavor == Flavor::Fast) denom *= S(1) + x.coords[n - 1];
    return S(1) / denom;
}

namespace detail {

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double fa, double fm, double fb, double whole, double tol,
                               int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol, int depth = 40) {
    if (!(b > a)) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, depth);
}

} // namespace detail

/// Transfer operator of the fast map:
///   (Lf)(x) = sum_{k>=0} (1 + k w + x_n)^{-(n+1)} f(1/(1+kw+x_n), x_1/..., ...)
/// with w = x_{n-1} for n >= 2 and w = 1 (the homogeneous lead) for n = 1,
/// where the series is the classical Gauss operator.
///
/// Terms are summed directly up to an adaptive K; the remainder is evaluated
/// as a real integral (the branch formula extends to real k) plus
/// Euler-Maclaurin endpoint corrections. Truncating with a mere bound cannot
/// reach small tolerances: the remainder decays like 1/K for densities.
inline double transfer_apply_fast(const std::function<double(const SimplexPoint<double>&)>& f,
                                  const SimplexPoint<double>& x, double tol = 1e-10) {
    const int n = x.n();
    for (double c : x.coords)
        if (!(c > 0.0)) throw BoundaryPoint("transfer operator requires interior points");
    const double w = (n >= 2) ? x.coords[n - 2] : 1.0;
    if (!(w > 0.0)) throw NonConvergent("series has no decay when x_{n-1} = 0");
    const double xn = x.coords[n - 1];

    SimplexPoint<double> y;
    y.coords.resize(n);
    auto eval_at = [&](double t) -> double {
        const double d = 1.0 + t * w + xn;
        const double s = 1.0 / d;
        y.coords[0] = s;
        for (int i = 1; i < n; ++i) y.coords[i] = x.coords[i - 1] * s;
        double weight = 1.0;
        for (int i = 0; i <= n; ++i) weight *= s;
        return weight * f(y);
    };

    long k_cut = static_cast<long>(std::ceil(60.0 / w));
    if (k_cut < 64) k_cut = 64;
    if (k_cut > 2000000) k_cut = 2000000;

    double sum = 0.0, comp = 0.0; // Kahan
    for (long k = 0; k < k_cut; ++k) {
        double t = eval_at(static_cast<double>(k)) - comp;
        double next = sum + t;
        comp = (next - sum) - t;
        sum = next;
    }

    // Tail sum_{k >= K}: integral via s = 1/(1 + t w + xn) plus corrections.
    const double s_cut = 1.0 / (1.0 + static_cast<double>(k_cut) * w + xn);
    const double s_min = s_cut * 1e-9;
    auto h = [&](double s) -> double {
        if (s < s_min) s = s_min;
        y.coords[0] = s;
        for (int i = 1; i < n; ++i) y.coords[i] = x.coords[i - 1] * s;
        double v = f(y);
        for (int i = 0; i < n - 1; ++i) v *= s;
        return v;
    };
    const double integral =
        detail::integrate(h, 0.0, s_cut, 0.05 * tol * w) / w;
    const double g0 = eval_at(static_cast<double>(k_cut));
    const double gp = 0.5 * (eval_at(static_cast<double>(k_cut + 1)) -
                             eval_at(static_cast<double>(k_cut - 1)));
    return sum + integral + 0.5 * g0 - gp / 12.0;
}

/// Transfer operator of the slow map: exact two-branch evaluation, so it can
/// run in rational arithmetic.
template <class S, class F>
S transfer_apply_slow(F&& f, const SimplexPoint<S>& x) {
    const int n = x.n();
    for (const S& c : x.coords)
        if (!(c > S(0))) throw BoundaryPoint("transfer operator requires interior points");
    auto [y0, y1] = inverse_branches_slow(x);
    S d = S(1) + x.coords[n - 1];
    S weight(1);
    for (int i = 0; i <= n; ++i) weight *= d;
    return (f(y0) + f(y1)) / weight;
}

// ---- normalizing constant ----

/// (2^{n-1}-1)/2^{n-1} * zeta(n) for n >= 2; log 2 for n = 1.
inline double normalizing_constant_closed_form(int n) {
    if (n < 1) throw PreconditionViolated("dimension must be >= 1");
    if (n == 1) return std::log(2.0);
    return (1.0 - std::pow(2.0, 1.0 - n)) * std::riemann_zeta(static_cast<double>(n));
}

/// Alternating series 1 - 1/2^n + 1/3^n - ...; the error after stopping is
/// at most the first omitted term. n = 1 is defined directly as log 2 (the
/// alternating harmonic series is far too slow at desk tolerances).
inline double normalizing_constant_series(int n, double tol = 5e-10, long max_terms = 100000000) {
    if (n < 1) throw PreconditionViolated("dimension must be >= 1");
    if (n == 1) return std::log(2.0);
    long double sum = 0.0L;
    double sign = 1.0;
    for (long j = 1; j <= max_terms; ++j) {
        long double term = 1.0L;
        for (int e = 0; e < n; ++e) term *= static_cast<long double>(j);
        term = 1.0L / term;
        if (term < tol) break;
        sum += sign * term;
        sign = -sign;
    }
    return static_cast<double>(sum);
}

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
    long samples = 0;
};

/// Monte Carlo value of the constant. Substituting x_j = u_1 u_2 ... u_j maps
/// the nested integral of the density onto the unit cube with the bounded
/// integrand 1/(1 + u_1...u_n); u_1 is stratified. Strata are averaged with
/// equal weights whatever their sample counts, so an uneven split cannot tilt
/// the estimate toward the large-integrand strata.
inline McEstimate normalizing_constant_quadrature(int n, long samples, std::uint64_t seed) {
    if (n < 1) throw PreconditionViolated("dimension must be >= 1");
    SplitMix64 rng(seed, 0xC0);
    McEstimate out;
    out.samples = samples;
    const long strata = std::max<long>(1, std::min<long>(1024, samples / 32));
    std::vector<long double> sum(strata, 0.0L), sumsq(strata, 0.0L);
    std::vector<long> count(strata, 0);
    for (long i = 0; i < samples; ++i) {
        const long s = i % strata;
        double prod = (static_cast<double>(s) + rng.next_double()) / static_cast<double>(strata);
        for (int j = 1; j < n; ++j) prod *= rng.next_double();
        double v = 1.0 / (1.0 + prod);
        sum[s] += v;
        sumsq[s] += static_cast<long double>(v) * v;
        ++count[s];
    }
    long double mean = 0.0L, var = 0.0L;
    for (long s = 0; s < strata; ++s) {
        long double m = sum[s] / count[s];
        mean += m;
        if (count[s] > 1) {
            long double vs = (sumsq[s] / count[s] - m * m) *
                             static_cast<long double>(count[s]) / (count[s] - 1);
            if (vs < 0) vs = 0;
            var += vs / count[s];
        }
    }
    out.value = static_cast<double>(mean / strata);
    out.std_error =
        std::sqrt(static_cast<double>(var)) / static_cast<double>(strata);
    return out;
}

// ---- regions and ergodic averages (fast flavor) ----

struct BoxRegion {
    std::vector<double> lo, hi; // closed below, open above, intersected with the simplex
};

struct DigitRegion {
    long long b = 0; // the cylinder {x : digit(x) = b}
};

using Region = std::variant<BoxRegion, DigitRegion>;

inline bool region_contains(const Region& region, const std::vector<double>& x) {
    if (std::holds_alternative<BoxRegion>(region)) {
        const BoxRegion& box = std::get<BoxRegion>(region);
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i] < box.lo[i] || x[i] >= box.hi[i]) return false;
        return true;
    }
    const long long b = std::get<DigitRegion>(region).b;
    const double xn = x.back();
    if (!(xn > 0.0)) return false;
    double q = (1.0 - x.front()) / xn;
    if (!(q < detail::digit_cap)) return false;
    long long d = static_cast<long long>(std::floor(q));
    return (d < 0 ? 0 : d) == b;
}

/// Unnormalized fast invariant mass of a region: analytic/adaptive for
/// n <= 2, cube-substitution Monte Carlo for n >= 3.
inline McEstimate invariant_mass(int n, const Region& region, long mc_samples = 4000000,
                                 std::uint64_t seed = 42) {
    McEstimate out;
    auto seg = [](double a, double b) { // integral of 1/(1+x) over [a, b] ∩ [0, 1]
        a = std::max(a, 0.0);
        b = std::min(b, 1.0);
        if (!(b > a)) return 0.0;
        return std::log1p(b) - std::log1p(a);
    };
    if (n == 1) {
        if (std::holds_alternative<BoxRegion>(region)) {
            const BoxRegion& box = std::get<BoxRegion>(region);
            out.value = seg(box.lo[0], box.hi[0]);
        } else {
            const double b = static_cast<double>(std::get<DigitRegion>(region).b);
            out.value = seg(1.0 / (b + 2.0), 1.0 / (b + 1.0));
        }
        return out;
    }
    if (n == 2) {
        const double quad_tol = 1e-12;
        if (std::holds_alternative<BoxRegion>(region)) {
            const BoxRegion box = std::get<BoxRegion>(region);
            auto inner = [&](double x1) {
                double ub = std::min({box.hi[1], x1});
                double lb = std::max(box.lo[1], 0.0);
                if (!(ub > lb)) return 0.0;
                return (std::log1p(ub) - std::log1p(lb)) / x1;
            };
            double lo = std::max({box.lo[0], 0.0, 1e-307});
            double hi = std::min(box.hi[0], 1.0);
            if (!(hi > lo)) return out;
            std::vector<double> cuts = {lo, hi};
            for (double c : {box.lo[1], box.hi[1]})
                if (c > lo && c < hi) cuts.push_back(c);
            std::sort(cuts.begin(), cuts.end());
            double acc = 0.0;
            for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
                acc += detail::integrate(inner, cuts[i], cuts[i + 1], quad_tol);
            out.value = acc;
            return out;
        }
        const long long bb = std::get<DigitRegion>(region).b;
        const double b = static_cast<double>(bb);
        // digit-b slab: (1-x1)/(b+1) < x2 <= min(x1, (1-x1)/b), x1 >= 1/(b+2)
        auto inner = [&](double x1) {
            double lb = (1.0 - x1) / (b + 1.0);
            double ub = (bb == 0) ? x1 : std::min(x1, (1.0 - x1) / b);
            if (!(ub > lb)) return 0.0;
            return (std::log1p(ub) - std::log1p(lb)) / x1;
        };
        double acc = detail::integrate(inner, 1.0 / (b + 2.0),
                                       bb == 0 ? 1.0 : 1.0 / (b + 1.0), quad_tol);
        if (bb >= 1) acc += detail::integrate(inner, 1.0 / (b + 1.0), 1.0, quad_tol);
        out.value = acc;
        return out;
    }
    // n >= 3: E[ 1_region(x(u)) / (1 + x_n(u)) ] over the unit cube.
    SplitMix64 rng(seed, 0xA5);
    std::vector<double> x(n);
    long double sum = 0.0L, sumsq = 0.0L;
    for (long i = 0; i < mc_samples; ++i) {
        double prod = 1.0;
        for (int j = 0; j < n; ++j) {
            prod *= rng.next_double();
            x[j] = prod;
        }
        double v = region_contains(region, x) ? 1.0 / (1.0 + x[n - 1]) : 0.0;
        sum += v;
        sumsq += static_cast<long double>(v) * v;
    }
    out.samples = mc_samples;
    out.value = static_cast<double>(sum / mc_samples);
    long double var = sumsq / mc_samples - static_cast<long double>(out.value) * out.value;
    if (var < 0) var = 0;
    out.std_error = std::sqrt(static_cast<double>(var) / static_cast<double>(mc_samples));
    return out;
}

struct BirkhoffResult {
    std::vector<double> time_averages;
    std::vector<double> space_averages;
    long restarts = 0; // orbits resampled after hitting the x_n = 0 face
};

/// Time averages of region indicators along one fast orbit of length `steps`
/// against the invariant space averages. Restarting on the measure-zero
/// termination face keeps the harness alive.
inline BirkhoffResult birkhoff_averages(int n, const std::vector<Region>& regions, long steps,
                                        std::uint64_t seed,
                                        const std::vector<double>* start = nullptr) {
    BirkhoffResult out;
    SplitMix64 rng(seed, 0xB1);
    std::vector<double> x = start ? *start : sample_ordered_simplex(n, rng);
    std::vector<long> hits(regions.size(), 0);
    for (long k = 0; k < steps; ++k) {
        for (std::size_t r = 0; r < regions.size(); ++r)
            if (region_contains(regions[r], x)) ++hits[r];
        if (fast_step_inplace(x) < 0) {
            x = sample_ordered_simplex(n, rng);
            ++out.restarts;
        }
    }
    const double cn = normalizing_constant_closed_form(n);
    for (std::size_t r = 0; r < regions.size(); ++r) {
        out.time_averages.push_back(static_cast<double>(hits[r]) / static_cast<double>(steps));
        out.space_averages.push_back(invariant_mass(n, regions[r]).value / cn);
    }
    return out;
}

} // namespace mcf
