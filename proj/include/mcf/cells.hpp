#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "mcf/errors.hpp"
#include "mcf/linalg.hpp"
#include "mcf/maps.hpp"
#include "mcf/scalar.hpp"
#include "mcf/simplex.hpp"

namespace mcf {

/// Cylinder cell of the homogeneous triangle map: the (n+1) vertex columns
/// A_0, ..., A_n of the cone over the cell with the given digit prefix.
/// The column matrix is unimodular (a product of branch inverses).
struct Cell {
    int n = 0;
    std::vector<long long> digits;
    std::vector<std::vector<BigInt>> cols; // cols[i] is vertex A_i, length n+1

    int vertex_count() const { return n + 1; }
};

inline Cell initial_cell(int n) {
    if (n < 1) throw PreconditionViolated("dimension must be >= 1");
    Cell c;
    c.n = n;
    c.cols.assign(n + 1, std::vector<BigInt>(n + 1, BigInt(0)));
    for (int k = 0; k <= n; ++k) {
        c.cols[k][0] = 1;
        for (int r = 1; r <= k; ++r) c.cols[k][r] = 1;
    }
    return c;
}

/// Vertex recursion for one appended digit:
///   A'_i = A_{i+1} (i < n-1),  A'_{n-1} = b A_0 + A_n,  A'_n = (b+1) A_0 + A_n.
inline Cell extend_cell(const Cell& c, long long b) {
    if (b < 0) throw PreconditionViolated("digits are non-negative");
    Cell out;
    out.n = c.n;
    out.digits = c.digits;
    out.digits.push_back(b);
    out.cols.resize(c.n + 1);
    for (int i = 0; i + 1 < c.n; ++i) out.cols[i] = c.cols[i + 1];
    const int n = c.n;
    std::vector<BigInt> lo(n + 1), hi(n + 1);
    for (int r = 0; r <= n; ++r) {
        lo[r] = big_int(b) * c.cols[0][r] + c.cols[n][r];
        hi[r] = lo[r] + c.cols[0][r];
    }
    out.cols[n - 1] = std::move(lo);
    out.cols[n] = std::move(hi);
    return out;
}

inline Cell cell_from_sequence(int n, const std::vector<long long>& digits) {
    Cell c = initial_cell(n);
    for (long long b : digits) c = extend_cell(c, b);
    return c;
}

/// T_b^{-1} as an integer matrix: y -> (y_0 + b y_{n-1} + y_n, y_0, ..., y_{n-1}).
inline IntMatrix inverse_branch_matrix(int n, long long b) {
    IntMatrix m(n + 1);
    m.at(0, 0) += 1;
    m.at(0, n - 1) += big_int(b);
    m.at(0, n) += 1;
    for (int r = 1; r <= n; ++r) m.at(r, r - 1) = 1;
    return m;
}

inline IntMatrix column_matrix(const Cell& c) {
    IntMatrix m(c.n + 1);
    for (int r = 0; r <= c.n; ++r)
        for (int i = 0; i <= c.n; ++i) m.at(r, i) = c.cols[i][r];
    return m;
}

/// Same cell by the other route: product of branch inverses applied to the
/// initial columns. extend_cell folds must agree with this exactly.
inline Cell cell_from_matrices(int n, const std::vector<long long>& digits) {
    IntMatrix prod = IntMatrix::identity(n + 1);
    for (long long b : digits) prod = prod * inverse_branch_matrix(n, b);
    Cell init = initial_cell(n);
    Cell out;
    out.n = n;
    out.digits = digits;
    out.cols.resize(n + 1);
    for (int i = 0; i <= n; ++i) out.cols[i] = mat_vec(prod, init.cols[i]);
    return out;
}

inline BigInt cell_determinant(const Cell& c) { return determinant(column_matrix(c)); }

inline BigInt column_norm(const std::vector<BigInt>& col) {
    BigInt s(0);
    for (const BigInt& v : col) s += v; // entries are nonnegative by construction
    return s;
}

inline std::vector<BigInt> cell_norms(const Cell& c) {
    std::vector<BigInt> out(c.n + 1);
    for (int i = 0; i <= c.n; ++i) out[i] = column_norm(c.cols[i]);
    return out;
}

// ---- slice geometry ----

/// D(U, V) = | U/||U||_1 - V/||V||_1 |_2 for nonnegative integer columns.
inline double pair_distance(const std::vector<BigInt>& u, const std::vector<BigInt>& v) {
    BigInt nu = column_norm(u), nv = column_norm(v);
    if (nu == 0 || nv == 0) throw ZeroVector("distance undefined for the zero vector");
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        Rational d = Rational(u[i], nu) - Rational(v[i], nv);
        double t = d.get_d();
        acc += t * t;
    }
    return std::sqrt(acc);
}

template <class S>
double pair_distance(const HomogeneousVector<S>& u, const HomogeneousVector<S>& v) {
    S nu = l1_norm(u.coords), nv = l1_norm(v.coords);
    if (is_zero(nu) || is_zero(nv)) throw ZeroVector("distance undefined for the zero vector");
    double acc = 0.0;
    for (std::size_t i = 0; i < u.coords.size(); ++i) {
        double t = scalar_traits<S>::to_double(u.coords[i] / nu) -
                   scalar_traits<S>::to_double(v.coords[i] / nv);
        acc += t * t;
    }
    return std::sqrt(acc);
}

/// Diameter of the slice simplex: max pairwise vertex distance. Nested
/// digit extensions can only shrink it.
inline double cell_diameter(const Cell& c) {
    double best = 0.0;
    for (int i = 0; i <= c.n; ++i)
        for (int j = i + 1; j <= c.n; ++j)
            best = std::max(best, pair_distance(c.cols[i], c.cols[j]));
    return best;
}

/// Normalized vertices as doubles, one column per vertex.
inline std::vector<std::vector<double>> slice_vertices(const Cell& c) {
    std::vector<std::vector<double>> out(c.n + 1, std::vector<double>(c.n + 1));
    for (int i = 0; i <= c.n; ++i) {
        BigInt norm = column_norm(c.cols[i]);
        for (int r = 0; r <= c.n; ++r) out[i][r] = Rational(c.cols[i][r], norm).get_d();
    }
    return out;
}

// ---- membership ----

/// x lies in the cell iff embed(x) is a nonnegative combination of the
/// columns. tol pads the float-mode sign check; exact mode uses tol = 0.
template <class S>
bool cell_contains(const Cell& c, const SimplexPoint<S>& x, double tol = 1e-9) {
    if (x.n() != c.n) throw PreconditionViolated("dimension mismatch");
    const int d = c.n + 1;
    std::vector<std::vector<S>> a(d, std::vector<S>(d));
    std::vector<S> rhs(d);
    for (int r = 0; r < d; ++r)
        for (int i = 0; i < d; ++i) {
            if constexpr (scalar_traits<S>::exact)
                a[r][i] = Rational(c.cols[i][r]);
            else
                a[r][i] = c.cols[i][r].get_d();
        }
    rhs[0] = S(1);
    for (int r = 1; r < d; ++r) rhs[r] = x.coords[r - 1];
    std::vector<S> coeff = solve_linear(a, rhs);
    for (const S& v : coeff) {
        if constexpr (scalar_traits<S>::exact) {
            if (v < 0) return false;
        } else {
            if (v < -tol) return false;
        }
    }
    return true;
}

// ---- norm growth / contraction diagnostics ----

/// ||A_i|| / ||A_j|| >= 1/((B+1)(n+1)) for i < j, valid when the last n-1
/// digits are bounded by B and the prefix is long enough (m > n).
inline bool norm_ratio_bound_check(const Cell& c, long long B) {
    const int n = c.n;
    const long long m = static_cast<long long>(c.digits.size()) - 1;
    if (m <= n) throw PreconditionViolated("need m > n digits for the ratio bound");
    for (int k = 0; k < n - 1; ++k) {
        long long d = c.digits[c.digits.size() - 1 - k];
        if (d > B) throw PreconditionViolated("digit window exceeds the bound B");
    }
    std::vector<BigInt> norms = cell_norms(c);
    BigInt factor = big_int(B + 1) * BigInt(n + 1);
    for (int i = 0; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            if (factor * norms[i] < norms[j]) return false;
    return true;
}

/// Contraction factor (Bn + B + n)/(Bn + B + n + 1) for a window of n-1
/// digits bounded by B.
inline Rational contraction_factor(int n, long long B) {
    long long k = B * n + B + n;
    return Rational(static_cast<long>(k), static_cast<long>(k + 1));
}

// ---- volume weights ----

/// W(c) = 1 / prod of all n+1 vertex norms; proportional to the slice
/// Lebesgue measure of the cell (the constant is sqrt(n+1)/n! and cancels
/// in every ratio this library exposes).
inline Rational volume_weight(const Cell& c) {
    BigInt prod(1);
    for (const auto& col : c.cols) prod *= column_norm(col);
    return Rational(BigInt(1), prod);
}

/// 1/((n-1) n (n+1) ... (2n-2) n^{n-1}).
inline Rational measure_ratio_lower_bound(int n) {
    if (n < 2) throw PreconditionViolated("ratio bound needs n >= 2");
    BigInt denom(1);
    for (int f = n - 1; f <= 2 * n - 2; ++f) denom *= f;
    BigInt pow;
    mpz_ui_pow_ui(pow.get_mpz_t(), static_cast<unsigned long>(n),
                  static_cast<unsigned long>(n - 1));
    denom *= pow;
    return Rational(BigInt(1), denom);
}

/// Norms of the subcell obtained by appending (b, 0^{n-1}); they are linear
/// in b because all entries are nonnegative:
///   {b a0 + t, (b+1) a0 + t, (b+1) a0 + t + s_1, ..., (b+1) a0 + t + s_{n-1}}
/// with a0 = ||A_0||, t = ||A_n||, s_k = ||A_1|| + ... + ||A_k||.
inline std::vector<BigInt> zero_block_subcell_norms(const Cell& c, long long b) {
    std::vector<BigInt> norms = cell_norms(c);
    const int n = c.n;
    std::vector<BigInt> out;
    out.reserve(n + 1);
    out.push_back(big_int(b) * norms[0] + norms[n]);
    BigInt base = big_int(b + 1) * norms[0] + norms[n];
    out.push_back(base);
    BigInt run = base;
    for (int k = 1; k <= n - 1; ++k) {
        run += norms[k];
        out.push_back(run);
    }
    return out;
}

struct ZeroTailBound {
    Rational bound;  // closed-form lower bound for the full series
    Rational series; // exact partial sum over b = 1..terms
    long truncated_at = 0;
};

/// Lower bound for the total weight of all subcells (b, 0^{n-1}), b >= 1,
/// against the exact truncated series. Dominating each vertex norm by the
/// consecutive product (b+j) a + s and telescoping gives
///   sum > 1 / (n a (a+s)(2a+s)...(na+s)),  a = ||A_0||, s = ||A_1+...+A_n||.
inline ZeroTailBound zero_tail_weight_bound(const Cell& c, long terms = 10000) {
    if (c.n < 2) throw PreconditionViolated("zero-tail bound needs n >= 2");
    std::vector<BigInt> norms = cell_norms(c);
    BigInt a = norms[0];
    BigInt s(0);
    for (int i = 1; i <= c.n; ++i) s += norms[i];

    BigInt denom = BigInt(c.n) * a;
    for (int r = 1; r <= c.n; ++r) denom *= BigInt(r) * a + s;

    ZeroTailBound out;
    out.bound = Rational(BigInt(1), denom);
    out.truncated_at = terms;
    // Accumulate num/den raw and canonicalize once; per-term gcd reduction
    // is quadratic in the partial-sum size at K = 10^4.
    BigInt acc_num(0), acc_den(1);
    for (long b = 1; b <= terms; ++b) {
        BigInt prod(1);
        for (const BigInt& v : zero_block_subcell_norms(c, b)) prod *= v;
        acc_num = acc_num * prod + acc_den;
        acc_den *= prod;
    }
    Rational series(acc_num, acc_den);
    series.canonicalize();
    out.series = series;
    return out;
}

/// Closed form of sum_{b>=1} prod_{j=0}^{p-1} 1/((b+j) a + s), the
/// consecutive-factor telescope underlying the zero-tail bound.
inline Rational consecutive_telescope_sum(int p, const Rational& a, const Rational& s) {
    if (p < 2) throw PreconditionViolated("telescope needs at least two factors");
    Rational denom = Rational(p - 1) * a;
    for (int r = 1; r <= p - 1; ++r) denom *= Rational(r) * a + s;
    return Rational(1) / denom;
}

} // namespace mcf
