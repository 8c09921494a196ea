#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "mcf/errors.hpp"
#include "mcf/scalar.hpp"

namespace mcf {

/// Dense square matrix of big integers, row-major. Dimensions here are tiny
/// ((n+1) x (n+1)), so simplicity beats cleverness throughout.
struct IntMatrix {
    int dim = 0;
    std::vector<BigInt> a; // a[r * dim + c]

    IntMatrix() = default;
    explicit IntMatrix(int d) : dim(d), a(static_cast<std::size_t>(d) * d, BigInt(0)) {}

    BigInt& at(int r, int c) { return a[static_cast<std::size_t>(r) * dim + c]; }
    const BigInt& at(int r, int c) const { return a[static_cast<std::size_t>(r) * dim + c]; }

    static IntMatrix identity(int d) {
        IntMatrix m(d);
        for (int i = 0; i < d; ++i) m.at(i, i) = 1;
        return m;
    }

    static IntMatrix from_rows(const std::vector<std::vector<long long>>& rows) {
        IntMatrix m(static_cast<int>(rows.size()));
        for (int r = 0; r < m.dim; ++r)
            for (int c = 0; c < m.dim; ++c) m.at(r, c) = big_int(rows[r][c]);
        return m;
    }

    bool operator==(const IntMatrix& o) const { return dim == o.dim && a == o.a; }
};

inline IntMatrix operator*(const IntMatrix& x, const IntMatrix& y) {
    IntMatrix out(x.dim);
    for (int r = 0; r < x.dim; ++r)
        for (int k = 0; k < x.dim; ++k) {
            const BigInt& v = x.at(r, k);
            if (v == 0) continue;
            for (int c = 0; c < x.dim; ++c) out.at(r, c) += v * y.at(k, c);
        }
    return out;
}

inline std::vector<BigInt> mat_vec(const IntMatrix& m, const std::vector<BigInt>& v) {
    std::vector<BigInt> out(m.dim, BigInt(0));
    for (int r = 0; r < m.dim; ++r)
        for (int c = 0; c < m.dim; ++c) out[r] += m.at(r, c) * v[c];
    return out;
}

/// Exact determinant by Bareiss fraction-free elimination.
inline BigInt determinant(IntMatrix m) {
    const int d = m.dim;
    if (d == 0) return BigInt(1);
    BigInt prev(1);
    int sign = 1;
    for (int k = 0; k + 1 < d; ++k) {
        if (m.at(k, k) == 0) {
            int p = -1;
            for (int r = k + 1; r < d; ++r)
                if (m.at(r, k) != 0) { p = r; break; }
            if (p < 0) return BigInt(0);
            for (int c = k; c < d; ++c) mpz_swap(m.at(k, c).get_mpz_t(), m.at(p, c).get_mpz_t());
            sign = -sign;
        }
        for (int r = k + 1; r < d; ++r)
            for (int c = k + 1; c < d; ++c) {
                BigInt num = m.at(r, c) * m.at(k, k) - m.at(r, k) * m.at(k, c);
                mpz_divexact(m.at(r, c).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
            }
        prev = m.at(k, k);
    }
    return sign > 0 ? m.at(d - 1, d - 1) : BigInt(-m.at(d - 1, d - 1));
}

/// Monic characteristic polynomial det(xI - M) by Faddeev-LeVerrier.
/// Returns coefficients lowest degree first: p[0] + p[1] x + ... + x^dim.
inline std::vector<BigInt> characteristic_polynomial(const IntMatrix& m) {
    const int d = m.dim;
    std::vector<BigInt> coeff(d + 1, BigInt(0));
    coeff[d] = 1;
    IntMatrix acc = IntMatrix::identity(d);
    for (int k = 1; k <= d; ++k) {
        acc = m * acc;
        BigInt tr(0);
        for (int i = 0; i < d; ++i) tr += acc.at(i, i);
        BigInt ck;
        mpz_divexact_ui(ck.get_mpz_t(), tr.get_mpz_t(), static_cast<unsigned long>(k));
        ck = -ck;
        coeff[d - k] = ck;
        for (int i = 0; i < d; ++i) acc.at(i, i) += ck;
    }
    return coeff;
}

/// x^deg p(1/x) with positive leading coefficient: the polynomial satisfied
/// by the reciprocals of p's nonzero roots.
inline std::vector<BigInt> reversed_polynomial(std::vector<BigInt> p) {
    std::vector<BigInt> out(p.rbegin(), p.rend());
    while (out.size() > 1 && out.back() == 0) out.pop_back();
    if (mpz_sgn(out.back().get_mpz_t()) < 0)
        for (BigInt& c : out) c = -c;
    return out;
}

template <class S>
S evaluate_polynomial(const std::vector<BigInt>& p, const S& x) {
    S acc = S(0);
    for (auto it = p.rbegin(); it != p.rend(); ++it) {
        if constexpr (scalar_traits<S>::exact)
            acc = acc * x + Rational(*it);
        else
            acc = acc * x + it->get_d();
    }
    return acc;
}

/// Solve A c = b by Gaussian elimination; S is double or Rational.
/// Throws SingularCell when A is (numerically) singular.
template <class S>
std::vector<S> solve_linear(std::vector<std::vector<S>> a, std::vector<S> b) {
    const int d = static_cast<int>(b.size());
    for (int k = 0; k < d; ++k) {
        int piv = -1;
        if constexpr (scalar_traits<S>::exact) {
            for (int r = k; r < d; ++r)
                if (a[r][k] != 0) { piv = r; break; }
        } else {
            double best = 0.0;
            for (int r = k; r < d; ++r) {
                double mag = std::fabs(a[r][k]);
                if (mag > best) { best = mag; piv = r; }
            }
            if (best < 1e-300) piv = -1;
        }
        if (piv < 0) throw SingularCell("singular linear system");
        std::swap(a[k], a[piv]);
        std::swap(b[k], b[piv]);
        for (int r = k + 1; r < d; ++r) {
            if (is_zero(a[r][k])) continue;
            S f = a[r][k] / a[k][k];
            for (int c = k; c < d; ++c) a[r][c] -= f * a[k][c];
            b[r] -= f * b[k];
        }
    }
    std::vector<S> x(d);
    for (int k = d - 1; k >= 0; --k) {
        S acc = b[k];
        for (int c = k + 1; c < d; ++c) acc -= a[k][c] * x[c];
        x[k] = acc / a[k][k];
    }
    return x;
}

struct PowerIterationResult {
    std::vector<double> vector;   // dominant eigenvector, sup-norm 1
    double value = 0.0;           // dominant eigenvalue
    double residual = 0.0;        // ||Mv - value v||_inf / ||v||_inf
    int iterations = 0;
};

/// Power iteration on a nonnegative matrix. Convergence failure is reported,
/// never silently approximated.
inline PowerIterationResult power_iteration(const IntMatrix& m, double rel_tol = 1e-14,
                                            int max_iters = 100000) {
    const int d = m.dim;
    std::vector<double> md(static_cast<std::size_t>(d) * d);
    for (int i = 0; i < d * d; ++i) md[i] = m.a[i].get_d();
    std::vector<double> v(d, 1.0), w(d);
    double lambda = 0.0;
    int it = 0;
    for (; it < max_iters; ++it) {
        double norm = 0.0;
        for (int r = 0; r < d; ++r) {
            double acc = 0.0;
            for (int c = 0; c < d; ++c) acc += md[static_cast<std::size_t>(r) * d + c] * v[c];
            w[r] = acc;
            norm = std::max(norm, std::fabs(acc));
        }
        if (!(norm > 0.0)) throw NonContractingPeriod("matrix annihilated the iterate");
        double next = norm;
        for (int r = 0; r < d; ++r) w[r] /= norm;
        double delta = 0.0;
        for (int r = 0; r < d; ++r) delta = std::max(delta, std::fabs(w[r] - v[r]));
        v.swap(w);
        if (delta <= rel_tol && it > 0 && std::fabs(next - lambda) <= rel_tol * next) {
            lambda = next;
            ++it;
            break;
        }
        lambda = next;
    }
    if (it >= max_iters)
        throw NonContractingPeriod("power iteration did not converge; dominant eigenvalue "
                                   "may not be simple");
    PowerIterationResult out;
    out.vector = v;
    out.value = lambda;
    out.iterations = it;
    double res = 0.0;
    for (int r = 0; r < d; ++r) {
        double acc = 0.0;
        for (int c = 0; c < d; ++c) acc += md[static_cast<std::size_t>(r) * d + c] * v[c];
        res = std::max(res, std::fabs(acc - lambda * v[r]));
    }
    out.residual = res;
    return out;
}

} // namespace mcf
