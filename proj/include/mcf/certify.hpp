#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "mcf/cells.hpp"
#include "mcf/errors.hpp"
#include "mcf/linalg.hpp"
#include "mcf/maps.hpp"
#include "mcf/scalar.hpp"

namespace mcf {

/// Certificate that a purely periodic digit sequence pins a point with
/// algebraic coordinates: the homogeneous lift (1, a_1, ..., a_n) is a
/// dominant eigenvector of the unimodular one-period matrix.
struct AlgebraicCertificate {
    int n = 0;
    std::vector<long long> period;
    IntMatrix matrix;                    // one-period column-update matrix
    std::vector<BigInt> charpoly;        // det(xI - M), lowest degree first
    std::vector<BigInt> reciprocal_poly; // integer polynomial satisfied by 1/eigenvalue
    double dominant_eigenvalue = 0.0;
    double dominant_root = 0.0;          // 1/eigenvalue, the reciprocal_poly root;
                                         // coincides with a_1 for one-digit periods
    std::vector<double> candidate_point; // (a_1, ..., a_n)
    double eigen_residual = 0.0;
    bool replay_ok = false;
    int replay_periods = 0;
};

inline IntMatrix one_period_matrix(int n, const std::vector<long long>& period) {
    if (period.empty()) throw PreconditionViolated("period must be nonempty");
    IntMatrix m = IntMatrix::identity(n + 1);
    for (long long b : period) {
        if (b < 0) throw PreconditionViolated("digits are non-negative");
        m = m * inverse_branch_matrix(n, b);
    }
    return m;
}

/// Strips rational roots (necessarily ±1, the polynomial has unit ends)
/// that are not roots shared with `keep_root`.
inline std::vector<BigInt> strip_unit_rational_roots(std::vector<BigInt> p, double keep_root) {
    auto divide_out = [&](long root) {
        // synthetic division by (x - root); valid only when remainder is 0
        std::vector<BigInt> q(p.size() - 1);
        BigInt carry(0);
        for (std::size_t i = p.size(); i-- > 1;) {
            carry = p[i] + BigInt(root) * carry;
            q[i - 1] = carry;
        }
        BigInt rem = p[0] + BigInt(root) * carry;
        if (rem != 0) return false;
        p = std::move(q);
        return true;
    };
    for (long root : {1L, -1L}) {
        while (p.size() > 2 && std::fabs(keep_root - root) > 1e-6) {
            std::vector<BigInt> backup = p;
            if (!divide_out(root)) break;
            double v = evaluate_polynomial<double>(p, keep_root);
            if (std::fabs(v) > 1e-6) { p = std::move(backup); break; }
        }
    }
    return p;
}

inline AlgebraicCertificate certify_periodic(int n, const std::vector<long long>& period,
                                             double rel_tol = 1e-14, int max_iters = 100000,
                                             int replay_periods = 5) {
    AlgebraicCertificate cert;
    cert.n = n;
    cert.period = period;
    cert.matrix = one_period_matrix(n, period);
    cert.charpoly = characteristic_polynomial(cert.matrix);

    PowerIterationResult pi = power_iteration(cert.matrix, rel_tol, max_iters);
    cert.dominant_eigenvalue = pi.value;
    cert.eigen_residual = pi.residual;

    if (!(pi.vector[0] > 0))
        throw NonContractingPeriod("dominant eigenvector has no positive lead component");
    cert.candidate_point.resize(n);
    for (int i = 1; i <= n; ++i) cert.candidate_point[i - 1] = pi.vector[i] / pi.vector[0];
    cert.dominant_root = 1.0 / pi.value;

    cert.reciprocal_poly =
        strip_unit_rational_roots(reversed_polynomial(cert.charpoly), cert.dominant_root);

    // Replay: the candidate point must reproduce the period.
    cert.replay_periods = replay_periods;
    SimplexPoint<double> x(cert.candidate_point);
    cert.replay_ok = true;
    if (!in_simplex(x.coords)) {
        cert.replay_ok = false;
    } else {
        const int steps = replay_periods * static_cast<int>(period.size());
        FastOrbit<double> orb = orbit_fast(x, steps);
        if (orb.digits.terminated || static_cast<int>(orb.digits.digits.size()) != steps) {
            cert.replay_ok = false;
        } else {
            for (int k = 0; k < steps; ++k)
                if (orb.digits.digits[k] != period[k % period.size()]) {
                    cert.replay_ok = false;
                    break;
                }
        }
    }
    return cert;
}

} // namespace mcf
