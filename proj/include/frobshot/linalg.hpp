#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "frobshot/errors.hpp"
#include "frobshot/numbers.hpp"

// Small dense exact linear algebra: enough for kernels of a linear form,
// Gram matrices, fraction-free determinants and LLL reduction at the ranks
// this toolkit meets (<= 8).

namespace frobshot::linalg {

using core::Int;
using core::Rat;

using IntVec = std::vector<Int>;
using IntMat = std::vector<IntVec>;
using RatVec = std::vector<Rat>;
using RatMat = std::vector<RatVec>;

inline Int dot(const IntVec& a, const IntVec& b) {
    Int s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline Int norm_sq(const IntVec& v) { return dot(v, v); }

inline IntMat gram_matrix(const std::vector<IntVec>& vecs) {
    const std::size_t k = vecs.size();
    IntMat g(k, IntVec(k));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            g[i][j] = dot(vecs[i], vecs[j]);
            g[j][i] = g[i][j];
        }
    return g;
}

// Bareiss fraction-free determinant; consumes its argument.
inline Int determinant(IntMat m) {
    const std::size_t n = m.size();
    if (n == 0) return 1;
    Int prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t pivot = k + 1;
            while (pivot < n && m[pivot][k] == 0) ++pivot;
            if (pivot == n) return 0;
            std::swap(m[k], m[pivot]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                Int num = m[i][j] * m[k][k] - m[i][k] * m[k][j];
                mpz_divexact(m[i][j].get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    return sign > 0 ? m[n - 1][n - 1] : Int(-m[n - 1][n - 1]);
}

// Row rank over Q by exact Gaussian elimination; consumes its argument.
inline std::size_t rank(IntMat m) {
    if (m.empty()) return 0;
    const std::size_t rows = m.size(), cols = m[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t pivot = r;
        while (pivot < rows && m[pivot][c] == 0) ++pivot;
        if (pivot == rows) continue;
        std::swap(m[r], m[pivot]);
        for (std::size_t i = r + 1; i < rows; ++i) {
            if (m[i][c] == 0) continue;
            // scale rows to clear without fractions
            Int f_top = m[i][c], f_row = m[r][c];
            for (std::size_t j = c; j < cols; ++j)
                m[i][j] = m[i][j] * f_row - m[r][j] * f_top;
        }
        ++r;
    }
    return r;
}

inline Rat determinant_rat(RatMat m) {
    const std::size_t n = m.size();
    Rat det = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = k;
        while (pivot < n && m[pivot][k] == 0) ++pivot;
        if (pivot == n) return Rat(0);
        if (pivot != k) {
            std::swap(m[k], m[pivot]);
            det = -det;
        }
        det *= m[k][k];
        for (std::size_t i = k + 1; i < n; ++i) {
            if (m[i][k] == 0) continue;
            Rat f = m[i][k] / m[k][k];
            for (std::size_t j = k; j < n; ++j) m[i][j] -= f * m[k][j];
        }
    }
    return det;
}

inline std::optional<RatVec> solve(RatMat a, RatVec b) {
    const std::size_t n = a.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = k;
        while (pivot < n && a[pivot][k] == 0) ++pivot;
        if (pivot == n) return std::nullopt;
        std::swap(a[k], a[pivot]);
        std::swap(b[k], b[pivot]);
        for (std::size_t i = k + 1; i < n; ++i) {
            if (a[i][k] == 0) continue;
            Rat f = a[i][k] / a[k][k];
            for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
            b[i] -= f * b[k];
        }
    }
    RatVec x(n);
    for (std::size_t i = n; i-- > 0;) {
        Rat s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
        x[i] = s / a[i][i];
    }
    return x;
}

// Integer Cramer solve: returns (numerators, denominator) with denominator
// = det(a) != 0, or nullopt when singular. Kept all-integer so callers can
// compare solutions without rational normalization.
inline std::optional<std::pair<IntVec, Int>> solve_cramer(const IntMat& a, const IntVec& b) {
    Int det = determinant(a);
    if (det == 0) return std::nullopt;
    const std::size_t n = a.size();
    IntVec num(n);
    for (std::size_t col = 0; col < n; ++col) {
        IntMat m = a;
        for (std::size_t row = 0; row < n; ++row) m[row][col] = b[row];
        num[col] = determinant(std::move(m));
    }
    return std::make_pair(std::move(num), std::move(det));
}

// Basis of the full integer kernel { x : sum(coeffs[i] x[i]) = 0 } of a
// nonzero linear form, built by extended-gcd column elimination on the
// identity matrix. The transformation stays unimodular, so the returned
// n-1 vectors generate the whole kernel lattice, not a finite-index part.
inline std::vector<IntVec> kernel_of_form(const IntVec& coeffs) {
    const std::size_t n = coeffs.size();
    std::vector<IntVec> cols(n, IntVec(n, 0));
    for (std::size_t i = 0; i < n; ++i) cols[i][i] = 1;
    IntVec v = coeffs;
    for (std::size_t i = 1; i < n; ++i) {
        if (v[i] == 0) continue;
        Int g, s, t;
        mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), v[0].get_mpz_t(), v[i].get_mpz_t());
        Int q0 = v[0] / g, qi = v[i] / g;
        IntVec col0(n), coli(n);
        for (std::size_t row = 0; row < n; ++row) {
            col0[row] = s * cols[0][row] + t * cols[i][row];
            coli[row] = qi * cols[0][row] - q0 * cols[i][row];
        }
        cols[0] = std::move(col0);
        cols[i] = std::move(coli);
        v[0] = g;
        v[i] = 0;
    }
    std::vector<IntVec> kernel(cols.begin() + 1, cols.end());
    for (const IntVec& k : kernel)
        if (dot(coeffs, k) != 0)
            throw Error(ErrorCode::Internal, "kernel elimination produced non-kernel vector");
    return kernel;
}

struct Gso {
    RatVec norms_sq;  // squared Gram-Schmidt norms, all positive for a basis
    RatMat mu;        // mu[i][j] for j < i
};

inline Gso gso_from_gram(const IntMat& gram) {
    const std::size_t k = gram.size();
    Gso g;
    g.norms_sq.assign(k, Rat(0));
    g.mu.assign(k, RatVec(k, Rat(0)));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            Rat s = Rat(gram[i][j]);
            for (std::size_t l = 0; l < j; ++l) s -= g.mu[i][l] * g.mu[j][l] * g.norms_sq[l];
            if (g.norms_sq[j] == 0)
                throw Error(ErrorCode::DependentVectors, "Gram-Schmidt hit a zero norm");
            g.mu[i][j] = s / g.norms_sq[j];
        }
        Rat d = Rat(gram[i][i]);
        for (std::size_t l = 0; l < i; ++l) d -= g.mu[i][l] * g.mu[i][l] * g.norms_sq[l];
        if (d <= 0)
            throw Error(ErrorCode::DependentVectors, "vectors are linearly dependent");
        g.norms_sq[i] = d;
    }
    return g;
}

// Exact-rational LLL, delta = 99/100. Only a speed preprocessing step for
// the enumerations downstream; no correctness there depends on reduction
// quality. Recomputes the GSO after every basis change, which is cheap at
// these ranks and keeps the code short.
inline void lll_reduce(std::vector<IntVec>& basis) {
    const std::size_t k = basis.size();
    if (k < 2) return;
    const Rat delta(99, 100);
    Gso g = gso_from_gram(gram_matrix(basis));
    std::size_t i = 1;
    while (i < k) {
        for (std::size_t j = i; j-- > 0;) {
            Int r = core::round_rat(g.mu[i][j]);
            if (r != 0) {
                for (std::size_t c = 0; c < basis[i].size(); ++c) basis[i][c] -= r * basis[j][c];
                g = gso_from_gram(gram_matrix(basis));
            }
        }
        Rat lhs = g.norms_sq[i];
        Rat rhs = (delta - g.mu[i][i - 1] * g.mu[i][i - 1]) * g.norms_sq[i - 1];
        if (lhs >= rhs) {
            ++i;
        } else {
            std::swap(basis[i - 1], basis[i]);
            g = gso_from_gram(gram_matrix(basis));
            i = (i > 1) ? i - 1 : 1;
        }
    }
}

} // namespace frobshot::linalg
