#pragma once

#include <utility>
#include <vector>

#include "frobshot/errors.hpp"
#include "frobshot/numbers.hpp"

// Directed rational enclosures for the few irrational quantities the bound
// formulas need (square roots, k-th roots, pi and unit-ball volumes).
//
// Every enclosure is a closed interval [lo, hi] of exact rationals that is
// guaranteed to contain the true value. Primitive enclosures land on the
// dyadic grid 2^-bits with endpoints floor(v*2^b)/2^b and ceil(v*2^b)/2^b of
// the true value v, so raising the precision always produces a nested
// (never shifted) interval; rational interval arithmetic on nested inputs
// yields nested outputs, which is what keeps reported bounds monotone under
// precision changes.

namespace frobshot::core {

struct Interval {
    Rat lo;
    Rat hi;

    static Interval exact(const Rat& v) { return {v, v}; }
    static Interval exact(const Int& v) { return {Rat(v), Rat(v)}; }

    static Interval of(Rat a, Rat b) {
        if (a > b) throw Error(ErrorCode::Internal, "interval endpoints out of order");
        return {std::move(a), std::move(b)};
    }

    bool is_exact() const { return lo == hi; }
    Rat width() const { return hi - lo; }
    bool contains(const Rat& v) const { return lo <= v && v <= hi; }
    bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }

    Interval operator+(const Interval& o) const { return {lo + o.lo, hi + o.hi}; }
    Interval operator-(const Interval& o) const { return {lo - o.hi, hi - o.lo}; }

    Interval operator*(const Interval& o) const {
        Rat p1 = lo * o.lo, p2 = lo * o.hi, p3 = hi * o.lo, p4 = hi * o.hi;
        Rat mn = p1, mx = p1;
        for (const Rat* p : {&p2, &p3, &p4}) {
            if (*p < mn) mn = *p;
            if (*p > mx) mx = *p;
        }
        return {mn, mx};
    }

    // Divisor interval must not straddle zero.
    Interval operator/(const Interval& o) const {
        if (o.lo <= 0 && o.hi >= 0)
            throw Error(ErrorCode::Internal, "interval division by interval containing zero");
        Interval inv{Rat(1) / o.hi, Rat(1) / o.lo};
        return *this * inv;
    }

    Interval scaled(const Rat& c) const {
        if (c >= 0) return {lo * c, hi * c};
        return {hi * c, lo * c};
    }

    // Integer power; requires lo >= 0 (all uses are non-negative).
    Interval pow(unsigned long k) const {
        if (lo < 0) throw Error(ErrorCode::Internal, "interval pow on negative range");
        Interval r = Interval::exact(Rat(1));
        for (unsigned long i = 0; i < k; ++i) r = r * *this;
        return r;
    }
};

inline Interval operator+(const Rat& c, const Interval& x) { return Interval::exact(c) + x; }
inline Interval operator*(const Rat& c, const Interval& x) { return x.scaled(c); }

// Enclosure of sqrt(x) for rational x >= 0, exact when the dyadic-grid value
// is attained (in particular for perfect squares of integers).
inline Interval sqrt_enclosure(const Rat& x, unsigned bits) {
    if (x < 0) throw Error(ErrorCode::Internal, "sqrt of negative rational");
    if (x == 0) return Interval::exact(Rat(0));
    const Int scale = pow2(bits);
    // floor(sqrt(x) * 2^b) == isqrt(floor(x * 4^b))
    Int scaled_num = x.get_num() * scale * scale;
    Int target;
    mpz_fdiv_q(target.get_mpz_t(), scaled_num.get_mpz_t(), x.get_den().get_mpz_t());
    Int s = isqrt_floor(target);
    bool exact = (scaled_num == s * s * x.get_den());
    Rat lo = make_rat(s, scale);
    if (exact) return Interval::exact(lo);
    return {lo, make_rat(s + 1, scale)};
}

inline Interval sqrt_enclosure(const Interval& x, unsigned bits) {
    return {sqrt_enclosure(x.lo, bits).lo, sqrt_enclosure(x.hi, bits).hi};
}

// Enclosure of x^(1/k) for rational x >= 0, k >= 1.
inline Interval root_enclosure(const Rat& x, unsigned long k, unsigned bits) {
    if (x < 0) throw Error(ErrorCode::Internal, "k-th root of negative rational");
    if (k == 0) throw Error(ErrorCode::Internal, "zeroth root");
    if (x == 0) return Interval::exact(Rat(0));
    if (k == 1) return Interval::exact(x);
    const Int scale = pow2(bits);
    Int scaled_num = x.get_num() * pow_int(scale, k);
    Int target;
    mpz_fdiv_q(target.get_mpz_t(), scaled_num.get_mpz_t(), x.get_den().get_mpz_t());
    Int s = iroot_floor(target, k);
    bool exact = (scaled_num == pow_int(s, k) * x.get_den());
    Rat lo = make_rat(s, scale);
    if (exact) return Interval::exact(lo);
    return {lo, make_rat(s + 1, scale)};
}

inline Interval root_enclosure(const Interval& x, unsigned long k, unsigned bits) {
    return {root_enclosure(x.lo, k, bits).lo, root_enclosure(x.hi, k, bits).hi};
}

namespace detail {

// Fixed-point alternating series for atan(1/x) at scale 2^working_bits.
// Returns (sum, err) with |atan(1/x)*2^B - sum| <= err.
inline std::pair<Int, Int> atan_inv_fixed(unsigned long x, unsigned long working_bits) {
    const Int scale = pow2(working_bits);
    const Int x_sq(static_cast<unsigned long>(x) * x);
    Int power(x); // x^(2i+1)
    Int sum = 0;
    unsigned long terms = 0;
    for (unsigned long i = 0;; ++i) {
        Int term = scale / (Int(2 * i + 1) * power);
        if (term == 0) break;
        if (i % 2 == 0) sum += term; else sum -= term;
        ++terms;
        power *= x_sq;
    }
    // One ulp per floored term plus the truncated tail (< 1).
    return {sum, Int(terms + 1)};
}

} // namespace detail

// Enclosure [floor(pi*2^b), floor(pi*2^b)+1] / 2^b via Machin's formula,
// computed with enough guard bits to pin the floor exactly.
inline Interval pi_enclosure(unsigned bits) {
    for (unsigned long guard = 64;; guard *= 2) {
        const unsigned long working = bits + guard;
        auto [s5, e5] = detail::atan_inv_fixed(5, working);
        auto [s239, e239] = detail::atan_inv_fixed(239, working);
        Int sum = 16 * s5 - 4 * s239;
        Int err = 16 * e5 + 4 * e239;
        Int lo_floor, hi_floor;
        mpz_fdiv_q_2exp(lo_floor.get_mpz_t(), Int(sum - err).get_mpz_t(), guard);
        mpz_fdiv_q_2exp(hi_floor.get_mpz_t(), Int(sum + err).get_mpz_t(), guard);
        if (lo_floor == hi_floor) {
            const Int scale = pow2(bits);
            return {make_rat(lo_floor, scale), make_rat(lo_floor + 1, scale)};
        }
    }
}

// Volume of the k-dimensional unit ball: pi^(k/2) / Gamma(k/2 + 1).
// For k = 2m this is pi^m / m!; for k = 2m+1 the half-integer Gamma value
// reduces to the exact rational 4^(m+1) (m+1)! / (2m+2)! times pi^m.
inline Interval ball_volume_enclosure(unsigned k, unsigned bits) {
    if (k == 0) return Interval::exact(Rat(1));
    unsigned long m = k / 2;
    Rat coeff;
    if (k % 2 == 0) {
        coeff = make_rat(1, factorial(m));
    } else {
        coeff = make_rat(pow_int(4, m + 1) * factorial(m + 1), factorial(2 * m + 2));
    }
    if (m == 0) return Interval::exact(coeff);
    return pi_enclosure(bits).pow(m).scaled(coeff);
}

} // namespace frobshot::core
