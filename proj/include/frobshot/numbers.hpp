#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "frobshot/errors.hpp"

// Shared exact-arithmetic number kinds. Everything in the toolkit computes
// over arbitrary-precision integers and rationals; floating point never
// carries a result that a bound or certificate depends on.

namespace frobshot::core {

using Int = mpz_class;
using Rat = mpq_class;

inline Rat make_rat(const Int& num, const Int& den) {
    Rat q(num, den);
    q.canonicalize();
    return q;
}

inline Int floor_rat(const Rat& q) {
    Int r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return r;
}

inline Int ceil_rat(const Rat& q) {
    Int r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return r;
}

// Nearest integer, ties rounded up.
inline Int round_rat(const Rat& q) {
    return floor_rat(q + Rat(1, 2));
}

inline Int pow_int(const Int& base, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline Int pow2(unsigned long e) { return pow_int(2, e); }

// Floor of the integer square root; requires x >= 0.
inline Int isqrt_floor(const Int& x) {
    Int r;
    mpz_sqrt(r.get_mpz_t(), x.get_mpz_t());
    return r;
}

inline bool is_perfect_square(const Int& x) {
    return x >= 0 && mpz_perfect_square_p(x.get_mpz_t()) != 0;
}

// Floor of the integer k-th root; requires x >= 0, k >= 1.
// Sets *exact when the root is attained exactly.
inline Int iroot_floor(const Int& x, unsigned long k, bool* exact = nullptr) {
    Int r;
    int e = mpz_root(r.get_mpz_t(), x.get_mpz_t(), k);
    if (exact) *exact = (e != 0);
    return r;
}

inline Int factorial(unsigned long n) {
    Int r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

inline Int gcd_all(const std::vector<Int>& values) {
    Int g = 0;
    for (const Int& v : values) g = gcd(g, v);
    return g;
}

inline std::string to_string(const Int& v) { return v.get_str(); }

// Rationals render as "p" when integral, "p/q" otherwise.
inline std::string to_string(const Rat& v) {
    if (v.get_den() == 1) return v.get_num().get_str();
    return v.get_num().get_str() + "/" + v.get_den().get_str();
}

} // namespace frobshot::core
