#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "frobshot/bounds.hpp"
#include "frobshot/errors.hpp"
#include "frobshot/lattice.hpp"
#include "frobshot/linalg.hpp"
#include "frobshot/numbers.hpp"
#include "frobshot/tuple.hpp"

// A one-parameter family of 4-tuples whose null lattices have equal
// successive minima, generated from a circulant basis pattern, plus the
// machinery to certify each instance exactly: positivity and ordering of
// the tuple, a modular gcd certificate, Grassmann duality of the basis,
// near-orthogonality, and an independent equal-minima confirmation by
// enumeration. A bounded brute-force search over sign/permutation patterns
// can look for candidate families in other dimensions.

namespace frobshot::esmgen {

using core::Int;
using core::NTuple;
using core::Rat;
using linalg::IntVec;

namespace detail {

// dense integer polynomials in one variable, little-endian coefficients
using Poly = std::vector<Int>;

inline Poly poly_mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, Int(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

inline void poly_add_to(Poly& acc, const Poly& p) {
    if (acc.size() < p.size()) acc.resize(p.size(), Int(0));
    for (std::size_t i = 0; i < p.size(); ++i) acc[i] += p[i];
}

inline bool poly_is_zero(const Poly& p) {
    for (const Int& c : p)
        if (c != 0) return false;
    return true;
}

inline Int poly_eval(const Poly& p, const Int& t) {
    Int v = 0;
    for (std::size_t i = p.size(); i-- > 0;) v = v * t + p[i];
    return v;
}

// tuple polynomials: 6t^2-13t-216, 6t^2-125, 7t^2-174, t^3-36t-78
inline std::array<Poly, 4> tuple_polys() {
    return {Poly{-216, -13, 6}, Poly{-125, 0, 6}, Poly{-174, 0, 7}, Poly{-78, -36, 0, 1}};
}

// Basis vectors orthogonal to the ascending tuple, as polynomials.
// The circulant pattern rows (-7,t,6,-6), (-6,7,t,-6), (-6,-6,7,t) are
// orthogonal to the tuple read in the order (a4,a3,a1,a2); permuting
// coordinates (an isometry, so all norms, inner products and certificates
// are unchanged) gives vectors orthogonal to the ascending tuple itself.
inline std::array<std::array<Poly, 4>, 3> basis_polys() {
    return {{
        {Poly{6}, Poly{-6}, Poly{0, 1}, Poly{-7}},
        {Poly{0, 1}, Poly{-6}, Poly{7}, Poly{-6}},
        {Poly{7}, Poly{0, 1}, Poly{-6}, Poly{-6}},
    }};
}

} // namespace detail

// Symbolic certificate for the whole family at once: each basis vector is
// orthogonal to the tuple as a polynomial identity, and each has squared
// norm t^2 + 121 identically.
inline bool family_identities_hold() {
    auto as = detail::tuple_polys();
    auto ys = detail::basis_polys();
    for (const auto& y : ys) {
        detail::Poly dot;
        for (std::size_t i = 0; i < 4; ++i)
            detail::poly_add_to(dot, detail::poly_mul(as[i], y[i]));
        if (!detail::poly_is_zero(dot)) return false;
        detail::Poly norm;
        for (std::size_t i = 0; i < 4; ++i)
            detail::poly_add_to(norm, detail::poly_mul(y[i], y[i]));
        detail::Poly expected{121, 0, 1};
        if (norm.size() < expected.size()) return false;
        for (std::size_t i = 0; i < norm.size(); ++i) {
            Int want = i < expected.size() ? expected[i] : Int(0);
            if (norm[i] != want) return false;
        }
    }
    return true;
}

// The four tuple values at t. Positivity and strict ordering hold exactly
// for t >= 10; coprimality is checked, never assumed.
inline NTuple esm4_tuple(const Int& t) {
    if (t < 10)
        throw Error(ErrorCode::OrderViolation,
                    "tuple ordering holds for t >= 10, got t = " + core::to_string(t));
    auto polys = detail::tuple_polys();
    std::vector<Int> values;
    for (const auto& p : polys) values.push_back(detail::poly_eval(p, t));
    return core::validate_tuple(std::move(values));
}

// The raw circulant pattern rows.
inline std::array<IntVec, 3> esm4_circulant(const Int& t) {
    return {IntVec{-7, t, 6, -6}, IntVec{-6, 7, t, -6}, IntVec{-6, -6, 7, t}};
}

// Basis of the null lattice of the ascending tuple (see basis_polys for the
// coordinate permutation); every vector has squared norm t^2 + 121.
inline std::array<IntVec, 3> esm4_basis(const Int& t) {
    return {IntVec{6, -6, t, -7}, IntVec{t, -6, 7, -6}, IntVec{7, t, -6, -6}};
}

// Near-orthogonality certificate: for each vector after the first, the
// squared cosine of its angle against the span of its predecessors, as an
// exact rational. The maximum cosine against a subspace is the norm ratio
// of the orthogonal projection, so rho_i^2 = g^T G^{-1} g / |x_i|^2 with G
// the Gram matrix of the predecessors; the collection is nearly orthogonal
// (every pairwise-to-span angle at least pi/3) iff every rho_i^2 <= 1/4.
// This replaces a numeric critical-point search by an exact computation.
struct NearOrthoCertificate {
    std::vector<Rat> rho_sq;  // index i-2 holds the value for vector i
    bool nearly_orthogonal;
};

inline NearOrthoCertificate near_orthogonal_check(const std::vector<IntVec>& vectors) {
    if (vectors.size() < 2)
        throw Error(ErrorCode::TooSmall, "near-orthogonality needs at least two vectors");
    NearOrthoCertificate cert;
    cert.nearly_orthogonal = true;
    for (std::size_t i = 1; i < vectors.size(); ++i) {
        std::vector<IntVec> prefix(vectors.begin(), vectors.begin() + i);
        linalg::RatMat g(i, linalg::RatVec(i));
        linalg::RatVec rhs(i);
        for (std::size_t r = 0; r < i; ++r) {
            for (std::size_t c = 0; c < i; ++c) g[r][c] = Rat(linalg::dot(prefix[r], prefix[c]));
            rhs[r] = Rat(linalg::dot(prefix[r], vectors[i]));
        }
        auto coeffs = linalg::solve(g, rhs);
        if (!coeffs)
            throw Error(ErrorCode::DependentVectors, "predecessor vectors are linearly dependent");
        Rat proj_norm_sq = 0;
        for (std::size_t r = 0; r < i; ++r) proj_norm_sq += rhs[r] * (*coeffs)[r];
        Rat norm_sq(linalg::norm_sq(vectors[i]));
        if (proj_norm_sq == norm_sq)
            throw Error(ErrorCode::DependentVectors,
                        "vector " + std::to_string(i + 1) + " lies in the span of its predecessors");
        Rat rho = proj_norm_sq / norm_sq;
        if (rho > Rat(1, 4)) cert.nearly_orthogonal = false;
        cert.rho_sq.push_back(std::move(rho));
    }
    return cert;
}

// Modular gcd certificate. gcd of the tuple divides d(t) = gcd(a2, a3),
// and d(t) divides both a2 - a3 = t^2 - 49 and 7 a2 - 6 a3 = 169; whenever
// 13 does not divide t^2 - 49 (always the case for t = 13s + 2) this forces
// d(t) = 1. Otherwise the certificate falls back to a direct gcd.
struct GcdCertificate {
    Int t;
    Int pair_gcd;               // gcd(a2(t), a3(t))
    Int t_sq_minus_49_mod_13;
    bool mod13_certified;       // nonzero residue proved pair_gcd = 1
    Int tuple_gcd;              // direct gcd of all four values
    bool unit;                  // tuple_gcd == 1
};

inline GcdCertificate gcd_certificate(const Int& t) {
    if (t < 1) throw Error(ErrorCode::TooSmall, "parameter must be positive");
    auto polys = detail::tuple_polys();
    Int a2 = detail::poly_eval(polys[1], t);
    Int a3 = detail::poly_eval(polys[2], t);
    GcdCertificate cert;
    cert.t = t;
    cert.pair_gcd = gcd(a2, a3);
    Int diff = t * t - 49;
    if (cert.pair_gcd != 0 && (diff % cert.pair_gcd != 0 || Int(169) % cert.pair_gcd != 0))
        throw Error(ErrorCode::Internal, "pair gcd fails its divisibility facts");
    cert.t_sq_minus_49_mod_13 = ((diff % 13) + 13) % 13;
    cert.mod13_certified = cert.t_sq_minus_49_mod_13 != 0;
    if (cert.mod13_certified && cert.pair_gcd != 1)
        throw Error(ErrorCode::Internal, "mod-13 certificate contradicts the direct gcd");
    Int g = 0;
    for (const auto& p : polys) g = gcd(g, detail::poly_eval(p, t));
    cert.tuple_gcd = g;
    cert.unit = (g == 1);
    return cert;
}

struct Esm4Instance {
    Int t;
    std::optional<NTuple> tuple;
    std::array<IntVec, 3> basis;      // orthogonal to the ascending tuple
    std::array<IntVec, 3> circulant;  // raw pattern rows
    bool positivity = false;
    GcdCertificate gcd;
    bool grassmann_pattern = false;
    bool grassmann_coprime = false;
    std::optional<NearOrthoCertificate> near_ortho;
    std::optional<lattice::MinimaProfile> minima;
    bool esm_confirmed = false;
    bool lambda_matches_formula = false;
    bool fully_certified = false;
    std::string failure;  // first failing condition, empty when fully certified
};

// Runs every certificate for one parameter value. For t >= 28 with
// t = 13s + 2 all certificates must pass and a failure throws; other t are
// allowed and produce a partial report that states which conditions fail,
// without extrapolating anything.
inline Esm4Instance verify_esm_family(const Int& t, const lattice::EnumerationLimits& limits = {}) {
    if (t < 1) throw Error(ErrorCode::TooSmall, "parameter must be positive");
    const bool strict = (t >= 28 && t % 13 == 2);
    Esm4Instance inst;
    inst.t = t;
    inst.circulant = esm4_circulant(t);
    inst.basis = esm4_basis(t);
    inst.gcd = gcd_certificate(t);

    auto fail = [&](const std::string& what) {
        if (inst.failure.empty()) inst.failure = what;
        if (strict)
            throw Error(ErrorCode::CertificateFailure,
                        what + " failed for t = " + core::to_string(t));
    };

    auto polys = detail::tuple_polys();
    std::vector<Int> values;
    for (const auto& p : polys) values.push_back(detail::poly_eval(p, t));
    inst.positivity = values[0] > 0 && values[0] < values[1] && values[1] < values[2] &&
                      values[2] < values[3];
    if (!inst.positivity) fail("positivity/ordering");
    if (!inst.gcd.unit) fail("gcd certificate");

    if (inst.positivity && inst.gcd.unit) {
        inst.tuple = core::validate_tuple(values);
        std::vector<IntVec> vecs(inst.basis.begin(), inst.basis.end());
        try {
            lattice::LatticeBasis basis = lattice::LatticeBasis::from_vectors(*inst.tuple, vecs);
            lattice::GrassmannCoords coords = lattice::grassmann_coords(basis);
            inst.grassmann_pattern = true;
            Int g = 0;
            for (const Int& c : coords.coords) g = gcd(g, c);
            inst.grassmann_coprime = (abs(g) == 1);
            if (!inst.grassmann_coprime) fail("Grassmann coprimality");

            inst.near_ortho = near_orthogonal_check(vecs);
            if (!inst.near_ortho->nearly_orthogonal) fail("near-orthogonality");

            inst.minima = lattice::successive_minima(basis, limits);
            inst.esm_confirmed = lattice::is_esm(*inst.minima);
            if (!inst.esm_confirmed) fail("equal successive minima");
            inst.lambda_matches_formula =
                inst.esm_confirmed && inst.minima->sq_minima.front() == t * t + 121;
            if (inst.esm_confirmed && !inst.lambda_matches_formula) fail("minima formula");
        } catch (const Error& e) {
            if (e.code() == ErrorCode::BasisMismatch || e.code() == ErrorCode::DegenerateBasis) {
                inst.grassmann_pattern = false;
                fail("Grassmann duality");
            } else {
                throw;
            }
        }
    }

    inst.fully_certified = inst.positivity && inst.gcd.unit && inst.grassmann_pattern &&
                           inst.grassmann_coprime && inst.near_ortho &&
                           inst.near_ortho->nearly_orthogonal && inst.esm_confirmed &&
                           inst.lambda_matches_formula;
    return inst;
}

// Growth comparison across certified parameters: the minimum of the
// literature bounds against the equal-minima bound, with log-log slopes
// (degree-4 versus degree-3 growth is the expected picture) and an exact
// check that the advantage ratio increases strictly.
struct AsymptoticReport {
    struct Row {
        Int t;
        Int min_literature;
        std::string min_literature_name;
        Int esm_bound;
    };
    std::vector<Row> rows;
    std::optional<double> slope_min_literature;
    std::optional<double> slope_esm;
    bool ratio_strictly_increasing = true;
};

inline AsymptoticReport asymptotic_report(const std::vector<Int>& t_values, unsigned bits = 128,
                                          const lattice::EnumerationLimits& limits = {}) {
    AsymptoticReport report;
    for (const Int& t : t_values) {
        NTuple a = esm4_tuple(t);
        auto [name, lit] = bounds::min_literature_bound(a, bits);
        lattice::LatticeBasis basis = lattice::null_lattice_basis(a);
        lattice::MinimaProfile profile = lattice::successive_minima(basis, limits);
        Int esm = bounds::frobenius_bound_esm(a, profile, bits);
        report.rows.push_back({t, lit, name, esm});
    }
    for (std::size_t i = 1; i < report.rows.size(); ++i) {
        const auto& prev = report.rows[i - 1];
        const auto& cur = report.rows[i];
        if (prev.min_literature * cur.esm_bound >= cur.min_literature * prev.esm_bound)
            report.ratio_strictly_increasing = false;
    }
    if (report.rows.size() >= 2) {
        auto slope = [&](auto value_of) {
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            const double n = static_cast<double>(report.rows.size());
            for (const auto& row : report.rows) {
                double x = std::log(row.t.get_d());
                double y = std::log(value_of(row).get_d());
                sx += x; sy += y; sxx += x * x; sxy += x * y;
            }
            return (n * sxy - sx * sy) / (n * sxx - sx * sx);
        };
        report.slope_min_literature = slope([](const auto& r) { return r.min_literature; });
        report.slope_esm = slope([](const auto& r) { return r.esm_bound; });
    }
    return report;
}

// Bounded brute-force search for circulant-style families in dimension n:
// vectors x_i permute a probe vector's entries (x_1 keeps the identity
// order) with sign flips, and a candidate must pass, in this order,
// (1) linear independence, (2) the alternating-positive Grassmann pattern,
// (3) coprime Grassmann coordinates, (4) near-orthogonality. With
// circulant_only the permutations are the successive right rotations, which
// is the only regime that stays tractable at n = 5.
struct FamilyCandidate {
    std::vector<std::vector<std::size_t>> perms;  // one per vector, including identity
    std::vector<std::vector<int>> signs;          // 0 -> +, 1 -> -
    std::vector<IntVec> vectors;
    std::vector<Int> grassmann_values;            // the recovered tuple values, all positive
    std::optional<NTuple> tuple;                  // set when the values form a valid tuple
};

struct SearchOptions {
    bool circulant_only = true;
    std::uint64_t budget = 2'000'000;  // candidates examined before stopping
};

inline std::vector<FamilyCandidate> search_families(std::size_t n, const std::vector<Int>& probe,
                                                    const SearchOptions& opts = {}) {
    if (n < 4 || n > 5)
        throw Error(ErrorCode::TooSmall, "family search supports n = 4 or 5 only");
    if (probe.size() != n)
        throw Error(ErrorCode::TooSmall, "probe vector must have n entries");
    const std::size_t k = n - 1;

    std::vector<std::vector<std::size_t>> identity_perm{std::vector<std::size_t>(n)};
    for (std::size_t i = 0; i < n; ++i) identity_perm[0][i] = i;

    // permutation choices for vectors 2..k
    std::vector<std::vector<std::size_t>> perm_pool;
    if (opts.circulant_only) {
        perm_pool.push_back(identity_perm[0]);  // placeholder, rotations derived per index
    } else {
        std::vector<std::size_t> p = identity_perm[0];
        do {
            perm_pool.push_back(p);
        } while (std::next_permutation(p.begin(), p.end()));
    }

    auto rotation = [&](std::size_t shift) {
        std::vector<std::size_t> p(n);
        for (std::size_t i = 0; i < n; ++i) p[i] = (i + n - shift) % n;
        return p;
    };

    std::vector<FamilyCandidate> results;
    std::uint64_t examined = 0;

    std::vector<std::size_t> perm_index(k, 0);
    auto perm_of = [&](std::size_t vec_idx) -> std::vector<std::size_t> {
        if (vec_idx == 0) return identity_perm[0];
        if (opts.circulant_only) return rotation(vec_idx);
        return perm_pool[perm_index[vec_idx]];
    };

    auto try_signs = [&]() {
        const std::size_t sign_bits = k * n;
        for (std::uint64_t m = 0; m < (1ull << sign_bits); ++m) {
            if (++examined > opts.budget) return false;
            std::vector<IntVec> vectors(k, IntVec(n));
            std::vector<std::vector<int>> signs(k, std::vector<int>(n));
            for (std::size_t i = 0; i < k; ++i) {
                auto perm = perm_of(i);
                for (std::size_t j = 0; j < n; ++j) {
                    int bit = (m >> (i * n + j)) & 1u;
                    signs[i][j] = bit;
                    vectors[i][j] = bit ? Int(-probe[perm[j]]) : probe[perm[j]];
                }
            }
            if (linalg::rank(vectors) != k) continue;  // condition (1)
            std::vector<Int> values(n);
            bool pattern_ok = true;
            for (std::size_t drop = 0; drop < n && pattern_ok; ++drop) {
                linalg::IntMat minor(k, IntVec(k));
                for (std::size_t r = 0; r < k; ++r) {
                    std::size_t cc = 0;
                    for (std::size_t c = 0; c < n; ++c) {
                        if (c == drop) continue;
                        minor[r][cc++] = vectors[r][c];
                    }
                }
                Int det = linalg::determinant(std::move(minor));
                Int value = ((n - drop) % 2 == 0) ? det : Int(-det);
                if (value <= 0) pattern_ok = false;
                values[drop] = std::move(value);
            }
            if (!pattern_ok) continue;                 // condition (2)
            if (core::gcd_all(values) != 1) continue;  // condition (3)
            NearOrthoCertificate cert = near_orthogonal_check(vectors);
            if (!cert.nearly_orthogonal) continue;     // condition (4)

            FamilyCandidate cand;
            for (std::size_t i = 0; i < k; ++i) cand.perms.push_back(perm_of(i));
            cand.signs = std::move(signs);
            cand.vectors = std::move(vectors);
            cand.grassmann_values = values;
            try {
                cand.tuple = core::validate_tuple(values);
            } catch (const Error&) {
                cand.tuple = std::nullopt;
            }
            results.push_back(std::move(cand));
        }
        return true;
    };

    if (opts.circulant_only) {
        try_signs();
    } else {
        // odometer over the permutation choices of vectors 2..k
        std::vector<std::size_t> odo(k, 0);
        bool more = true;
        while (more) {
            for (std::size_t i = 1; i < k; ++i) perm_index[i] = odo[i];
            if (!try_signs()) break;
            std::size_t pos = 1;
            while (pos < k) {
                if (++odo[pos] < perm_pool.size()) break;
                odo[pos] = 0;
                ++pos;
            }
            more = pos < k;
        }
    }
    return results;
}

} // namespace frobshot::esmgen
