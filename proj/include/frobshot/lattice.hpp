#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "frobshot/errors.hpp"
#include "frobshot/interval.hpp"
#include "frobshot/linalg.hpp"
#include "frobshot/numbers.hpp"
#include "frobshot/tuple.hpp"

// The null lattice of a tuple: integer vectors orthogonal to it. Rank is
// N-1, the determinant equals the Euclidean norm of the tuple, and the
// maximal minors of any basis matrix recover the tuple entries up to an
// alternating sign pattern (Grassmann coordinates). Successive minima are
// computed by exhaustive enumeration in exact arithmetic; the covering
// radius is bracketed from the minima and, for rank <= 4, computed exactly
// from the vertices of the Voronoi cell.

namespace frobshot::lattice {

using core::Int;
using core::Interval;
using core::NTuple;
using core::Rat;
using linalg::IntMat;
using linalg::IntVec;

struct EnumerationLimits {
    std::size_t max_rank = 8;
    std::uint64_t node_budget = 50'000'000;
};

class LatticeBasis {
public:
    // Validates that the vectors lie in the kernel of the tuple's linear
    // form and generate the full kernel lattice; the latter is certified by
    // the Gram determinant identity det(X^T X) = |a|^2.
    static LatticeBasis from_vectors(NTuple owner, std::vector<IntVec> vectors) {
        const std::size_t n = owner.size();
        if (vectors.size() != n - 1)
            throw Error(ErrorCode::DegenerateBasis,
                        "expected " + std::to_string(n - 1) + " vectors, got " + std::to_string(vectors.size()));
        for (const IntVec& v : vectors) {
            if (v.size() != n)
                throw Error(ErrorCode::BasisMismatch, "vector length does not match tuple size");
            if (linalg::dot(owner.entries(), v) != 0)
                throw Error(ErrorCode::BasisMismatch, "vector is not orthogonal to the tuple");
        }
        IntMat gram = linalg::gram_matrix(vectors);
        Int det_sq = linalg::determinant(gram);
        if (det_sq == 0)
            throw Error(ErrorCode::DegenerateBasis, "vectors are linearly dependent");
        if (det_sq != owner.norm_sq())
            throw Error(ErrorCode::BasisMismatch,
                        "Gram determinant " + core::to_string(det_sq) + " != squared tuple norm " +
                            core::to_string(owner.norm_sq()) + " (proper sublattice?)");
        return LatticeBasis(std::move(owner), std::move(vectors), std::move(gram), std::move(det_sq));
    }

    const NTuple& owner() const { return owner_; }
    const std::vector<IntVec>& vectors() const { return vectors_; }
    const IntMat& gram() const { return gram_; }
    const Int& det_sq() const { return det_sq_; }
    std::size_t rank() const { return vectors_.size(); }
    std::size_t ambient_dim() const { return owner_.size(); }

private:
    LatticeBasis(NTuple owner, std::vector<IntVec> vectors, IntMat gram, Int det_sq)
        : owner_(std::move(owner)), vectors_(std::move(vectors)), gram_(std::move(gram)),
          det_sq_(std::move(det_sq)) {}

    NTuple owner_;
    std::vector<IntVec> vectors_;
    IntMat gram_;
    Int det_sq_;
};

// Kernel basis by extended-gcd elimination, LLL-reduced for the benefit of
// the enumerations downstream.
inline LatticeBasis null_lattice_basis(const NTuple& a) {
    std::vector<IntVec> kernel = linalg::kernel_of_form(a.entries());
    linalg::lll_reduce(kernel);
    return LatticeBasis::from_vectors(a, std::move(kernel));
}

struct GrassmannCoords {
    std::vector<Int> coords;    // (-1)^(N+1-i) * a_i, orientation-normalized
    bool orientation_flipped;   // true when the basis orientation was negated
};

// Maximal minors of the basis matrix. For a basis of the full kernel these
// equal the tuple entries with alternating signs, up to one global sign
// from the basis orientation; the flip, when needed, is recorded.
inline GrassmannCoords grassmann_coords(const LatticeBasis& b) {
    const std::size_t n = b.ambient_dim();
    const std::size_t k = b.rank();
    if (k + 1 != n)
        throw Error(ErrorCode::DegenerateBasis, "Grassmann coordinates need rank N-1");
    std::vector<Int> dets(n);
    for (std::size_t drop = 0; drop < n; ++drop) {
        IntMat m(k, IntVec(k));
        for (std::size_t r = 0; r < k; ++r) {
            std::size_t cc = 0;
            for (std::size_t c = 0; c < n; ++c) {
                if (c == drop) continue;
                m[r][cc++] = b.vectors()[r][c];
            }
        }
        dets[drop] = linalg::determinant(std::move(m));
    }
    int orientation = 0;
    std::vector<Int> coords(n);
    for (std::size_t i = 0; i < n; ++i) {
        // expected value at index i (0-based): (-1)^(N-i) * a_{i+1}
        Int expected = ((n - i) % 2 == 0) ? b.owner()[i] : Int(-b.owner()[i]);
        int eps;
        if (dets[i] == expected) eps = 1;
        else if (dets[i] == -expected) eps = -1;
        else
            throw Error(ErrorCode::Internal,
                        "minor " + core::to_string(dets[i]) + " does not match tuple entry " +
                            core::to_string(b.owner()[i]));
        if (orientation == 0) orientation = eps;
        else if (orientation != eps)
            throw Error(ErrorCode::Internal, "inconsistent minor signs across indices");
        coords[i] = std::move(expected);
    }
    return {std::move(coords), orientation == -1};
}

// det(X^T X), cross-checked against both the squared tuple norm and the sum
// of squared Grassmann minors (Cauchy-Binet).
inline Int lattice_determinant_sq(const LatticeBasis& b) {
    GrassmannCoords g = grassmann_coords(b);
    Int minor_sum = 0;
    for (const Int& c : g.coords) minor_sum += c * c;
    if (minor_sum != b.det_sq())
        throw Error(ErrorCode::Internal, "Cauchy-Binet identity failed");
    return b.det_sq();
}

namespace detail {

struct ShortVector {
    std::vector<long> coeffs;  // with respect to the enumeration basis
    Int norm_sq;
};

// Exhaustive enumeration of all nonzero lattice vectors with squared norm
// <= radius_sq, one representative per +- pair. Schnorr-Euchner style
// recursion over the exact rational Gram-Schmidt decomposition; pruning
// comparisons are exact, so the output is a certificate that no vector
// outside the returned set exists within the radius.
inline std::vector<ShortVector> enumerate_short_vectors(const IntMat& gram, const Int& radius_sq,
                                                        std::uint64_t node_budget,
                                                        std::uint64_t* nodes_visited) {
    const std::size_t k = gram.size();
    linalg::Gso gso = linalg::gso_from_gram(gram);
    std::vector<ShortVector> found;
    std::vector<long> x(k, 0);
    std::uint64_t nodes = 0;
    const Rat radius(radius_sq);

    // level runs from k-1 down to 0; budget is what remains of radius_sq
    auto recurse = [&](auto&& self, std::size_t level, const Rat& budget) -> void {
        const std::size_t i = level;
        Rat center(0);
        for (std::size_t j = i + 1; j < k; ++j)
            if (x[j] != 0) center -= gso.mu[j][i] * Rat(static_cast<long>(x[j]));
        Rat ratio = budget / gso.norms_sq[i];
        Rat half_width = core::sqrt_enclosure(ratio, 16).hi;
        Int lo = core::ceil_rat(center - half_width);
        Int hi = core::floor_rat(center + half_width);
        for (Int xi = lo; xi <= hi; ++xi) {
            if (++nodes > node_budget)
                throw Error(ErrorCode::EnumerationBudgetExceeded,
                            "enumeration exceeded node budget " + std::to_string(node_budget));
            Rat y = Rat(xi) - center;
            Rat used = y * y * gso.norms_sq[i];
            if (used > budget) continue;
            if (!xi.fits_slong_p())
                throw Error(ErrorCode::EnumerationBudgetExceeded, "enumeration coefficient overflow");
            x[i] = xi.get_si();
            if (i == 0) {
                std::size_t first_nonzero = k;
                for (std::size_t j = 0; j < k; ++j)
                    if (x[j] != 0) { first_nonzero = j; break; }
                if (first_nonzero == k) continue;      // zero vector
                if (x[first_nonzero] < 0) continue;    // mirror of a canonical vector
                Int norm = 0;
                for (std::size_t r = 0; r < k; ++r) {
                    if (x[r] == 0) continue;
                    for (std::size_t c = 0; c < k; ++c)
                        if (x[c] != 0) norm += gram[r][c] * x[r] * x[c];
                }
                if (norm <= radius_sq) found.push_back({x, std::move(norm)});
            } else {
                self(self, i - 1, budget - used);
            }
        }
        x[i] = 0;
    };
    recurse(recurse, k - 1, radius);
    if (nodes_visited) *nodes_visited = nodes;
    return found;
}

inline IntVec combination(const std::vector<IntVec>& basis, const std::vector<long>& coeffs) {
    IntVec v(basis[0].size(), 0);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (coeffs[i] == 0) continue;
        for (std::size_t c = 0; c < v.size(); ++c) v[c] += coeffs[i] * basis[i][c];
    }
    return v;
}

// Canonical sign: first nonzero component positive.
inline void canonicalize_sign(IntVec& v, std::vector<long>& coeffs) {
    for (const Int& c : v) {
        if (c == 0) continue;
        if (c < 0) {
            for (Int& e : v) e = -e;
            for (long& e : coeffs) e = -e;
        }
        return;
    }
}

} // namespace detail

struct MinimaProfile {
    std::vector<Int> sq_minima;        // ascending squared successive minima
    std::vector<IntVec> witnesses;     // independent lattice vectors attaining them
    Int search_radius_sq;              // enumeration certificate: radius,
    std::uint64_t enumerated_nodes;    // tree size,
    std::uint64_t vectors_in_radius;   // and vectors found inside the ball
};

// Exact successive minima: LLL-reduce, enumerate every vector inside the
// ball covering the reduced basis, then greedily extend an independent set
// in order of (squared norm, lexicographic witness). The enumeration is
// exhaustive, which certifies that no smaller independent set exists; the
// tie order makes the witnesses reproducible across bases of one lattice.
inline MinimaProfile successive_minima(const LatticeBasis& b, const EnumerationLimits& limits = {}) {
    const std::size_t k = b.rank();
    if (k > limits.max_rank)
        throw Error(ErrorCode::EnumerationBudgetExceeded,
                    "rank " + std::to_string(k) + " exceeds enumeration cap " +
                        std::to_string(limits.max_rank));
    std::vector<IntVec> reduced = b.vectors();
    linalg::lll_reduce(reduced);
    IntMat gram = linalg::gram_matrix(reduced);
    Int radius = gram[0][0];
    for (std::size_t i = 1; i < k; ++i) radius = std::max(radius, gram[i][i]);

    std::uint64_t nodes = 0;
    auto shorts = detail::enumerate_short_vectors(gram, radius, limits.node_budget, &nodes);

    struct Candidate {
        IntVec vec;
        std::vector<long> coeffs;
        Int norm_sq;
    };
    std::vector<Candidate> candidates;
    candidates.reserve(shorts.size());
    for (auto& s : shorts) {
        IntVec v = detail::combination(reduced, s.coeffs);
        detail::canonicalize_sign(v, s.coeffs);
        candidates.push_back({std::move(v), std::move(s.coeffs), std::move(s.norm_sq)});
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.norm_sq != b.norm_sq) return a.norm_sq < b.norm_sq;
        return a.vec < b.vec;
    });

    MinimaProfile profile;
    profile.search_radius_sq = radius;
    profile.enumerated_nodes = nodes;
    profile.vectors_in_radius = shorts.size();
    IntMat picked_coeffs;
    for (const Candidate& c : candidates) {
        if (profile.sq_minima.size() == k) break;
        IntVec as_int(c.coeffs.size());
        for (std::size_t i = 0; i < c.coeffs.size(); ++i) as_int[i] = c.coeffs[i];
        IntMat trial = picked_coeffs;
        trial.push_back(as_int);
        if (linalg::rank(trial) != trial.size()) continue;
        picked_coeffs.push_back(std::move(as_int));
        profile.sq_minima.push_back(c.norm_sq);
        profile.witnesses.push_back(c.vec);
    }
    if (profile.sq_minima.size() != k)
        throw Error(ErrorCode::Internal, "enumeration radius failed to span the lattice");
    return profile;
}

inline bool is_esm(const MinimaProfile& m) {
    return m.sq_minima.front() == m.sq_minima.back();
}

struct CoveringRadiusEstimate {
    Rat lower_sq;
    Rat upper_sq;
    std::optional<Rat> exact_sq;
};

// Bracket for the squared covering radius: below by a quarter of the last
// squared minimum, above by Jarnik's half-sum of the minima. The half-sum
// square expands to (sum(l_i^2) + 2 sum(l_i l_j)) / 4 whose cross terms are
// square roots of integers; they are taken as outward enclosures, exact
// whenever the products are perfect squares (notably for equal minima).
inline CoveringRadiusEstimate covering_radius_bounds(const MinimaProfile& m, unsigned bits = 128) {
    const std::size_t k = m.sq_minima.size();
    Rat lower = core::make_rat(m.sq_minima.back(), 4);
    Int diag = 0;
    for (const Int& l : m.sq_minima) diag += l;
    Interval cross = Interval::exact(Rat(0));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            cross = cross + core::sqrt_enclosure(Rat(m.sq_minima[i] * m.sq_minima[j]), bits);
    Interval upper = (Interval::exact(Rat(diag)) + cross.scaled(Rat(2))).scaled(Rat(1, 4));
    return {std::move(lower), upper.hi, std::nullopt};
}

namespace detail {

struct Constraint {
    IntVec gram_times_u;  // G u
    Int u_gram_u;         // u^T G u
};

struct VoronoiResult {
    Rat radius_sq;
    linalg::RatVec deep_hole;  // basis coordinates of a farthest cell vertex
};

// Exact squared covering radius from the Voronoi cell. The cell is cut out
// by the half-spaces 2 <y, v> <= |v|^2 of the minimal vectors of each
// nonzero coset of 2L in L (a superset of the Voronoi-relevant vectors, so
// the intersection is exactly the cell). Its circumradius is attained at a
// vertex, i.e. at a feasible solution of some rank-many tight constraints;
// all candidate systems are solved with integer Cramer elimination.
inline VoronoiResult voronoi_covering_radius_sq(const std::vector<IntVec>& basis,
                                                const Rat& jarnik_upper_sq,
                                                const EnumerationLimits& limits) {
    const std::size_t k = basis.size();
    IntMat gram = linalg::gram_matrix(basis);
    if (k == 1) return {core::make_rat(gram[0][0], 4), {Rat(1, 2)}};

    // every nonzero coset of 2L has a minimal vector of norm <= 2R
    Int radius = core::ceil_rat(4 * jarnik_upper_sq);
    auto shorts = enumerate_short_vectors(gram, radius, limits.node_budget, nullptr);

    std::map<unsigned, std::pair<Int, std::vector<std::vector<long>>>> classes;
    for (const auto& s : shorts) {
        unsigned mask = 0;
        for (std::size_t i = 0; i < k; ++i)
            if (s.coeffs[i] % 2 != 0) mask |= 1u << i;
        if (mask == 0) continue;
        auto it = classes.find(mask);
        if (it == classes.end()) {
            classes.emplace(mask, std::make_pair(s.norm_sq, std::vector<std::vector<long>>{s.coeffs}));
        } else if (s.norm_sq < it->second.first) {
            it->second = {s.norm_sq, {s.coeffs}};
        } else if (s.norm_sq == it->second.first) {
            it->second.second.push_back(s.coeffs);
        }
    }
    if (classes.size() != (1u << k) - 1)
        throw Error(ErrorCode::Internal, "missing coset representative inside 2R ball");

    std::vector<Constraint> constraints;
    for (const auto& [mask, entry] : classes) {
        (void)mask;
        for (const auto& coeffs : entry.second) {
            IntVec gu(k, 0);
            for (std::size_t r = 0; r < k; ++r)
                for (std::size_t c = 0; c < k; ++c)
                    if (coeffs[c] != 0) gu[r] += gram[r][c] * coeffs[c];
            Int ugu = 0;
            for (std::size_t r = 0; r < k; ++r)
                if (coeffs[r] != 0) ugu += gu[r] * coeffs[r];
            constraints.push_back({gu, ugu});
            IntVec neg(k);
            for (std::size_t r = 0; r < k; ++r) neg[r] = -gu[r];
            constraints.push_back({std::move(neg), ugu});
        }
    }

    Rat best(-1);
    linalg::RatVec best_hole;
    std::vector<std::size_t> pick(k);
    auto choose = [&](auto&& self, std::size_t start, std::size_t depth) -> void {
        if (depth == k) {
            IntMat sys(k, IntVec(k));
            IntVec rhs(k);
            for (std::size_t r = 0; r < k; ++r) {
                for (std::size_t c = 0; c < k; ++c) sys[r][c] = 2 * constraints[pick[r]].gram_times_u[c];
                rhs[r] = constraints[pick[r]].u_gram_u;
            }
            auto sol = linalg::solve_cramer(sys, rhs);
            if (!sol) return;
            auto& [num, den] = *sol;
            if (den < 0) {
                for (Int& v : num) v = -v;
                den = -den;
            }
            for (const Constraint& c : constraints) {
                Int lhs = 0;
                for (std::size_t i = 0; i < k; ++i) lhs += c.gram_times_u[i] * num[i];
                if (2 * lhs > c.u_gram_u * den) return;  // outside the cell
            }
            Int norm = 0;
            for (std::size_t r = 0; r < k; ++r)
                for (std::size_t c = 0; c < k; ++c) norm += gram[r][c] * num[r] * num[c];
            Rat vertex_sq = core::make_rat(norm, den * den);
            if (vertex_sq > best) {
                best = vertex_sq;
                best_hole.assign(k, Rat(0));
                for (std::size_t i = 0; i < k; ++i) best_hole[i] = core::make_rat(num[i], den);
            }
            return;
        }
        for (std::size_t i = start; i + (k - depth) <= constraints.size(); ++i) {
            pick[depth] = i;
            self(self, i + 1, depth + 1);
        }
    };
    choose(choose, 0, 0);
    if (best < 0)
        throw Error(ErrorCode::Internal, "Voronoi cell vertex enumeration found no vertex");
    return {best, best_hole};
}

} // namespace detail

// Exact covering radius for rank <= 4 (vertex enumeration cost grows too
// steeply beyond that). The result is checked against the minima bracket.
inline CoveringRadiusEstimate covering_radius_exact(const LatticeBasis& b,
                                                    const EnumerationLimits& limits = {},
                                                    unsigned bits = 128) {
    if (b.rank() > 4)
        throw Error(ErrorCode::RankTooHigh,
                    "exact covering radius restricted to rank <= 4, got rank " +
                        std::to_string(b.rank()));
    MinimaProfile profile = successive_minima(b, limits);
    CoveringRadiusEstimate estimate = covering_radius_bounds(profile, bits);
    std::vector<IntVec> reduced = b.vectors();
    linalg::lll_reduce(reduced);
    detail::VoronoiResult v = detail::voronoi_covering_radius_sq(reduced, estimate.upper_sq, limits);
    if (v.radius_sq < estimate.lower_sq || v.radius_sq > estimate.upper_sq)
        throw Error(ErrorCode::Internal, "exact covering radius escaped the Jarnik bracket");
    estimate.exact_sq = std::move(v.radius_sq);
    return estimate;
}

} // namespace frobshot::lattice
