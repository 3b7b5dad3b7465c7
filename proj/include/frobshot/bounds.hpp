#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "frobshot/errors.hpp"
#include "frobshot/interval.hpp"
#include "frobshot/lattice.hpp"
#include "frobshot/numbers.hpp"
#include "frobshot/reduce.hpp"
#include "frobshot/semigroup.hpp"
#include "frobshot/tuple.hpp"

// Frobenius number bounds. The covering-radius bound and its equal-minima
// specialization are evaluated from exact lattice data; four classical
// upper bounds and one lower bound are provided for comparison. All
// irrational intermediates run through directed enclosures: upper bounds
// only ever round up, lower bounds only ever round down, so a reported
// bound stays valid at every precision.

namespace frobshot::bounds {

using core::Int;
using core::Interval;
using core::NTuple;
using core::Rat;

inline Interval unit_ball_volume(unsigned k, unsigned bits = 128) {
    if (k < 1) throw Error(ErrorCode::TooSmall, "ball dimension must be >= 1");
    return core::ball_volume_enclosure(k, bits);
}

// det of the k x k matrix with diagonal alpha and all off-diagonal ones:
// prod(alpha_i - 1) + sum_i prod_{j != i} (alpha_j - 1).
inline Rat symmetric_det(const std::vector<Rat>& alphas) {
    if (alphas.size() < 2)
        throw Error(ErrorCode::TooSmall, "symmetric determinant needs k >= 2");
    Rat prod = 1;
    for (const Rat& a : alphas) prod *= a - 1;
    Rat sum = 0;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        Rat term = 1;
        for (std::size_t j = 0; j < alphas.size(); ++j)
            if (j != i) term *= alphas[j] - 1;
        sum += term;
    }
    return prod + sum;
}

// sum_i a_i * sqrt(|a|^2 - a_i^2), the weighted face-norm sum shared by the
// covering-radius bounds.
inline Interval weighted_face_sum(const NTuple& a, unsigned bits) {
    Interval s = Interval::exact(Rat(0));
    for (const Int& ai : a.entries())
        s = s + core::sqrt_enclosure(Rat(a.norm_sq() - ai * ai), bits).scaled(Rat(ai));
    return s;
}

// Geometry of the dilated standard simplex sum(a_i x_i) = t, x >= 0:
// volume, surface area (per-face terms), and an isoperimetric lower bound
// for the inradius. Volume and area split into rational coefficients times
// square roots of integers, stored symbolically next to their enclosures.
struct SimplexGeometry {
    Int t;
    Rat vol_coeff;      // volume = vol_coeff * sqrt(vol_radicand)
    Int vol_radicand;   // = |a|^2
    struct AreaTerm {
        Rat coeff;
        Int radicand;   // |a|^2 - a_i^2
    };
    std::vector<AreaTerm> area_terms;
    Interval volume;
    Interval area;
    Interval inradius_lb;  // enclosure of vol/area; .lo is the safe lower bound
};

inline SimplexGeometry simplex_geometry(const NTuple& a, const Int& t, unsigned bits = 128) {
    if (t < 1) throw Error(ErrorCode::TooSmall, "simplex dilation must be >= 1");
    const std::size_t n = a.size();
    const Int product = a.product();

    SimplexGeometry g;
    g.t = t;
    g.vol_radicand = a.norm_sq();
    g.vol_coeff = core::make_rat(core::pow_int(t, n - 1), core::factorial(n - 1) * product);
    g.volume = core::sqrt_enclosure(Rat(g.vol_radicand), bits).scaled(g.vol_coeff);

    Rat area_common = core::make_rat(core::pow_int(t, n - 2), core::factorial(n - 2) * product);
    g.area = Interval::exact(Rat(0));
    for (const Int& ai : a.entries()) {
        SimplexGeometry::AreaTerm term;
        term.coeff = area_common * Rat(ai);
        term.radicand = a.norm_sq() - ai * ai;
        g.area = g.area + core::sqrt_enclosure(Rat(term.radicand), bits).scaled(term.coeff);
        g.area_terms.push_back(std::move(term));
    }
    g.inradius_lb = g.volume / g.area;

    // cross-check: det(W W^T) of the edge matrix, via the symmetric
    // determinant identity, must equal t^(2(N-1)) |a|^2 / prod(a_i)^2
    Rat t_sq_over_a1_sq = core::make_rat(t * t, a[0] * a[0]);
    Rat det_w;
    if (n >= 3) {
        std::vector<Rat> alphas;
        for (std::size_t i = 1; i < n; ++i)
            alphas.push_back(core::make_rat(a[0] * a[0] + a[i] * a[i], a[i] * a[i]));
        Rat scale = 1;
        for (std::size_t i = 0; i + 1 < n; ++i) scale *= t_sq_over_a1_sq;
        det_w = scale * symmetric_det(alphas);
    } else {
        det_w = t_sq_over_a1_sq * core::make_rat(a[0] * a[0] + a[1] * a[1], a[1] * a[1]);
    }
    Rat closed_form = core::make_rat(core::pow_int(t, 2 * (n - 1)) * a.norm_sq(), product * product);
    if (det_w != closed_form)
        throw Error(ErrorCode::Internal, "simplex Gram determinant identity failed");
    return g;
}

// floor((N-1) R / |a| * sum a_i sqrt(|a|^2 - a_i^2) + 1) for an upper
// enclosure r_upper_sq of the squared covering radius; outward rounding
// before the floor keeps it a valid upper bound for the Frobenius number.
inline Int frobenius_bound_main(const NTuple& a, const Rat& r_upper_sq, unsigned bits = 128) {
    if (r_upper_sq < 0) throw Error(ErrorCode::TooSmall, "negative squared radius");
    const unsigned long n = a.size();
    Interval radius = core::sqrt_enclosure(r_upper_sq, bits);
    Interval norm = core::sqrt_enclosure(Rat(a.norm_sq()), bits);
    Interval value = radius.scaled(Rat(n - 1)) * weighted_face_sum(a, bits) / norm;
    return core::floor_rat(value.hi) + 1;
}

// Equal-minima refinement: the covering radius is replaced by the chain
// through Minkowski's second theorem, giving
// floor( (l_last/l_1) (N-1)^2 sum a_i sqrt(|a|^2-a_i^2)
//        / (|a|^(N-2) w_{N-1})^(1/(N-1)) + 1 ).
inline Int frobenius_bound_esm(const NTuple& a, const lattice::MinimaProfile& m,
                               unsigned bits = 128) {
    const unsigned long n = a.size();
    Interval ratio =
        core::sqrt_enclosure(core::make_rat(m.sq_minima.back(), m.sq_minima.front()), bits);
    Interval omega = unit_ball_volume(static_cast<unsigned>(n - 1), bits);
    // (|a|^(N-2) w)^(1/(N-1)) == ((|a|^2)^(N-2) w^2)^(1/(2(N-1)))
    Interval inner = omega.pow(2).scaled(Rat(core::pow_int(a.norm_sq(), n - 2)));
    Interval denom = core::root_enclosure(inner, 2 * (n - 1), bits);
    Interval value =
        ratio.scaled(Rat((n - 1) * (n - 1))) * weighted_face_sum(a, bits) / denom;
    return core::floor_rat(value.hi) + 1;
}

namespace detail {

// floor((N-1)^2 / w_{N-1} * sum a_i sqrt(|a|^2 - a_i^2) + 1); valid as soon
// as the first successive minimum is >= 2, which holds for reduced tuples.
inline Int general_bound_formula(const NTuple& a, unsigned bits) {
    const unsigned long n = a.size();
    Interval omega = unit_ball_volume(static_cast<unsigned>(n - 1), bits);
    Interval value = weighted_face_sum(a, bits).scaled(Rat((n - 1) * (n - 1))) / omega;
    return core::floor_rat(value.hi) + 1;
}

} // namespace detail

inline Int frobenius_bound_general(const NTuple& a, unsigned bits = 128,
                                   const semigroup::Guard& guard = {}) {
    if (a[0] < 3) throw Error(ErrorCode::A1TooSmall, "general bound needs smallest entry >= 3");
    if (!core::is_reduced(a, guard))
        throw Error(ErrorCode::NotReduced, "general bound needs a reduced tuple");
    return detail::general_bound_formula(a, bits);
}

// Exact N = 2 value (an equality, not just a bound).
inline Int bound_sylvester(const Int& a1, const Int& a2) {
    if (a1 < 2) throw Error(ErrorCode::TooSmall, "need 1 < a1");
    if (a2 <= a1) throw Error(ErrorCode::OrderViolation, "need a1 < a2");
    if (gcd(a1, a2) != 1) throw Error(ErrorCode::NotCoprime, "pair is not coprime");
    return (a1 - 1) * (a2 - 1) - 1;
}

enum class BdrMode { FirstThree, BestTriple };

namespace detail {

inline Interval bdr_triple_value(const Int& x, const Int& y, const Int& z, unsigned bits) {
    Int sum = x + y + z;
    Interval root = core::sqrt_enclosure(Rat(x * y * z * sum), bits);
    return (root - Interval::exact(Rat(sum))).scaled(Rat(1, 2));
}

} // namespace detail

// Triple bound 1/2 (sqrt(a_i a_j a_k (a_i+a_j+a_k)) - a_i - a_j - a_k).
// FirstThree applies it to the three smallest entries; BestTriple minimizes
// over every coprime triple. Valid because adding generators never raises
// the Frobenius number.
inline Int bound_bdr(const NTuple& a, BdrMode mode = BdrMode::FirstThree, unsigned bits = 128) {
    if (a.size() < 3) throw Error(ErrorCode::TooSmall, "triple bound needs N >= 3");
    if (mode == BdrMode::FirstThree) {
        if (gcd(gcd(a[0], a[1]), a[2]) != 1)
            throw Error(ErrorCode::NoCoprimeTriple, "first three entries are not coprime");
        return core::floor_rat(detail::bdr_triple_value(a[0], a[1], a[2], bits).hi);
    }
    std::optional<Rat> best;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j)
            for (std::size_t k = j + 1; k < a.size(); ++k) {
                if (gcd(gcd(a[i], a[j]), a[k]) != 1) continue;
                Rat hi = detail::bdr_triple_value(a[i], a[j], a[k], bits).hi;
                if (!best || hi < *best) best = hi;
            }
    if (!best) throw Error(ErrorCode::NoCoprimeTriple, "no coprime triple in " + a.str());
    return core::floor_rat(*best);
}

inline Int bound_erdos_graham(const NTuple& a) {
    Int floor_term = a[0] / static_cast<unsigned long>(a.size());
    return 2 * a.back() * floor_term - a[0];
}

inline Int bound_selmer(const NTuple& a) {
    Int floor_term = a.back() / static_cast<unsigned long>(a.size());
    return 2 * a[a.size() - 2] * floor_term - a.back();
}

inline Int bound_vitek(const NTuple& a) {
    Int num = (a[1] - 1) * (a.back() - 2);
    return num / 2 - 1;
}

// ((N-1)! prod a_i)^(1/(N-1)) - sum a_i as an enclosure; the reported value
// is the lower endpoint, so the strict lower bound is never over-stated.
inline Interval lower_bound_aliev_gruber_enclosure(const NTuple& a, unsigned bits = 128) {
    const unsigned long n = a.size();
    Interval root =
        core::root_enclosure(Rat(core::factorial(n - 1) * a.product()), n - 1, bits);
    return root - Interval::exact(Rat(a.sum()));
}

inline Rat lower_bound_aliev_gruber(const NTuple& a, unsigned bits = 128) {
    return lower_bound_aliev_gruber_enclosure(a, bits).lo;
}

// Minimum over the four literature upper bounds, with the name of the
// winner. The triple bound uses the first-three convention here.
inline std::pair<std::string, Int> min_literature_bound(const NTuple& a, unsigned bits = 128) {
    std::vector<std::pair<std::string, Int>> values;
    if (a.size() >= 3) {
        try {
            values.emplace_back("bdr", bound_bdr(a, BdrMode::FirstThree, bits));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NoCoprimeTriple) throw;
        }
    }
    values.emplace_back("erdos_graham", bound_erdos_graham(a));
    values.emplace_back("selmer", bound_selmer(a));
    values.emplace_back("vitek", bound_vitek(a));
    auto best = values.begin();
    for (auto it = values.begin(); it != values.end(); ++it)
        if (it->second < best->second) best = it;
    return *best;
}

enum class BoundKind { Upper, Lower, Exact };

struct BoundEntry {
    std::string name;
    Rat value;
    BoundKind kind = BoundKind::Upper;
    bool applicable = true;
    bool computed = true;  // false when the value slot is a placeholder
    std::string note;
};

struct BoundReport {
    NTuple tuple;
    std::vector<BoundEntry> entries;
    std::optional<semigroup::FrobeniusResult> exact;
    std::string exact_note;
    // lattice context the report was built from, for callers that want it
    std::optional<lattice::MinimaProfile> minima;
    std::optional<lattice::CoveringRadiusEstimate> covering;
};

struct ReportOptions {
    bool with_exact = false;
    unsigned bits = 128;
    BdrMode bdr_mode = BdrMode::FirstThree;
    std::size_t exact_cover_max_rank = 3;  // Voronoi vertex cost grows fast with rank
    semigroup::Guard guard{};
    lattice::EnumerationLimits limits{};
};

// Evaluates every applicable bound plus, on request, the exact oracle.
// When the exact value is present, a literature bound that falls below it
// is flagged inapplicable rather than silently trusted (its hypotheses were
// evidently not met); the covering-radius bounds are theorem-backed for
// every valid input, so falling below exact there is an internal error.
inline BoundReport bound_report(const NTuple& a, const ReportOptions& opts = {}) {
    BoundReport report{a, {}, std::nullopt, "", std::nullopt, std::nullopt};
    const std::size_t n = a.size();

    if (opts.with_exact) {
        try {
            report.exact = semigroup::frobenius_exact(a, opts.guard);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::ModulusTooLarge) throw;
            report.exact_note = e.what();
        }
    }

    lattice::LatticeBasis basis = lattice::null_lattice_basis(a);
    lattice::MinimaProfile profile = lattice::successive_minima(basis, opts.limits);
    lattice::CoveringRadiusEstimate cover = lattice::covering_radius_bounds(profile, opts.bits);
    if (basis.rank() <= std::min<std::size_t>(4, opts.exact_cover_max_rank))
        cover = lattice::covering_radius_exact(basis, opts.limits, opts.bits);

    auto add = [&](BoundEntry e) { report.entries.push_back(std::move(e)); };

    if (n == 2) {
        Int sylv = bound_sylvester(a[0], a[1]);
        if (report.exact && report.exact->value != sylv)
            throw Error(ErrorCode::Internal, "oracle disagrees with the N=2 closed form");
        add({"sylvester", Rat(sylv), BoundKind::Exact, true, true, "closed form, exact for N=2"});
    }

    add({"main_jarnik", Rat(frobenius_bound_main(a, cover.upper_sq, opts.bits)),
         BoundKind::Upper, true, true, "covering radius bounded via Jarnik's inequality"});
    if (cover.exact_sq)
        add({"main_exact_cover", Rat(frobenius_bound_main(a, *cover.exact_sq, opts.bits)),
             BoundKind::Upper, true, true, "exact covering radius from the Voronoi cell"});
    add({"esm", Rat(frobenius_bound_esm(a, profile, opts.bits)), BoundKind::Upper, true, true,
         lattice::is_esm(profile) ? "equal successive minima" : ""});

    if (a[0] < 3) {
        add({"general", Rat(0), BoundKind::Upper, false, false, "needs smallest entry >= 3"});
    } else if (profile.sq_minima.front() < 4) {
        add({"general", Rat(0), BoundKind::Upper, false, false,
             "first successive minimum below 2 (tuple is not reduced)"});
    } else {
        // lambda_1 >= 2 is the consequence of reducedness the bound rests on,
        // and it is certified by the computed minima even when the smallest
        // entry exceeds the oracle guard.
        add({"general", Rat(detail::general_bound_formula(a, opts.bits)), BoundKind::Upper,
             true, true, ""});
    }

    if (n >= 3) {
        try {
            add({opts.bdr_mode == BdrMode::FirstThree ? "bdr" : "bdr_best_triple",
                 Rat(bound_bdr(a, opts.bdr_mode, opts.bits)), BoundKind::Upper, true, true, ""});
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NoCoprimeTriple) throw;
            add({"bdr", Rat(0), BoundKind::Upper, false, false, e.what()});
        }
    } else {
        add({"bdr", Rat(0), BoundKind::Upper, false, false, "needs N >= 3"});
    }

    {
        BoundEntry erd{"erdos_graham", Rat(bound_erdos_graham(a)), BoundKind::Upper, true, true, ""};
        if (a[0] / static_cast<unsigned long>(n) == 0)
            erd.note = "warning: floor(a_1/N) = 0, hypothesis not met";
        add(std::move(erd));
    }
    add({"selmer", Rat(bound_selmer(a)), BoundKind::Upper, true, true, ""});
    {
        BoundEntry vit{"vitek", Rat(bound_vitek(a)), BoundKind::Upper, true, true, ""};
        if (n == 2) vit.note = "warning: applicability for N = 2 unclear";
        add(std::move(vit));
    }

    {
        Interval ag = lower_bound_aliev_gruber_enclosure(a, opts.bits);
        char approx[64];
        std::snprintf(approx, sizeof approx, "%.6f", ag.lo.get_d());
        BoundEntry entry{"aliev_gruber_lower", ag.lo, BoundKind::Lower, true, true,
                         std::string("strict lower bound, ~") + approx};
        if (report.exact) {
            Rat f(report.exact->value);
            if (f > ag.hi) {
                entry.note += "; strictness verified";
            } else if (f <= ag.lo) {
                entry.applicable = false;
                entry.note += "; strict inequality fails for this tuple";
            } else {
                entry.note += "; equality boundary, strictness undetermined";
            }
        }
        add(std::move(entry));
    }

    if (report.exact) {
        Rat f(report.exact->value);
        for (BoundEntry& e : report.entries) {
            if (e.kind != BoundKind::Upper || !e.applicable || !e.computed) continue;
            if (e.value < f) {
                if (e.name.rfind("main", 0) == 0 || e.name == "esm" || e.name == "general")
                    throw Error(ErrorCode::Internal,
                                "covering-radius bound " + e.name + " fell below the exact value");
                e.applicable = false;
                e.note += std::string(e.note.empty() ? "" : "; ") +
                          "below exact Frobenius number, hypotheses not satisfied";
            }
        }
    }

    std::sort(report.entries.begin(), report.entries.end(),
              [](const BoundEntry& x, const BoundEntry& y) { return x.name < y.name; });
    report.minima = std::move(profile);
    report.covering = std::move(cover);
    return report;
}

} // namespace frobshot::bounds
