#include <catch2/catch.hpp>

#include <algorithm>
#include <random>
#include <thread>
#include <vector>

#include "frobshot/lattice.hpp"
#include "frobshot/random.hpp"

using namespace frobshot;
using core::Int;
using core::NTuple;
using core::Rat;
using linalg::IntVec;

namespace {

NTuple tuple_of(std::vector<long> raw) {
    std::vector<Int> v(raw.begin(), raw.end());
    return core::validate_tuple(std::move(v));
}

// Brute-force successive minima: every integer vector in the box of
// half-width `width` that is orthogonal to the tuple, greedy by norm.
std::vector<Int> box_minima(const NTuple& a, long width) {
    const std::size_t n = a.size();
    std::vector<std::pair<Int, IntVec>> in_lattice;
    IntVec x(n, 0);
    auto scan = [&](auto&& self, std::size_t pos) -> void {
        if (pos == n) {
            Int l = 0;
            for (std::size_t i = 0; i < n; ++i) l += a[i] * x[i];
            if (l != 0) return;
            Int norm = linalg::norm_sq(x);
            if (norm > 0) in_lattice.emplace_back(norm, x);
            return;
        }
        for (long v = -width; v <= width; ++v) {
            x[pos] = v;
            self(self, pos + 1);
        }
    };
    scan(scan, 0);
    std::sort(in_lattice.begin(), in_lattice.end());
    std::vector<Int> minima;
    linalg::IntMat picked;
    for (auto& [norm, vec] : in_lattice) {
        if (minima.size() + 1 == n) break;
        linalg::IntMat trial = picked;
        trial.push_back(vec);
        if (linalg::rank(trial) != trial.size()) continue;
        picked.push_back(vec);
        minima.push_back(norm);
    }
    return minima;
}

// Distance from a rational point (in basis coordinates) to the lattice, by
// scanning integer coefficient vectors around it.
Rat cvp_distance_sq(const std::vector<IntVec>& basis, const linalg::RatVec& point, long margin = 3) {
    const std::size_t k = basis.size();
    linalg::IntMat gram = linalg::gram_matrix(basis);
    std::vector<Int> base(k);
    for (std::size_t i = 0; i < k; ++i) base[i] = core::floor_rat(point[i]);
    std::vector<Int> u(k);
    Rat best(-1);
    auto scan = [&](auto&& self, std::size_t pos) -> void {
        if (pos == k) {
            Rat d(0);
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = 0; j < k; ++j)
                    d += (Rat(u[i]) - point[i]) * (Rat(u[j]) - point[j]) * Rat(gram[i][j]);
            if (best < 0 || d < best) best = d;
            return;
        }
        for (long off = -margin; off <= margin; ++off) {
            u[pos] = base[pos] + off;
            self(self, pos + 1);
        }
    };
    scan(scan, 0);
    return best;
}

} // namespace

TEST_CASE("kernel basis determinant identities") {
    auto b357 = lattice::null_lattice_basis(tuple_of({3, 5, 7}));
    CHECK(lattice::lattice_determinant_sq(b357) == 83);

    auto b23 = lattice::null_lattice_basis(tuple_of({2, 3}));
    CHECK(lattice::lattice_determinant_sq(b23) == 13);

    auto family = lattice::null_lattice_basis(tuple_of({9337, 9961, 11593, 67367}));
    Int expect = Int(9337) * 9337 + Int(9961) * 9961 + Int(11593) * 11593 + Int(67367) * 67367;
    CHECK(lattice::lattice_determinant_sq(family) == expect);
}

TEST_CASE("Grassmann coordinates recover the tuple with alternating signs") {
    for (auto raw : std::vector<std::vector<long>>{{3, 5, 7}, {2, 3}, {9337, 9961, 11593, 67367},
                                                   {6, 9, 20}, {5, 7, 9, 11}}) {
        NTuple a = tuple_of(raw);
        auto b = lattice::null_lattice_basis(a);
        auto g = lattice::grassmann_coords(b);
        REQUIRE(g.coords.size() == a.size());
        const std::size_t n = a.size();
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(abs(g.coords[i]) == a[i]);
            // sign pattern (-1)^(N+1-i) with 1-based i
            Int expected = ((n - i) % 2 == 0) ? a[i] : Int(-a[i]);
            CHECK(g.coords[i] == expected);
        }
        Int sq_sum = 0, coord_gcd = 0;
        for (const Int& c : g.coords) {
            sq_sum += c * c;
            coord_gcd = gcd(coord_gcd, c);
        }
        CHECK(sq_sum == a.norm_sq());
        CHECK(coord_gcd == 1);
    }
}

TEST_CASE("degenerate and mismatched bases are rejected") {
    NTuple a = tuple_of({3, 5, 7});
    // dependent columns
    try {
        lattice::LatticeBasis::from_vectors(a, {{Int(1), Int(-2), Int(1)}, {Int(2), Int(-4), Int(2)}});
        FAIL("expected DegenerateBasis");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DegenerateBasis);
    }
    // not orthogonal to the tuple
    CHECK_THROWS_AS(lattice::LatticeBasis::from_vectors(a, {{Int(1), Int(0), Int(0)}, {Int(0), Int(1), Int(0)}}),
                    Error);
    // proper sublattice: doubled kernel vector
    auto good = lattice::null_lattice_basis(a).vectors();
    auto doubled = good;
    for (Int& v : doubled[0]) v *= 2;
    try {
        lattice::LatticeBasis::from_vectors(a, doubled);
        FAIL("expected BasisMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::BasisMismatch);
    }
}

TEST_CASE("successive minima of (3,5,7) match the box oracle") {
    NTuple a = tuple_of({3, 5, 7});
    auto profile = lattice::successive_minima(lattice::null_lattice_basis(a));
    auto oracle = box_minima(a, 10);
    REQUIRE(profile.sq_minima.size() == oracle.size());
    CHECK(profile.sq_minima == oracle);
    CHECK(profile.sq_minima[0] == 6);
    CHECK(profile.sq_minima[1] == 14);
    for (const auto& w : profile.witnesses) {
        CHECK(linalg::dot(a.entries(), w) == 0);
    }
    for (std::size_t i = 0; i < profile.witnesses.size(); ++i)
        CHECK(linalg::norm_sq(profile.witnesses[i]) == profile.sq_minima[i]);
}

TEST_CASE("minima agree with the box oracle on small random tuples") {
    std::mt19937_64 rng(31337);
    std::uniform_int_distribution<long> pick(2, 15);
    int done = 0;
    while (done < 25) {
        std::vector<long> raw{pick(rng), pick(rng), pick(rng)};
        if (done % 2 == 1) raw.push_back(pick(rng));
        NTuple a = [&]() -> NTuple {
            try {
                return tuple_of(raw);
            } catch (const Error&) {
                return tuple_of({3, 5, 7});
            }
        }();
        if (a.norm_sq() > 500) continue;
        auto profile = lattice::successive_minima(lattice::null_lattice_basis(a));
        CHECK(profile.sq_minima == box_minima(a, 10));
        ++done;
    }
}

TEST_CASE("the family row reproduces equal minima 1802") {
    NTuple a = tuple_of({9337, 9961, 11593, 67367});
    auto profile = lattice::successive_minima(lattice::null_lattice_basis(a));
    REQUIRE(profile.sq_minima.size() == 3);
    CHECK(profile.sq_minima[0] == 1802);
    CHECK(profile.sq_minima[1] == 1802);
    CHECK(profile.sq_minima[2] == 1802);
    CHECK(lattice::is_esm(profile));
}

TEST_CASE("reduced tuples have first minimum at least 2") {
    std::mt19937_64 rng(4096);
    core::TupleSamplerParams params;
    params.max_last = 800;
    for (int it = 0; it < 12; ++it) {
        NTuple a = core::sample_reduced_tuple(rng, params);
        auto profile = lattice::successive_minima(lattice::null_lattice_basis(a));
        CHECK(profile.sq_minima.front() >= 4);
    }
}

TEST_CASE("minima are basis independent") {
    NTuple a = tuple_of({9337, 9961, 11593, 67367});
    auto raw_kernel = linalg::kernel_of_form(a.entries());
    auto from_raw =
        lattice::successive_minima(lattice::LatticeBasis::from_vectors(a, raw_kernel));
    auto from_reduced = lattice::successive_minima(lattice::null_lattice_basis(a));
    CHECK(from_raw.sq_minima == from_reduced.sq_minima);
    CHECK(from_raw.witnesses == from_reduced.witnesses);

    // a unimodular mix of the basis is still the same lattice
    auto mixed = raw_kernel;
    for (std::size_t c = 0; c < mixed[0].size(); ++c) mixed[0][c] += 3 * mixed[1][c] - mixed[2][c];
    auto from_mixed = lattice::successive_minima(lattice::LatticeBasis::from_vectors(a, mixed));
    CHECK(from_mixed.sq_minima == from_reduced.sq_minima);
    CHECK(from_mixed.witnesses == from_reduced.witnesses);
}

TEST_CASE("Minkowski second theorem holds for computed minima") {
    std::mt19937_64 rng(777);
    core::TupleSamplerParams params;
    params.sizes = {3, 4};
    params.max_last = 2000;
    for (int it = 0; it < 10; ++it) {
        NTuple a = core::sample_reduced_tuple(rng, params);
        auto profile = lattice::successive_minima(lattice::null_lattice_basis(a));
        const unsigned k = static_cast<unsigned>(profile.sq_minima.size());
        // prod(lambda_i)^2 <= (2^(N-1) |a| / w_{N-1})^2, compared via
        // squared quantities with the ball volume rounded inward
        Int prod_sq = 1;
        for (const Int& l : profile.sq_minima) prod_sq *= l;
        core::Interval omega = core::ball_volume_enclosure(k, 128);
        Rat rhs = Rat(core::pow_int(4, k) * a.norm_sq()) / (omega.lo * omega.lo);
        CHECK(Rat(prod_sq) <= rhs);
    }
}

TEST_CASE("enumeration guards") {
    NTuple a = tuple_of({9337, 9961, 11593, 67367});
    auto basis = lattice::null_lattice_basis(a);
    lattice::EnumerationLimits tiny;
    tiny.node_budget = 3;
    CHECK_THROWS_AS(lattice::successive_minima(basis, tiny), Error);
    lattice::EnumerationLimits low_rank;
    low_rank.max_rank = 2;
    try {
        lattice::successive_minima(basis, low_rank);
        FAIL("expected budget error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EnumerationBudgetExceeded);
    }
}

TEST_CASE("covering radius bracket from minima") {
    lattice::MinimaProfile p;
    p.sq_minima = {Int(4), Int(4), Int(4)};
    auto est = lattice::covering_radius_bounds(p);
    CHECK(est.lower_sq == 1);
    CHECK(est.upper_sq == 9);

    lattice::MinimaProfile esm;
    esm.sq_minima = {Int(1802), Int(1802), Int(1802)};
    auto est2 = lattice::covering_radius_bounds(esm);
    CHECK(est2.upper_sq == core::make_rat(8109, 2));  // (3 sqrt(1802) / 2)^2 exactly
    CHECK(est2.lower_sq == core::make_rat(1802, 4));

    lattice::MinimaProfile rank1;
    rank1.sq_minima = {Int(13)};
    auto est3 = lattice::covering_radius_bounds(rank1);
    CHECK(est3.lower_sq == est3.upper_sq);
    CHECK(est3.lower_sq == core::make_rat(13, 4));

    // coarser precision only widens the bracket
    lattice::MinimaProfile mixed;
    mixed.sq_minima = {Int(6), Int(14)};
    auto coarse = lattice::covering_radius_bounds(mixed, 24);
    auto fine = lattice::covering_radius_bounds(mixed, 160);
    CHECK(coarse.lower_sq == fine.lower_sq);
    CHECK(coarse.upper_sq >= fine.upper_sq);
}

TEST_CASE("exact covering radius: rank 1 is half the generator") {
    NTuple a = tuple_of({2, 3});
    auto est = lattice::covering_radius_exact(lattice::null_lattice_basis(a));
    REQUIRE(est.exact_sq.has_value());
    CHECK(*est.exact_sq == core::make_rat(13, 4));
}

TEST_CASE("exact covering radius: synthetic square lattices") {
    // Z^2 has covering radius sqrt(2)/2, the scaled square lattice scales it
    std::vector<IntVec> unit{{Int(1), Int(0)}, {Int(0), Int(1)}};
    auto r = lattice::detail::voronoi_covering_radius_sq(unit, Rat(1), {});
    CHECK(r.radius_sq == core::make_rat(1, 2));

    std::vector<IntVec> scaled{{Int(3), Int(0)}, {Int(0), Int(3)}};
    auto r3 = lattice::detail::voronoi_covering_radius_sq(scaled, Rat(9), {});
    CHECK(r3.radius_sq == core::make_rat(9, 2));

    // skew check: the deep hole distance is confirmed by closest vector scan
    std::vector<IntVec> skew{{Int(2), Int(0)}, {Int(1), Int(2)}};
    auto rs = lattice::detail::voronoi_covering_radius_sq(skew, Rat(4), {});
    CHECK(cvp_distance_sq(skew, rs.deep_hole) == rs.radius_sq);
}

TEST_CASE("exact covering radius sits inside the bracket and is attained") {
    for (auto raw : std::vector<std::vector<long>>{{3, 5, 7}, {5, 7, 9, 11}, {6, 9, 20},
                                                   {9337, 9961, 11593, 67367}}) {
        NTuple a = tuple_of(raw);
        auto basis = lattice::null_lattice_basis(a);
        auto profile = lattice::successive_minima(basis);
        auto bracket = lattice::covering_radius_bounds(profile);
        auto est = lattice::covering_radius_exact(basis);
        REQUIRE(est.exact_sq.has_value());
        CHECK(*est.exact_sq >= bracket.lower_sq);
        CHECK(*est.exact_sq <= bracket.upper_sq);
        CHECK(*est.exact_sq >= core::make_rat(profile.sq_minima.back(), 4));

        // the reported radius is a genuine distance to the lattice
        std::vector<IntVec> reduced = basis.vectors();
        linalg::lll_reduce(reduced);
        auto v = lattice::detail::voronoi_covering_radius_sq(reduced, bracket.upper_sq, {});
        CHECK(cvp_distance_sq(reduced, v.deep_hole) == v.radius_sq);
    }
}

TEST_CASE("no sampled point is farther from the lattice than the covering radius") {
    for (auto raw : std::vector<std::vector<long>>{{3, 5, 7}, {5, 7, 9, 11}}) {
        NTuple a = tuple_of(raw);
        auto basis = lattice::null_lattice_basis(a);
        auto est = lattice::covering_radius_exact(basis);
        REQUIRE(est.exact_sq.has_value());
        std::vector<IntVec> reduced = basis.vectors();
        linalg::lll_reduce(reduced);
        const std::size_t k = reduced.size();
        // grid over the fundamental domain in basis coordinates
        const long grid = k == 2 ? 7 : 4;
        std::vector<long> idx(k, 0);
        auto scan = [&](auto&& self, std::size_t pos) -> void {
            if (pos == k) {
                linalg::RatVec point(k);
                for (std::size_t i = 0; i < k; ++i) point[i] = core::make_rat(idx[i], grid);
                CHECK(cvp_distance_sq(reduced, point) <= *est.exact_sq);
                return;
            }
            for (long v = 0; v < grid; ++v) {
                idx[pos] = v;
                self(self, pos + 1);
            }
        };
        scan(scan, 0);
    }
}

TEST_CASE("exact covering radius: rank 4") {
    NTuple a = tuple_of({5, 7, 9, 11, 13});
    auto est = lattice::covering_radius_exact(lattice::null_lattice_basis(a));
    REQUIRE(est.exact_sq.has_value());
    CHECK(*est.exact_sq >= est.lower_sq);
    CHECK(*est.exact_sq <= est.upper_sq);
}

TEST_CASE("exact covering radius refuses rank above 4") {
    NTuple a = tuple_of({7, 11, 13, 17, 19, 23});
    try {
        lattice::covering_radius_exact(lattice::null_lattice_basis(a));
        FAIL("expected RankTooHigh");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::RankTooHigh);
        CHECK(e.exit_class() == 3);
    }
}

TEST_CASE("concurrent calls produce identical results") {
    NTuple a = tuple_of({9337, 9961, 11593, 67367});
    auto reference = lattice::successive_minima(lattice::null_lattice_basis(a));
    std::vector<std::thread> workers;
    std::vector<lattice::MinimaProfile> results(8);
    for (int i = 0; i < 8; ++i)
        workers.emplace_back([&, i] {
            results[i] = lattice::successive_minima(lattice::null_lattice_basis(a));
        });
    for (auto& w : workers) w.join();
    for (const auto& r : results) {
        CHECK(r.sq_minima == reference.sq_minima);
        CHECK(r.witnesses == reference.witnesses);
    }
}

TEST_CASE("equal minima predicate") {
    lattice::MinimaProfile p1;
    p1.sq_minima = {Int(1802), Int(1802), Int(1802)};
    CHECK(lattice::is_esm(p1));
    lattice::MinimaProfile p2;
    p2.sq_minima = {Int(4), Int(4), Int(9)};
    CHECK_FALSE(lattice::is_esm(p2));
    lattice::MinimaProfile p3;
    p3.sq_minima = {Int(5)};
    CHECK(lattice::is_esm(p3));
}
