#pragma once

#include <cstddef>
#include <optional>
#include <queue>
#include <utility>
#include <vector>

#include "frobshot/errors.hpp"
#include "frobshot/numbers.hpp"
#include "frobshot/tuple.hpp"

// Exact Frobenius oracle via shortest paths on the residue graph modulo the
// smallest entry. The vertex set is Z/a_1, an edge r -> r + a_j (mod a_1)
// costs a_j, and the distance d(r) from 0 is the smallest integer in residue
// class r representable as a non-negative combination of the entries. Then
// t is representable iff t >= d(t mod a_1), and F = max_r d(r) - a_1.
//
// Dijkstra keeps the cost at O(a_1 N log a_1) independent of the magnitude
// of F, and the construction shares nothing with the bound formulas, so it
// can serve as their independent check.

namespace frobshot::semigroup {

using core::Int;
using core::NTuple;

struct Guard {
    unsigned long max_modulus = 10'000'000;
};

struct AperyProfile {
    Int modulus;                  // a_1
    std::vector<Int> thresholds;  // d(r) for r = 0 .. a_1 - 1
};

struct FrobeniusResult {
    Int value;            // F
    Int witness_residue;  // smallest residue attaining max d(r)
};

namespace detail {

struct ShortestPaths {
    unsigned long modulus = 0;
    std::vector<std::optional<Int>> dist;
    // parent[r] = (previous residue, index of the entry used); -1 entry index at source.
    std::vector<std::pair<unsigned long, long>> parent;
};

inline unsigned long checked_modulus(const std::vector<Int>& entries, const Guard& guard) {
    if (entries.empty()) throw Error(ErrorCode::Internal, "empty entry list");
    const Int& first = entries.front();
    if (!first.fits_ulong_p() || first.get_ui() > guard.max_modulus)
        throw Error(ErrorCode::ModulusTooLarge,
                    "smallest entry " + core::to_string(first) + " exceeds guard " +
                        std::to_string(guard.max_modulus));
    return first.get_ui();
}

// entries must be positive and ascending; coprimality is not required here
// (prefixes used by tuple reduction may have gcd > 1), so unreachable
// residues simply stay unset.
inline ShortestPaths residue_shortest_paths(const std::vector<Int>& entries, const Guard& guard) {
    ShortestPaths sp;
    sp.modulus = checked_modulus(entries, guard);
    sp.dist.assign(sp.modulus, std::nullopt);
    sp.parent.assign(sp.modulus, {0, -1});

    std::vector<unsigned long> steps;   // a_j mod a_1 for j >= 1
    std::vector<std::size_t> step_idx;  // index into entries
    for (std::size_t j = 1; j < entries.size(); ++j) {
        Int m = entries[j] % static_cast<unsigned long>(sp.modulus);
        steps.push_back(m.get_ui());
        step_idx.push_back(j);
    }

    using Node = std::pair<Int, unsigned long>;
    auto cmp = [](const Node& a, const Node& b) { return a.first > b.first; };
    std::priority_queue<Node, std::vector<Node>, decltype(cmp)> queue(cmp);
    sp.dist[0] = Int(0);
    queue.push({Int(0), 0});
    while (!queue.empty()) {
        auto [d, r] = queue.top();
        queue.pop();
        if (!sp.dist[r] || *sp.dist[r] < d) continue;
        for (std::size_t e = 0; e < steps.size(); ++e) {
            unsigned long next = r + steps[e];
            if (next >= sp.modulus) next -= sp.modulus;
            Int nd = d + entries[step_idx[e]];
            if (!sp.dist[next] || nd < *sp.dist[next]) {
                sp.dist[next] = nd;
                sp.parent[next] = {r, static_cast<long>(step_idx[e])};
                queue.push({std::move(nd), next});
            }
        }
    }
    return sp;
}

} // namespace detail

inline AperyProfile apery_profile(const NTuple& a, const Guard& guard = {}) {
    auto sp = detail::residue_shortest_paths(a.entries(), guard);
    AperyProfile profile;
    profile.modulus = a.front();
    profile.thresholds.reserve(sp.modulus);
    for (unsigned long r = 0; r < sp.modulus; ++r) {
        if (!sp.dist[r])
            throw Error(ErrorCode::Internal, "unreachable residue in coprime tuple " + a.str());
        profile.thresholds.push_back(*sp.dist[r]);
    }
    return profile;
}

inline FrobeniusResult frobenius_exact(const NTuple& a, const Guard& guard = {}) {
    AperyProfile profile = apery_profile(a, guard);
    std::size_t arg = 0;
    for (std::size_t r = 1; r < profile.thresholds.size(); ++r)
        if (profile.thresholds[r] > profile.thresholds[arg]) arg = r;
    return {profile.thresholds[arg] - a.front(), Int(static_cast<unsigned long>(arg))};
}

inline bool is_representable(const NTuple& a, const Int& t, const Guard& guard = {}) {
    if (t < 0) return false;
    AperyProfile profile = apery_profile(a, guard);
    Int r = t % a.front();
    return t >= profile.thresholds[r.get_ui()];
}

// Non-negative coefficients x with sum(entries[i] * x[i]) == t, or nullopt.
// Works on arbitrary ascending positive entry lists (gcd may exceed 1).
inline std::optional<std::vector<Int>> representation(const std::vector<Int>& entries, const Int& t,
                                                      const Guard& guard = {}) {
    if (t < 0) return std::nullopt;
    auto sp = detail::residue_shortest_paths(entries, guard);
    unsigned long r = Int(t % static_cast<unsigned long>(sp.modulus)).get_ui();
    if (!sp.dist[r] || *sp.dist[r] > t) return std::nullopt;
    std::vector<Int> coeffs(entries.size(), 0);
    unsigned long cur = r;
    while (cur != 0) {
        auto [prev, idx] = sp.parent[cur];
        coeffs[static_cast<std::size_t>(idx)] += 1;
        cur = prev;
    }
    Int used = *sp.dist[r];
    coeffs[0] = (t - used) / entries.front();
    return coeffs;
}

} // namespace frobshot::semigroup
