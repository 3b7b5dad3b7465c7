#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "frobshot/reduce.hpp"
#include "frobshot/tuple.hpp"

// Deterministic sampling of reduced coprime tuples for sweeps and property
// tests. Same seed, same stream.

namespace frobshot::core {

struct TupleSamplerParams {
    std::vector<std::size_t> sizes{3, 4, 5};
    long min_first = 3;
    long max_first = 200;
    long max_last = 5000;
};

// Rejection sampling: draw the smallest entry, then distinct larger
// entries, keep the tuple only if it is coprime and already reduced.
inline NTuple sample_reduced_tuple(std::mt19937_64& rng, const TupleSamplerParams& params = {}) {
    std::uniform_int_distribution<std::size_t> size_pick(0, params.sizes.size() - 1);
    std::uniform_int_distribution<long> first_pick(params.min_first, params.max_first);
    for (;;) {
        std::size_t n = params.sizes[size_pick(rng)];
        long first = first_pick(rng);
        std::uniform_int_distribution<long> rest_pick(first + 1, params.max_last);
        std::set<long> rest;
        while (rest.size() + 1 < n) rest.insert(rest_pick(rng));
        std::vector<Int> entries{Int(first)};
        for (long v : rest) entries.emplace_back(v);
        std::optional<NTuple> candidate;
        try {
            candidate = NTuple::validate(entries);
        } catch (const Error&) {
            continue;  // not coprime; resample
        }
        if (!is_reduced(*candidate)) continue;
        return *candidate;
    }
}

} // namespace frobshot::core
