#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "frobshot/semigroup.hpp"
#include "frobshot/tuple.hpp"

namespace frobshot::core {

// One eliminated entry: a[index] equals the non-negative combination of the
// earlier entries given by witness (aligned with the original prefix
// a[0..index-1]; positions of previously removed entries carry zero).
struct RemovedEntry {
    std::size_t index;
    Int value;
    std::vector<Int> witness;
};

struct ReductionResult {
    NTuple reduced;
    std::vector<RemovedEntry> removed;
};

// Eliminates every entry representable by its predecessors; dropping such an
// entry leaves the Frobenius number unchanged. The scan runs left to right
// and removes greedily, testing each entry against the kept prefix only;
// since a removed entry is itself a combination of kept ones, membership in
// the kept prefix agrees with membership in the full original prefix.
inline ReductionResult reduce_tuple(const NTuple& a, const semigroup::Guard& guard = {}) {
    std::vector<Int> kept{a[0]};
    std::vector<std::size_t> kept_original_index{0};
    std::vector<RemovedEntry> removed;
    for (std::size_t i = 1; i < a.size(); ++i) {
        auto coeffs = semigroup::representation(kept, a[i], guard);
        if (coeffs) {
            std::vector<Int> witness(i, 0);
            for (std::size_t k = 0; k < kept.size(); ++k)
                witness[kept_original_index[k]] = (*coeffs)[k];
            removed.push_back({i, a[i], std::move(witness)});
        } else {
            kept.push_back(a[i]);
            kept_original_index.push_back(i);
        }
    }
    return {NTuple::validate(std::move(kept)), std::move(removed)};
}

inline bool is_reduced(const NTuple& a, const semigroup::Guard& guard = {}) {
    return reduce_tuple(a, guard).removed.empty();
}

} // namespace frobshot::core
