#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "frobshot/errors.hpp"
#include "frobshot/numbers.hpp"

namespace frobshot::core {

// A validated tuple a_1 < a_2 < ... < a_N of coprime integers, each >= 2.
// Inputs are sorted before validation (the Frobenius number is symmetric in
// its arguments); duplicates are rejected. The squared Euclidean norm is
// cached at construction since nearly every bound formula uses it.
class NTuple {
public:
    static NTuple validate(std::vector<Int> raw) {
        if (raw.size() < 2)
            throw Error(ErrorCode::TooSmall, "need at least two entries, got " + std::to_string(raw.size()));
        std::sort(raw.begin(), raw.end());
        if (raw.front() < 2)
            throw Error(ErrorCode::TooSmall, "entries must be >= 2, got " + to_string(raw.front()));
        for (std::size_t i = 1; i < raw.size(); ++i)
            if (raw[i] == raw[i - 1])
                throw Error(ErrorCode::Duplicate, "repeated entry " + to_string(raw[i]));
        Int g = gcd_all(raw);
        if (g != 1)
            throw Error(ErrorCode::NotCoprime, "gcd of entries is " + to_string(g));
        Int norm_sq = 0;
        for (const Int& v : raw) norm_sq += v * v;
        return NTuple(std::move(raw), std::move(norm_sq));
    }

    std::size_t size() const { return entries_.size(); }
    const Int& operator[](std::size_t i) const { return entries_[i]; }
    const std::vector<Int>& entries() const { return entries_; }
    const Int& front() const { return entries_.front(); }
    const Int& back() const { return entries_.back(); }

    const Int& norm_sq() const { return norm_sq_; }

    Int product() const {
        Int p = 1;
        for (const Int& v : entries_) p *= v;
        return p;
    }

    Int sum() const {
        Int s = 0;
        for (const Int& v : entries_) s += v;
        return s;
    }

    std::string str() const {
        std::string s = "(";
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            if (i) s += ", ";
            s += to_string(entries_[i]);
        }
        return s + ")";
    }

    friend bool operator==(const NTuple& a, const NTuple& b) { return a.entries_ == b.entries_; }

private:
    NTuple(std::vector<Int> entries, Int norm_sq)
        : entries_(std::move(entries)), norm_sq_(std::move(norm_sq)) {}

    std::vector<Int> entries_;
    Int norm_sq_;
};

inline NTuple validate_tuple(std::vector<Int> raw) { return NTuple::validate(std::move(raw)); }

inline NTuple validate_tuple(std::initializer_list<long> raw) {
    std::vector<Int> v;
    v.reserve(raw.size());
    for (long x : raw) v.emplace_back(x);
    return NTuple::validate(std::move(v));
}

} // namespace frobshot::core
