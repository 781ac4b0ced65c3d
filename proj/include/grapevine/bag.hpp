#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "grapevine/schema.hpp"
#include "grapevine/value.hpp"

namespace grapevine {

using Tuple = std::vector<Value>;

struct TupleHash {
    std::size_t operator()(const Tuple& t) const {
        std::size_t h = 0x5bd1e995u;
        for (const auto& v : t) h ^= v.hash() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};

using TupleCounts = std::unordered_map<Tuple, std::int64_t, TupleHash>;

// Signed multiset of tuples over a schema. Normalized: no tuple is kept at
// multiplicity zero. Doubles as the materialized result bag, in which case
// negative multiplicities are rejected at application time.
struct TupleBag {
    Schema schema;
    TupleCounts rows;

    TupleBag() = default;
    explicit TupleBag(Schema s) : schema(std::move(s)) {}

    bool empty() const { return rows.empty(); }

    void add(const Tuple& t, std::int64_t mult) {
        if (mult == 0) return;
        auto it = rows.find(t);
        if (it == rows.end()) {
            rows.emplace(t, mult);
        } else {
            it->second += mult;
            if (it->second == 0) rows.erase(it);
        }
    }

    void add_all(const TupleBag& other) {
        for (const auto& [t, m] : other.rows) add(t, m);
    }

    // Delta application onto a materialized bag; a resulting negative
    // multiplicity is an internal consistency violation.
    void apply_checked(const TupleBag& delta) {
        for (const auto& [t, m] : delta.rows) {
            add(t, m);
            auto it = rows.find(t);
            if (it != rows.end() && it->second < 0)
                throw NegativeMultiplicityError("multiplicity below zero after delta application");
        }
    }

    TupleBag negated() const {
        TupleBag out(schema);
        for (const auto& [t, m] : rows) out.rows.emplace(t, -m);
        return out;
    }

    bool operator==(const TupleBag& o) const { return schema == o.schema && rows == o.rows; }
};

using DeltaBag = TupleBag;

}  // namespace grapevine
