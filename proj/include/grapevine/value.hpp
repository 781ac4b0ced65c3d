#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "grapevine/errors.hpp"

namespace grapevine {

using ElementId = std::uint64_t;

class Value;

// Atomic path: alternating vertex/edge ids, odd length, starting and ending
// at a vertex. Updated only by whole-value replacement.
struct PathValue {
    std::vector<ElementId> ids;

    std::size_t hops() const { return ids.size() / 2; }
    ElementId start() const { return ids.front(); }
    ElementId end() const { return ids.back(); }
    bool well_formed() const { return ids.size() % 2 == 1 && !ids.empty(); }

    bool operator==(const PathValue& o) const { return ids == o.ids; }
};

// Atomic value | bag of values | atomic path | missing.
// Bags carry no ordering; they are kept sorted internally so that equality
// and hashing are multiset equality.
class Value {
public:
    struct MissingT {
        bool operator==(const MissingT&) const { return true; }
    };
    using Bag = std::vector<Value>;
    using Variant = std::variant<MissingT, bool, std::int64_t, double, std::string, Bag, PathValue>;

    Value() : data_(MissingT{}) {}
    Value(bool b) : data_(b) {}
    Value(std::int64_t i) : data_(i) {}
    Value(int i) : data_(static_cast<std::int64_t>(i)) {}
    Value(double d) : data_(d) {}
    Value(const char* s) : data_(std::string(s)) {}
    Value(std::string s) : data_(std::move(s)) {}
    Value(PathValue p) : data_(std::move(p)) {}

    static Value missing() { return Value(); }

    static Value bag(Bag elements) {
        Value v;
        std::sort(elements.begin(), elements.end(),
                  [](const Value& a, const Value& b) { return a < b; });
        v.data_ = std::move(elements);
        return v;
    }

    static Value vertex_ref(ElementId id) { return Value(static_cast<std::int64_t>(id)); }
    static Value edge_ref(ElementId id) { return Value(static_cast<std::int64_t>(id)); }

    bool is_missing() const { return std::holds_alternative<MissingT>(data_); }
    bool is_path() const { return std::holds_alternative<PathValue>(data_); }
    bool is_bag() const { return std::holds_alternative<Bag>(data_); }

    ElementId as_id() const { return static_cast<ElementId>(std::get<std::int64_t>(data_)); }
    const PathValue& as_path() const { return std::get<PathValue>(data_); }

    const Variant& data() const { return data_; }

    bool operator==(const Value& o) const { return compare(o) == 0; }
    bool operator!=(const Value& o) const { return compare(o) != 0; }
    bool operator<(const Value& o) const { return compare(o) < 0; }

    // Total order used for canonicalization (bag sorting, deterministic
    // output); distinct from the query-level comparison semantics below.
    int compare(const Value& o) const {
        if (data_.index() != o.data_.index())
            return data_.index() < o.data_.index() ? -1 : 1;
        return std::visit(
            [&o](const auto& lhs) -> int {
                using T = std::decay_t<decltype(lhs)>;
                const auto& rhs = std::get<T>(o.data_);
                if constexpr (std::is_same_v<T, MissingT>) {
                    return 0;
                } else if constexpr (std::is_same_v<T, Bag>) {
                    return lex_compare(lhs, rhs);
                } else if constexpr (std::is_same_v<T, PathValue>) {
                    if (lhs.ids == rhs.ids) return 0;
                    return lhs.ids < rhs.ids ? -1 : 1;
                } else {
                    if (lhs == rhs) return 0;
                    return lhs < rhs ? -1 : 1;
                }
            },
            data_);
    }

    std::size_t hash() const {
        std::size_t h = data_.index();
        std::visit(
            [&h](const auto& v) {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, MissingT>) {
                    // index alone
                } else if constexpr (std::is_same_v<T, Bag>) {
                    for (const auto& e : v) hash_combine(h, e.hash());
                } else if constexpr (std::is_same_v<T, PathValue>) {
                    for (auto id : v.ids) hash_combine(h, std::hash<ElementId>{}(id));
                } else {
                    hash_combine(h, std::hash<T>{}(v));
                }
            },
            data_);
        return h;
    }

private:
    static void hash_combine(std::size_t& seed, std::size_t v) {
        seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
    }

    static int lex_compare(const Bag& a, const Bag& b) {
        for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
            int c = a[i].compare(b[i]);
            if (c != 0) return c;
        }
        if (a.size() == b.size()) return 0;
        return a.size() < b.size() ? -1 : 1;
    }

    Variant data_;
};

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

inline const char* cmp_op_text(CmpOp op) {
    switch (op) {
        case CmpOp::Eq: return "=";
        case CmpOp::Ne: return "<>";
        case CmpOp::Lt: return "<";
        case CmpOp::Le: return "<=";
        case CmpOp::Gt: return ">";
        case CmpOp::Ge: return ">=";
    }
    return "?";
}

// Query-level comparison semantics, shared by the reference evaluator and the
// incremental engine:
//  - any comparison involving Missing is false;
//  - equality and inequality are structural;
//  - ordering operators are defined only within the same atomic type,
//    cross-type and bag/path operands compare to false.
inline bool query_compare(const Value& lhs, CmpOp op, const Value& rhs) {
    if (lhs.is_missing() || rhs.is_missing()) return false;
    switch (op) {
        case CmpOp::Eq: return lhs == rhs;
        case CmpOp::Ne: return lhs != rhs;
        default: break;
    }
    if (lhs.data().index() != rhs.data().index()) return false;
    if (lhs.is_bag() || lhs.is_path()) return false;
    int c = lhs.compare(rhs);
    switch (op) {
        case CmpOp::Lt: return c < 0;
        case CmpOp::Le: return c <= 0;
        case CmpOp::Gt: return c > 0;
        case CmpOp::Ge: return c >= 0;
        default: return false;
    }
}

}  // namespace grapevine
