#pragma once

#include <string>
#include <variant>
#include <vector>

#include "grapevine/value.hpp"

namespace grapevine {

// Flat attribute reference (FRA operand).
struct AttrRef {
    std::string name;
    bool operator==(const AttrRef& o) const { return name == o.name; }
};

// Nested property access x.p (GRA/NRA operand).
struct PropRef {
    std::string var;
    std::string key;
    bool operator==(const PropRef& o) const { return var == o.var && key == o.key; }
};

using Operand = std::variant<AttrRef, PropRef, Value>;

struct Comparison {
    Operand lhs;
    CmpOp op = CmpOp::Eq;
    Operand rhs;
    bool operator==(const Comparison& o) const {
        return lhs == o.lhs && op == o.op && rhs == o.rhs;
    }
};

// Conjunction of comparisons; no disjunction or negation in this fragment.
struct BoolExpr {
    std::vector<Comparison> conjuncts;
    bool operator==(const BoolExpr& o) const { return conjuncts == o.conjuncts; }
};

// Single source of predicate evaluation for both the reference evaluator and
// the operator network; the resolver maps an operand to its Value.
template <class Resolver>
bool eval_predicate(const BoolExpr& pred, Resolver&& resolve) {
    for (const auto& cmp : pred.conjuncts) {
        if (!query_compare(resolve(cmp.lhs), cmp.op, resolve(cmp.rhs))) return false;
    }
    return true;
}

}  // namespace grapevine
