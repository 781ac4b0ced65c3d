#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "grapevine/ast.hpp"
#include "grapevine/expr.hpp"
#include "grapevine/relations.hpp"
#include "grapevine/schema.hpp"

namespace grapevine {

struct AlgebraExpr;
using ExprPtr = std::shared_ptr<const AlgebraExpr>;

struct HopRange {
    std::uint32_t min = 1;
    std::optional<std::uint32_t> max;  // unset = unbounded
    bool operator==(const HopRange& o) const { return min == o.min && max == o.max; }
};

struct GetVerticesNode {
    VertexBase base;
    bool operator==(const GetVerticesNode& o) const { return base == o.base; }
};

struct GetEdgesNode {
    EdgeBase base;
    bool operator==(const GetEdgesNode& o) const { return base == o.base; }
};

// GRA-only navigation operator; varlen unset means a single hop.
struct ExpandOutNode {
    ExprPtr child;
    std::string from_var;
    std::string to_var;
    std::optional<std::string> to_label;
    std::optional<std::string> edge_var;  // single hop only
    std::optional<std::string> edge_type;
    std::optional<HopRange> varlen;
    std::optional<std::string> path_attr;
};

struct SelectionNode {
    ExprPtr child;
    BoolExpr predicate;
};

struct ProjItem {
    Operand expr;  // AttrRef, or PropRef in GRA
    std::string name;
    bool operator==(const ProjItem& o) const { return expr == o.expr && name == o.name; }
};

struct ProjectionNode {
    ExprPtr child;
    std::vector<ProjItem> items;
};

struct UnnestItem {
    std::string var;
    std::string key;
    std::string attr;
    bool operator==(const UnnestItem& o) const {
        return var == o.var && key == o.key && attr == o.attr;
    }
};

// NRA attribute-specific unnest, e.g. unnest[c.lang->cL].
struct UnnestNode {
    ExprPtr child;
    std::vector<UnnestItem> items;
};

struct NaturalJoinNode {
    ExprPtr left;
    ExprPtr right;
};

// r join* get-edges: variable-length navigation as a maintainable join.
// Paths use pairwise-distinct edges; the right child must be a GetEdgesNode
// without edge variable use and without source/edge property requests.
struct TransitiveJoinNode {
    ExprPtr left;
    ExprPtr right;
    HopRange range;
    std::optional<std::string> path_attr;
};

struct AlgebraExpr {
    std::variant<GetVerticesNode, GetEdgesNode, ExpandOutNode, SelectionNode, ProjectionNode,
                 UnnestNode, NaturalJoinNode, TransitiveJoinNode>
        node;
};

template <class T>
ExprPtr make_expr(T node) {
    return std::make_shared<AlgebraExpr>(AlgebraExpr{std::move(node)});
}

enum class Dialect { GRA, NRA, FRA };

inline const char* dialect_name(Dialect d) {
    switch (d) {
        case Dialect::GRA: return "GRA";
        case Dialect::NRA: return "NRA";
        case Dialect::FRA: return "FRA";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// schema_of: deterministic attribute order; child attributes first, newly
// introduced attributes appended in operator-definition order.
// ---------------------------------------------------------------------------

inline Schema schema_of(const AlgebraExpr& expr);
inline Schema schema_of(const ExprPtr& expr) { return schema_of(*expr); }

namespace detail {

inline void check_operand(const Operand& op, const Schema& s, const std::string& node) {
    if (const auto* a = std::get_if<AttrRef>(&op)) {
        s.index_of(a->name, node);
    } else if (const auto* p = std::get_if<PropRef>(&op)) {
        std::size_t i = s.index_of(p->var, node);
        AttrKind k = s.attrs[i].kind;
        if (k != AttrKind::Vertex && k != AttrKind::Edge)
            throw UnknownAttributeError(p->var, node + " (property access on non-element)");
    }
}

inline const GetEdgesNode& transitive_right(const TransitiveJoinNode& n) {
    const auto* ge = std::get_if<GetEdgesNode>(&n.right->node);
    if (!ge)
        throw UnknownAttributeError("<right>", "transitive join requires a get-edges operand");
    if (!ge->base.src_props.empty() || !ge->base.edge_props.empty())
        throw UnknownAttributeError(ge->base.edge_var,
                                    "transitive join with source/edge property requests");
    return *ge;
}

}  // namespace detail

inline Schema schema_of(const AlgebraExpr& expr) {
    return std::visit(
        [](const auto& n) -> Schema {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, GetVerticesNode>) {
                return n.base.schema();
            } else if constexpr (std::is_same_v<T, GetEdgesNode>) {
                return n.base.schema();
            } else if constexpr (std::is_same_v<T, ExpandOutNode>) {
                Schema s = schema_of(n.child);
                std::size_t i = s.index_of(n.from_var, "expand-out");
                if (s.attrs[i].kind != AttrKind::Vertex)
                    throw UnknownAttributeError(n.from_var, "expand-out from non-vertex");
                if (n.edge_var) s.append({*n.edge_var, AttrKind::Edge}, "expand-out");
                s.append({n.to_var, AttrKind::Vertex}, "expand-out");
                if (n.path_attr) s.append({*n.path_attr, AttrKind::Path}, "expand-out");
                return s;
            } else if constexpr (std::is_same_v<T, SelectionNode>) {
                Schema s = schema_of(n.child);
                for (const auto& c : n.predicate.conjuncts) {
                    detail::check_operand(c.lhs, s, "selection");
                    detail::check_operand(c.rhs, s, "selection");
                }
                return s;
            } else if constexpr (std::is_same_v<T, ProjectionNode>) {
                Schema child = schema_of(n.child);
                Schema s;
                for (const auto& item : n.items) {
                    detail::check_operand(item.expr, child, "projection");
                    if (const auto* a = std::get_if<AttrRef>(&item.expr)) {
                        s.append({item.name, child.attrs[child.index_of(a->name)].kind},
                                 "projection");
                    } else {
                        s.append({item.name, AttrKind::Atomic}, "projection");
                    }
                }
                return s;
            } else if constexpr (std::is_same_v<T, UnnestNode>) {
                Schema s = schema_of(n.child);
                for (const auto& item : n.items) {
                    detail::check_operand(PropRef{item.var, item.key}, s, "unnest");
                    s.append({item.attr, AttrKind::Atomic}, "unnest");
                }
                return s;
            } else if constexpr (std::is_same_v<T, NaturalJoinNode>) {
                Schema s = schema_of(n.left);
                Schema r = schema_of(n.right);
                for (const auto& a : r.attrs)
                    if (!s.contains(a.name)) s.attrs.push_back(a);
                return s;
            } else {
                static_assert(std::is_same_v<T, TransitiveJoinNode>);
                Schema s = schema_of(n.left);
                const auto& ge = detail::transitive_right(n);
                std::size_t i = s.index_of(ge.base.src_var, "transitive join");
                if (s.attrs[i].kind != AttrKind::Vertex)
                    throw UnknownAttributeError(ge.base.src_var, "transitive join on non-vertex");
                s.append({ge.base.tgt_var, AttrKind::Vertex}, "transitive join");
                for (const auto& p : ge.base.tgt_props)
                    s.append({p.attr, AttrKind::Atomic}, "transitive join");
                if (n.path_attr) s.append({*n.path_attr, AttrKind::Path}, "transitive join");
                return s;
            }
        },
        expr.node);
}

// ---------------------------------------------------------------------------
// dialect_of: most restrictive dialect the tree satisfies (FRA < NRA < GRA).
// ---------------------------------------------------------------------------

namespace detail {

struct DialectScan {
    bool has_expand = false;
    bool has_unnest = false;
    bool has_nested_access = false;

    void operand(const Operand& op) {
        if (std::holds_alternative<PropRef>(op)) has_nested_access = true;
    }

    void visit(const AlgebraExpr& expr) {
        std::visit(
            [this](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, ExpandOutNode>) {
                    has_expand = true;
                    visit(*n.child);
                } else if constexpr (std::is_same_v<T, UnnestNode>) {
                    has_unnest = true;
                    visit(*n.child);
                } else if constexpr (std::is_same_v<T, SelectionNode>) {
                    for (const auto& c : n.predicate.conjuncts) {
                        operand(c.lhs);
                        operand(c.rhs);
                    }
                    visit(*n.child);
                } else if constexpr (std::is_same_v<T, ProjectionNode>) {
                    for (const auto& item : n.items) operand(item.expr);
                    visit(*n.child);
                } else if constexpr (std::is_same_v<T, NaturalJoinNode>) {
                    visit(*n.left);
                    visit(*n.right);
                } else if constexpr (std::is_same_v<T, TransitiveJoinNode>) {
                    visit(*n.left);
                    visit(*n.right);
                }
            },
            expr.node);
    }
};

}  // namespace detail

inline Dialect dialect_of(const AlgebraExpr& expr) {
    detail::DialectScan scan;
    scan.visit(expr);
    if (scan.has_expand) return Dialect::GRA;
    if (scan.has_unnest || scan.has_nested_access) return Dialect::NRA;
    return Dialect::FRA;
}

inline Dialect dialect_of(const ExprPtr& expr) { return dialect_of(*expr); }

// ---------------------------------------------------------------------------
// pretty: deterministic textual form; the golden-file format.
// ---------------------------------------------------------------------------

namespace detail {

inline std::string pretty_props(const std::vector<PropRequest>& props) {
    if (props.empty()) return "";
    std::string out = " {";
    for (std::size_t i = 0; i < props.size(); ++i) {
        if (i) out += ", ";
        out += props[i].key + "->" + props[i].attr;
    }
    return out + "}";
}

inline std::string pretty_endpoint(const std::string& var, const std::optional<std::string>& label,
                                   const std::vector<PropRequest>& props) {
    std::string out = is_generated_name(var) ? "" : var;
    if (label) out += ":" + *label;
    out += pretty_props(props);
    if (out.empty()) out = "-";
    return out;
}

inline std::string pretty_comparison(const Comparison& c) {
    std::string l = print_operand(c.lhs);
    std::string r = print_operand(c.rhs);
    // = and <> are symmetric; normalize operand order for stable output
    if ((c.op == CmpOp::Eq || c.op == CmpOp::Ne) && r < l) std::swap(l, r);
    return l + " " + cmp_op_text(c.op) + " " + r;
}

inline std::string pretty_range(const HopRange& range) {
    std::string out = "*" + std::to_string(range.min) + "..";
    if (range.max) out += std::to_string(*range.max);
    return out;
}

}  // namespace detail

inline std::string pretty(const AlgebraExpr& expr) {
    using detail::pretty_endpoint;
    return std::visit(
        [](const auto& n) -> std::string {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, GetVerticesNode>) {
                return "get-vertices(" +
                       pretty_endpoint(n.base.var, n.base.label, n.base.props) + ")";
            } else if constexpr (std::is_same_v<T, GetEdgesNode>) {
                std::string edge = is_generated_name(n.base.edge_var) ? "" : n.base.edge_var;
                if (n.base.edge_type) edge += ":" + *n.base.edge_type;
                edge += detail::pretty_props(n.base.edge_props);
                if (edge.empty()) edge = "-";
                return "get-edges(" +
                       pretty_endpoint(n.base.src_var, n.base.src_label, n.base.src_props) +
                       ", " + edge + ", " +
                       pretty_endpoint(n.base.tgt_var, n.base.tgt_label, n.base.tgt_props) + ")";
            } else if constexpr (std::is_same_v<T, ExpandOutNode>) {
                std::string head = n.from_var + "->" + n.to_var;
                if (n.to_label) head += ":" + *n.to_label;
                std::string edge =
                    n.edge_var && !is_generated_name(*n.edge_var) ? *n.edge_var : "";
                if (n.edge_type) edge += ":" + *n.edge_type;
                if (edge.empty()) edge = "-";
                std::string out = "expand-out[" + head + ", " + edge;
                if (n.varlen) out += ", " + detail::pretty_range(*n.varlen);
                if (n.path_attr) out += ", path=" + *n.path_attr;
                return out + "](" + pretty(*n.child) + ")";
            } else if constexpr (std::is_same_v<T, SelectionNode>) {
                std::string out = "select[";
                for (std::size_t i = 0; i < n.predicate.conjuncts.size(); ++i) {
                    if (i) out += " and ";
                    out += detail::pretty_comparison(n.predicate.conjuncts[i]);
                }
                return out + "](" + pretty(*n.child) + ")";
            } else if constexpr (std::is_same_v<T, ProjectionNode>) {
                std::string out = "project[";
                for (std::size_t i = 0; i < n.items.size(); ++i) {
                    if (i) out += ", ";
                    std::string e = print_operand(n.items[i].expr);
                    out += e;
                    if (n.items[i].name != e) out += "->" + n.items[i].name;
                }
                return out + "](" + pretty(*n.child) + ")";
            } else if constexpr (std::is_same_v<T, UnnestNode>) {
                std::string out = "unnest[";
                for (std::size_t i = 0; i < n.items.size(); ++i) {
                    if (i) out += ", ";
                    out += n.items[i].var + "." + n.items[i].key + "->" + n.items[i].attr;
                }
                return out + "](" + pretty(*n.child) + ")";
            } else if constexpr (std::is_same_v<T, NaturalJoinNode>) {
                return "join(" + pretty(*n.left) + ", " + pretty(*n.right) + ")";
            } else {
                static_assert(std::is_same_v<T, TransitiveJoinNode>);
                std::string opts;
                if (n.range.min != 1 || n.range.max) opts = detail::pretty_range(n.range);
                if (n.path_attr) {
                    if (!opts.empty()) opts += ", ";
                    opts += "path=" + *n.path_attr;
                }
                std::string out = "join*";
                if (!opts.empty()) out += "[" + opts + "]";
                return out + "(" + pretty(*n.left) + ", " + pretty(*n.right) + ")";
            }
        },
        expr.node);
}

inline std::string pretty(const ExprPtr& expr) { return pretty(*expr); }

}  // namespace grapevine
