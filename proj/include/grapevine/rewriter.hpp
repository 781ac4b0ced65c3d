#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "grapevine/algebra.hpp"
#include "grapevine/parser.hpp"

namespace grapevine {

// ---------------------------------------------------------------------------
// Step (1): query AST -> GRA.
// ---------------------------------------------------------------------------

inline ExprPtr compile_to_gra(const QueryAst& ast) {
    const auto& pg = ast.match;
    int fresh_edges = 0;
    if (pg.path_binding)
        for (const auto& e : pg.edges)
            if (e.var)
                throw UnsupportedFeatureError("path binding together with an edge variable");

    ExprPtr expr = make_expr(GetVerticesNode{VertexBase{pg.nodes[0].var, pg.nodes[0].label, {}}});
    for (std::size_t i = 0; i < pg.edges.size(); ++i) {
        const auto& e = pg.edges[i];
        ExpandOutNode ex;
        ex.child = expr;
        ex.from_var = pg.nodes[i].var;
        ex.to_var = pg.nodes[i + 1].var;
        ex.to_label = pg.nodes[i + 1].label;
        ex.edge_var = e.var ? e.var : std::optional<std::string>("$e" + std::to_string(++fresh_edges));
        ex.edge_type = e.edge_type;
        if (e.variable_length) {
            ex.varlen = HopRange{e.min_hops, e.max_hops};
            ex.edge_var = std::nullopt;
        }
        ex.path_attr = pg.path_binding;  // single-edge patterns only (parser-enforced)
        expr = make_expr(std::move(ex));
    }
    if (ast.where_clause) expr = make_expr(SelectionNode{expr, *ast.where_clause});

    ProjectionNode proj;
    proj.child = expr;
    for (const auto& item : ast.return_items) {
        Operand op = item.key ? Operand(PropRef{item.var, *item.key}) : Operand(AttrRef{item.var});
        proj.items.push_back(ProjItem{std::move(op), item.name});
    }
    return make_expr(std::move(proj));
}

// ---------------------------------------------------------------------------
// Step (2): GRA -> NRA. Expand-outs become (transitive) joins with get-edges;
// nested property accesses are replaced by fresh attributes introduced by an
// unnest directly beneath the consuming operator.
// ---------------------------------------------------------------------------

namespace detail {

// Label of the operator that introduced the variable, if any.
inline std::optional<std::string> binder_label(const ExprPtr& expr, const std::string& var) {
    std::optional<std::string> found;
    bool hit = false;
    auto scan = [&](auto&& self, const AlgebraExpr& e) -> void {
        if (hit) return;
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, GetVerticesNode>) {
                    if (n.base.var == var) { found = n.base.label; hit = true; }
                } else if constexpr (std::is_same_v<T, GetEdgesNode>) {
                    if (n.base.tgt_var == var) { found = n.base.tgt_label; hit = true; }
                } else if constexpr (std::is_same_v<T, ExpandOutNode>) {
                    if (n.to_var == var) { found = n.to_label; hit = true; }
                    else self(self, *n.child);
                } else if constexpr (std::is_same_v<T, NaturalJoinNode> ||
                                     std::is_same_v<T, TransitiveJoinNode>) {
                    self(self, *n.left);
                    if (!hit) self(self, *n.right);
                } else {
                    self(self, *n.child);
                }
            },
            e.node);
    };
    scan(scan, *expr);
    return found;
}

struct UnnestIntro {
    // (var, key) -> flat attribute already available from below
    std::map<std::pair<std::string, std::string>, std::string> avail;
    std::set<std::string> used_names;

    std::string attr_for(const std::string& var, const std::string& key) {
        auto it = avail.find({var, key});
        if (it != avail.end()) return it->second;
        std::string name = var + static_cast<char>(
                                      std::toupper(static_cast<unsigned char>(key[0])));
        if (used_names.count(name)) name = var + "_" + key;
        int k = 0;
        while (used_names.count(name)) name = var + "_" + key + std::to_string(++k);
        return name;
    }
};

}  // namespace detail

inline ExprPtr expand_to_joins(const ExprPtr& gra) {
    int fresh_edges = 0;

    // pass A: eliminate expand-outs
    auto eliminate = [&](auto&& self, const ExprPtr& e) -> ExprPtr {
        return std::visit(
            [&](const auto& n) -> ExprPtr {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, GetVerticesNode> ||
                              std::is_same_v<T, GetEdgesNode>) {
                    return e;
                } else if constexpr (std::is_same_v<T, ExpandOutNode>) {
                    ExprPtr child = self(self, n.child);
                    EdgeBase ge;
                    ge.src_var = n.from_var;
                    ge.src_label = detail::binder_label(child, n.from_var);
                    ge.edge_var = n.edge_var ? *n.edge_var
                                             : "$e" + std::to_string(1000 + ++fresh_edges);
                    ge.edge_type = n.edge_type;
                    ge.tgt_var = n.to_var;
                    ge.tgt_label = n.to_label;
                    ExprPtr right = make_expr(GetEdgesNode{std::move(ge)});
                    if (!n.varlen && !n.path_attr)
                        return make_expr(NaturalJoinNode{child, right});
                    HopRange range = n.varlen ? *n.varlen : HopRange{1, 1};
                    return make_expr(TransitiveJoinNode{child, right, range, n.path_attr});
                } else if constexpr (std::is_same_v<T, SelectionNode>) {
                    return make_expr(SelectionNode{self(self, n.child), n.predicate});
                } else if constexpr (std::is_same_v<T, ProjectionNode>) {
                    return make_expr(ProjectionNode{self(self, n.child), n.items});
                } else if constexpr (std::is_same_v<T, UnnestNode>) {
                    return make_expr(UnnestNode{self(self, n.child), n.items});
                } else if constexpr (std::is_same_v<T, NaturalJoinNode>) {
                    return make_expr(NaturalJoinNode{self(self, n.left), self(self, n.right)});
                } else {
                    static_assert(std::is_same_v<T, TransitiveJoinNode>);
                    return make_expr(
                        TransitiveJoinNode{self(self, n.left), n.right, n.range, n.path_attr});
                }
            },
            e->node);
    };

    // pass B: replace nested accesses with unnest-introduced attributes
    auto flatten = [&](auto&& self, const ExprPtr& e,
                       detail::UnnestIntro& ctx) -> ExprPtr {
        return std::visit(
            [&](const auto& n) -> ExprPtr {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, GetVerticesNode> ||
                              std::is_same_v<T, GetEdgesNode>) {
                    for (const auto& a : schema_of(e).attrs) ctx.used_names.insert(a.name);
                    return e;
                } else if constexpr (std::is_same_v<T, NaturalJoinNode>) {
                    ExprPtr l = self(self, n.left, ctx);
                    ExprPtr r = self(self, n.right, ctx);
                    return make_expr(NaturalJoinNode{l, r});
                } else if constexpr (std::is_same_v<T, TransitiveJoinNode>) {
                    ExprPtr l = self(self, n.left, ctx);
                    if (n.path_attr) ctx.used_names.insert(*n.path_attr);
                    for (const auto& a : schema_of(n.right).attrs) ctx.used_names.insert(a.name);
                    return make_expr(TransitiveJoinNode{l, n.right, n.range, n.path_attr});
                } else if constexpr (std::is_same_v<T, UnnestNode>) {
                    ExprPtr c = self(self, n.child, ctx);
                    for (const auto& item : n.items) {
                        ctx.avail[{item.var, item.key}] = item.attr;
                        ctx.used_names.insert(item.attr);
                    }
                    return make_expr(UnnestNode{c, n.items});
                } else if constexpr (std::is_same_v<T, SelectionNode> ||
                                     std::is_same_v<T, ProjectionNode>) {
                    ExprPtr c = self(self, n.child, ctx);
                    // collect nested accesses this operator consumes
                    std::vector<std::pair<std::string, std::string>> needed;
                    auto note = [&](const Operand& op) {
                        if (const auto* p = std::get_if<PropRef>(&op)) {
                            std::pair<std::string, std::string> kp{p->var, p->key};
                            if (!ctx.avail.count(kp) &&
                                std::find(needed.begin(), needed.end(), kp) == needed.end())
                                needed.push_back(kp);
                        }
                    };
                    if constexpr (std::is_same_v<T, SelectionNode>) {
                        for (const auto& cmp : n.predicate.conjuncts) {
                            note(cmp.lhs);
                            note(cmp.rhs);
                        }
                    } else {
                        for (const auto& item : n.items) note(item.expr);
                    }
                    if (!needed.empty()) {
                        std::sort(needed.begin(), needed.end());
                        UnnestNode un;
                        un.child = c;
                        for (const auto& [var, key] : needed) {
                            std::string attr = ctx.attr_for(var, key);
                            ctx.avail[{var, key}] = attr;
                            ctx.used_names.insert(attr);
                            un.items.push_back(UnnestItem{var, key, attr});
                        }
                        c = make_expr(std::move(un));
                    }
                    auto rewrite_operand = [&](const Operand& op) -> Operand {
                        if (const auto* p = std::get_if<PropRef>(&op))
                            return AttrRef{ctx.avail.at({p->var, p->key})};
                        return op;
                    };
                    if constexpr (std::is_same_v<T, SelectionNode>) {
                        BoolExpr pred;
                        for (const auto& cmp : n.predicate.conjuncts)
                            pred.conjuncts.push_back(Comparison{rewrite_operand(cmp.lhs), cmp.op,
                                                                rewrite_operand(cmp.rhs)});
                        return make_expr(SelectionNode{c, std::move(pred)});
                    } else {
                        std::vector<ProjItem> items;
                        for (const auto& item : n.items)
                            items.push_back(ProjItem{rewrite_operand(item.expr), item.name});
                        return make_expr(ProjectionNode{c, std::move(items)});
                    }
                } else {
                    static_assert(std::is_same_v<T, ExpandOutNode>);
                    throw Error("expand-out survived join rewriting");
                }
            },
            e->node);
    };

    ExprPtr joined = eliminate(eliminate, gra);
    detail::UnnestIntro ctx;
    return flatten(flatten, joined, ctx);
}

// ---------------------------------------------------------------------------
// Step (3): NRA -> FRA. Every unnest is eliminated by attaching its property
// requests to the unique base operator that binds the unnested variable,
// yielding the minimal inferred schema.
// ---------------------------------------------------------------------------

namespace detail {

// Attaches key->attr to the base operator binding `var`. A variable is bound
// by get-vertices (its vertex) or by get-edges (its edge or target vertex);
// the source side of get-edges references a variable bound elsewhere.
inline ExprPtr attach_request(const ExprPtr& e, const std::string& var, const std::string& key,
                              const std::string& attr, int& bindings) {
    return std::visit(
        [&](const auto& n) -> ExprPtr {
            using T = std::decay_t<decltype(n)>;
            auto add = [&](std::vector<PropRequest>& props) {
                for (const auto& p : props)
                    if (p.key == key && p.attr == attr) return;
                props.push_back(PropRequest{key, attr});
            };
            if constexpr (std::is_same_v<T, GetVerticesNode>) {
                if (n.base.var != var) return e;
                ++bindings;
                GetVerticesNode copy = n;
                add(copy.base.props);
                return make_expr(std::move(copy));
            } else if constexpr (std::is_same_v<T, GetEdgesNode>) {
                if (n.base.edge_var != var && n.base.tgt_var != var) return e;
                ++bindings;
                GetEdgesNode copy = n;
                add(n.base.edge_var == var ? copy.base.edge_props : copy.base.tgt_props);
                return make_expr(std::move(copy));
            } else if constexpr (std::is_same_v<T, ExpandOutNode>) {
                throw Error("expand-out in NRA input");
            } else if constexpr (std::is_same_v<T, SelectionNode>) {
                return make_expr(
                    SelectionNode{attach_request(n.child, var, key, attr, bindings), n.predicate});
            } else if constexpr (std::is_same_v<T, ProjectionNode>) {
                return make_expr(
                    ProjectionNode{attach_request(n.child, var, key, attr, bindings), n.items});
            } else if constexpr (std::is_same_v<T, UnnestNode>) {
                return make_expr(
                    UnnestNode{attach_request(n.child, var, key, attr, bindings), n.items});
            } else if constexpr (std::is_same_v<T, NaturalJoinNode>) {
                return make_expr(NaturalJoinNode{attach_request(n.left, var, key, attr, bindings),
                                                 attach_request(n.right, var, key, attr, bindings)});
            } else {
                static_assert(std::is_same_v<T, TransitiveJoinNode>);
                return make_expr(
                    TransitiveJoinNode{attach_request(n.left, var, key, attr, bindings),
                                       attach_request(n.right, var, key, attr, bindings),
                                       n.range, n.path_attr});
            }
        },
        e->node);
}

}  // namespace detail

inline ExprPtr push_down_properties(const ExprPtr& nra) {
    return std::visit(
        [&](const auto& n) -> ExprPtr {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, GetVerticesNode> || std::is_same_v<T, GetEdgesNode>) {
                return nra;
            } else if constexpr (std::is_same_v<T, UnnestNode>) {
                ExprPtr child = push_down_properties(n.child);
                for (const auto& item : n.items) {
                    int bindings = 0;
                    child = detail::attach_request(child, item.var, item.key, item.attr, bindings);
                    if (bindings != 1) throw AmbiguousBindingError(item.var);
                }
                return child;  // unnest eliminated
            } else if constexpr (std::is_same_v<T, SelectionNode>) {
                return make_expr(SelectionNode{push_down_properties(n.child), n.predicate});
            } else if constexpr (std::is_same_v<T, ProjectionNode>) {
                return make_expr(ProjectionNode{push_down_properties(n.child), n.items});
            } else if constexpr (std::is_same_v<T, NaturalJoinNode>) {
                return make_expr(NaturalJoinNode{push_down_properties(n.left),
                                                 push_down_properties(n.right)});
            } else if constexpr (std::is_same_v<T, TransitiveJoinNode>) {
                return make_expr(TransitiveJoinNode{push_down_properties(n.left),
                                                    push_down_properties(n.right), n.range,
                                                    n.path_attr});
            } else {
                static_assert(std::is_same_v<T, ExpandOutNode>);
                throw Error("expand-out in NRA input");
            }
        },
        nra->node);
}

// Set of (variable, property-key) pairs requested by the base operators of an
// FRA expression; used for minimal-schema checks.
inline std::set<std::pair<std::string, std::string>> prop_request_pairs(const ExprPtr& expr) {
    std::set<std::pair<std::string, std::string>> out;
    auto scan = [&](auto&& self, const AlgebraExpr& e) -> void {
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, GetVerticesNode>) {
                    for (const auto& p : n.base.props) out.insert({n.base.var, p.key});
                } else if constexpr (std::is_same_v<T, GetEdgesNode>) {
                    for (const auto& p : n.base.src_props) out.insert({n.base.src_var, p.key});
                    for (const auto& p : n.base.edge_props) out.insert({n.base.edge_var, p.key});
                    for (const auto& p : n.base.tgt_props) out.insert({n.base.tgt_var, p.key});
                } else if constexpr (std::is_same_v<T, NaturalJoinNode> ||
                                     std::is_same_v<T, TransitiveJoinNode>) {
                    self(self, *n.left);
                    self(self, *n.right);
                } else if constexpr (std::is_same_v<T, ExpandOutNode> ||
                                     std::is_same_v<T, SelectionNode> ||
                                     std::is_same_v<T, ProjectionNode> ||
                                     std::is_same_v<T, UnnestNode>) {
                    self(self, *n.child);
                }
            },
            e.node);
    };
    scan(scan, *expr);
    return out;
}

struct CompiledQuery {
    QueryAst ast;
    ExprPtr gra;
    ExprPtr nra;
    ExprPtr fra;
};

inline CompiledQuery compile_query(std::string_view text) {
    CompiledQuery out;
    out.ast = parse_query(text);
    out.gra = compile_to_gra(out.ast);
    out.nra = expand_to_joins(out.gra);
    out.fra = push_down_properties(out.nra);
    return out;
}

}  // namespace grapevine
