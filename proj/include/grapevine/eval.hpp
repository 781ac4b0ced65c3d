#pragma once

#include <cstdint>
#include <functional>
#include <set>
#include <unordered_map>
#include <vector>

#include "grapevine/algebra.hpp"
#include "grapevine/bag.hpp"
#include "grapevine/graph.hpp"

namespace grapevine {

struct EvalStats {
    std::uint64_t tuples = 0;  // tuples produced across all operators
};

// Non-incremental brute-force evaluator of any GRA/NRA/FRA expression.
// Deliberately naive: nested loops and full rescans. Shares predicate and
// value semantics with the incremental engine.
class ReferenceEvaluator {
public:
    explicit ReferenceEvaluator(const PropertyGraph& graph, EvalStats* stats = nullptr)
        : graph_(graph), stats_(stats) {}

    TupleBag evaluate(const ExprPtr& expr) { return eval(*expr); }

private:
    void count(std::uint64_t n = 1) {
        if (stats_) stats_->tuples += n;
    }

    TupleBag counted(TupleBag bag) {
        count(bag.rows.size());
        return bag;
    }

    Value element_property(const Value& ref, AttrKind kind, const std::string& key) const {
        ElementId id = ref.as_id();
        const auto& props = kind == AttrKind::Vertex ? graph_.vertex(id).properties
                                                     : graph_.edge(id).properties;
        return graph_.property_or_missing(props, key);
    }

    Value resolve(const Operand& op, const Tuple& t, const Schema& s) const {
        if (const auto* a = std::get_if<AttrRef>(&op)) return t[s.index_of(a->name)];
        if (const auto* p = std::get_if<PropRef>(&op)) {
            std::size_t i = s.index_of(p->var);
            return element_property(t[i], s.attrs[i].kind, p->key);
        }
        return std::get<Value>(op);
    }

    bool label_ok(ElementId v, const std::optional<std::string>& label) const {
        return !label || graph_.vertex(v).labels.count(*label) > 0;
    }

    // Depth-first enumeration of edge-distinct paths from v0 over edges of the
    // given type; emits every path whose hop count lies within [min, max].
    void enumerate_paths(ElementId v0, const std::optional<std::string>& edge_type,
                         const HopRange& range,
                         const std::function<void(const std::vector<ElementId>&, ElementId)>& emit) const {
        std::vector<ElementId> ids{v0};
        std::set<ElementId> used;
        dfs(v0, edge_type, range, ids, used, 0, emit);
    }

    void dfs(ElementId cur, const std::optional<std::string>& edge_type, const HopRange& range,
             std::vector<ElementId>& ids, std::set<ElementId>& used, std::uint32_t hops,
             const std::function<void(const std::vector<ElementId>&, ElementId)>& emit) const {
        if (hops >= range.min) emit(ids, cur);
        if (range.max && hops >= *range.max) return;
        for (ElementId eid : graph_.out_edges(cur)) {
            if (used.count(eid)) continue;
            const auto& e = graph_.edge(eid);
            if (edge_type && e.edge_type != *edge_type) continue;
            used.insert(eid);
            ids.push_back(eid);
            ids.push_back(e.target);
            dfs(e.target, edge_type, range, ids, used, hops + 1, emit);
            ids.pop_back();
            ids.pop_back();
            used.erase(eid);
        }
    }

    TupleBag eval(const AlgebraExpr& expr) {
        return std::visit([this](const auto& n) { return eval_node(n); }, expr.node);
    }

    TupleBag eval_node(const GetVerticesNode& n) { return counted(graph_.rows(n.base)); }
    TupleBag eval_node(const GetEdgesNode& n) { return counted(graph_.rows(n.base)); }

    TupleBag eval_node(const ExpandOutNode& n) {
        TupleBag child = eval(*n.child);
        Schema cs = child.schema;
        std::size_t from = cs.index_of(n.from_var, "expand-out");
        TupleBag out(schema_of(make_expr(ExpandOutNode(n))));
        HopRange range = n.varlen ? *n.varlen : HopRange{1, 1};
        for (const auto& [t, m] : child.rows) {
            ElementId v0 = t[from].as_id();
            enumerate_paths(v0, n.edge_type, range, [&](const std::vector<ElementId>& ids,
                                                        ElementId end) {
                if (!label_ok(end, n.to_label)) return;
                Tuple row = t;
                if (n.edge_var) row.push_back(Value::edge_ref(ids[1]));  // single hop
                row.push_back(Value::vertex_ref(end));
                if (n.path_attr) row.push_back(Value(PathValue{ids}));
                out.add(row, m);
                count();
            });
        }
        return out;
    }

    TupleBag eval_node(const SelectionNode& n) {
        TupleBag child = eval(*n.child);
        TupleBag out(child.schema);
        for (const auto& [t, m] : child.rows) {
            bool keep = eval_predicate(n.predicate, [&](const Operand& op) {
                return resolve(op, t, child.schema);
            });
            if (keep) {
                out.add(t, m);
                count();
            }
        }
        return out;
    }

    TupleBag eval_node(const ProjectionNode& n) {
        TupleBag child = eval(*n.child);
        TupleBag out(schema_of(make_expr(ProjectionNode(n))));
        for (const auto& [t, m] : child.rows) {
            Tuple row;
            row.reserve(n.items.size());
            for (const auto& item : n.items) row.push_back(resolve(item.expr, t, child.schema));
            out.add(row, m);
            count();
        }
        return out;
    }

    TupleBag eval_node(const UnnestNode& n) {
        TupleBag child = eval(*n.child);
        TupleBag out(schema_of(make_expr(UnnestNode(n))));
        for (const auto& [t, m] : child.rows) {
            Tuple row = t;
            for (const auto& item : n.items)
                row.push_back(resolve(Operand(PropRef{item.var, item.key}), t, child.schema));
            out.add(row, m);
            count();
        }
        return out;
    }

    TupleBag eval_node(const NaturalJoinNode& n) {
        TupleBag left = eval(*n.left);
        TupleBag right = eval(*n.right);
        std::vector<std::size_t> l_key, r_key, r_extra;
        for (std::size_t j = 0; j < right.schema.size(); ++j) {
            if (auto i = left.schema.find(right.schema.attrs[j].name)) {
                l_key.push_back(*i);
                r_key.push_back(j);
            } else {
                r_extra.push_back(j);
            }
        }
        std::unordered_map<Tuple, std::vector<std::pair<Tuple, std::int64_t>>, TupleHash> index;
        for (const auto& [t, m] : right.rows) {
            Tuple key;
            for (auto j : r_key) key.push_back(t[j]);
            index[key].emplace_back(t, m);
        }
        TupleBag out(schema_of(make_expr(NaturalJoinNode(n))));
        for (const auto& [lt, lm] : left.rows) {
            Tuple key;
            for (auto i : l_key) key.push_back(lt[i]);
            auto it = index.find(key);
            if (it == index.end()) continue;
            for (const auto& [rt, rm] : it->second) {
                Tuple row = lt;
                for (auto j : r_extra) row.push_back(rt[j]);
                out.add(row, lm * rm);
                count();
            }
        }
        return out;
    }

    TupleBag eval_node(const TransitiveJoinNode& n) {
        TupleBag left = eval(*n.left);
        const auto& ge = detail::transitive_right(n);
        std::size_t src = left.schema.index_of(ge.base.src_var, "transitive join");
        TupleBag out(schema_of(make_expr(TransitiveJoinNode(n))));
        for (const auto& [t, m] : left.rows) {
            ElementId v0 = t[src].as_id();
            if (!label_ok(v0, ge.base.src_label)) continue;
            enumerate_paths(v0, ge.base.edge_type, n.range, [&](const std::vector<ElementId>& ids,
                                                                ElementId end) {
                if (!label_ok(end, ge.base.tgt_label)) return;
                Tuple row = t;
                row.push_back(Value::vertex_ref(end));
                const auto& props = graph_.vertex(end).properties;
                for (const auto& p : ge.base.tgt_props)
                    row.push_back(graph_.property_or_missing(props, p.key));
                if (n.path_attr) row.push_back(Value(PathValue{ids}));
                out.add(row, m);
                count();
            });
        }
        return out;
    }

    const PropertyGraph& graph_;
    EvalStats* stats_;
};

inline TupleBag evaluate(const PropertyGraph& graph, const ExprPtr& expr,
                         EvalStats* stats = nullptr) {
    return ReferenceEvaluator(graph, stats).evaluate(expr);
}

}  // namespace grapevine
