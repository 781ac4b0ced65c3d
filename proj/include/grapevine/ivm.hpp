#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "grapevine/algebra.hpp"
#include "grapevine/bag.hpp"
#include "grapevine/graph.hpp"

namespace grapevine {

namespace ivm {

struct BaseNode {
    std::size_t base_id = 0;
    Schema schema;
};

struct SelectNode {
    std::size_t child = 0;
    BoolExpr predicate;
    Schema schema;
};

struct ProjectNode {
    std::size_t child = 0;
    std::vector<std::size_t> columns;  // positions in the child schema
    Schema schema;
};

// Natural join maintaining one index per side: join key -> tuple -> count.
struct JoinNode {
    std::size_t left = 0;
    std::size_t right = 0;
    std::vector<std::size_t> l_key, r_key, r_extra;
    std::unordered_map<Tuple, TupleCounts, TupleHash> l_index, r_index;
    Schema schema;
};

// Transitive join core: maintains the edge set of its edge base input, the
// left input bag, and the bag of edge-distinct paths anchored at the source
// values occurring in the left input, with a per-edge inverted index for
// O(|affected paths|) deletion. Output rows are left ++ [path end] (++ path).
struct TransJoinNode {
    using PathIds = std::vector<ElementId>;

    std::size_t left = 0;
    std::size_t edges = 0;
    std::size_t src_pos = 0;
    HopRange range;
    bool with_path = false;
    Schema schema;

    // edge set snapshot
    std::unordered_map<ElementId, std::map<ElementId, ElementId>> adj;  // src -> edge -> tgt
    std::unordered_map<ElementId, std::pair<ElementId, ElementId>> edge_st;

    // materialized left input
    TupleCounts left_rows;
    std::unordered_map<ElementId, TupleCounts> left_by_src;
    std::unordered_map<ElementId, std::int64_t> anchor_count;

    // materialized anchored paths, interned once; the per-endpoint and
    // per-edge indexes hold stable pointers into the set
    std::set<PathIds> paths;
    std::map<ElementId, std::set<const PathIds*>> by_start, by_end;
    std::map<ElementId, std::set<const PathIds*>> by_edge;
};

using Node = std::variant<BaseNode, SelectNode, ProjectNode, JoinNode, TransJoinNode>;

inline std::uint32_t hops_of(const TransJoinNode::PathIds& p) {
    return static_cast<std::uint32_t>(p.size() / 2);
}

}  // namespace ivm

// An instantiated operator network maintaining one query's materialized
// result bag. Mutated only by the single propagation pass per transaction;
// reads are snapshots.
class ViewHandle {
public:
    // Full initial evaluation; base operators are registered with the graph so
    // future transactions route deltas here.
    static ViewHandle instantiate(PropertyGraph& graph, const ExprPtr& fra) {
        if (dialect_of(fra) != Dialect::FRA)
            throw Error("instantiate requires an FRA expression, got " +
                        std::string(dialect_name(dialect_of(fra))));
        ViewHandle view;
        view.schema_ = schema_of(fra);
        view.root_ = view.build(graph, fra);
        view.result_ = TupleBag(view.schema_);

        std::map<std::size_t, DeltaBag> initial;
        for (const auto& [base_id, node_idx] : view.base_nodes_) {
            (void)node_idx;
            initial.emplace(base_id, graph.base_rows(base_id));
        }
        view.on_transaction(initial);
        return view;
    }

    // Propagates base deltas node by node in topological order; returns the
    // net delta on the view result and applies it to the materialized bag.
    DeltaBag on_transaction(const std::map<std::size_t, DeltaBag>& base_deltas) {
        tuples_processed_ = 0;
        std::vector<DeltaBag> out(nodes_.size());
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            out[i] = std::visit([&](auto& n) { return process(n, out, base_deltas); }, nodes_[i]);
            tuples_processed_ += out[i].rows.size();
        }
        DeltaBag view_delta = out[root_];
        result_.apply_checked(view_delta);
        return view_delta;
    }

    // Snapshot copy of the materialized bag.
    TupleBag read_view() const { return result_; }

    const Schema& schema() const { return schema_; }
    std::uint64_t tuples_processed() const { return tuples_processed_; }

private:
    ViewHandle() = default;

    std::size_t add_node(ivm::Node node) {
        nodes_.push_back(std::move(node));
        return nodes_.size() - 1;
    }

    std::size_t add_base(PropertyGraph& graph, BaseRelation base) {
        std::size_t base_id = graph.register_base(base);
        Schema s = std::visit([](const auto& b) { return b.schema(); }, base);
        std::size_t idx = add_node(ivm::BaseNode{base_id, std::move(s)});
        base_nodes_.emplace(base_id, idx);
        return idx;
    }

    const Schema& node_schema(std::size_t idx) const {
        return std::visit([](const auto& n) -> const Schema& { return n.schema; }, nodes_[idx]);
    }

    std::size_t add_join(std::size_t left, std::size_t right) {
        ivm::JoinNode j;
        j.left = left;
        j.right = right;
        j.schema = node_schema(left);
        const Schema& rs = node_schema(right);
        for (std::size_t k = 0; k < rs.size(); ++k) {
            if (auto i = j.schema.find(rs.attrs[k].name)) {
                j.l_key.push_back(*i);
                j.r_key.push_back(k);
            } else {
                j.r_extra.push_back(k);
            }
        }
        for (auto k : j.r_extra) j.schema.attrs.push_back(rs.attrs[k]);
        return add_node(std::move(j));
    }

    std::size_t build(PropertyGraph& graph, const ExprPtr& e) {
        return std::visit(
            [&](const auto& n) -> std::size_t {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, GetVerticesNode>) {
                    return add_base(graph, n.base);
                } else if constexpr (std::is_same_v<T, GetEdgesNode>) {
                    return add_base(graph, n.base);
                } else if constexpr (std::is_same_v<T, SelectionNode>) {
                    std::size_t c = build(graph, n.child);
                    return add_node(ivm::SelectNode{c, n.predicate, node_schema(c)});
                } else if constexpr (std::is_same_v<T, ProjectionNode>) {
                    std::size_t c = build(graph, n.child);
                    ivm::ProjectNode p;
                    p.child = c;
                    p.schema = schema_of(e);
                    const Schema& cs = node_schema(c);
                    for (const auto& item : n.items) {
                        const auto* a = std::get_if<AttrRef>(&item.expr);
                        if (!a) throw Error("nested access in FRA projection");
                        p.columns.push_back(cs.index_of(a->name, "projection"));
                    }
                    return add_node(std::move(p));
                } else if constexpr (std::is_same_v<T, NaturalJoinNode>) {
                    std::size_t l = build(graph, n.left);
                    std::size_t r = build(graph, n.right);
                    return add_join(l, r);
                } else if constexpr (std::is_same_v<T, TransitiveJoinNode>) {
                    return build_transitive(graph, e, n);
                } else {
                    static_assert(std::is_same_v<T, ExpandOutNode> ||
                                  std::is_same_v<T, UnnestNode>);
                    throw Error("non-FRA operator in expression");
                }
            },
            e->node);
    }

    // Lowering of left join* get-edges:
    //   [left  x vertices(src label)]  -- redundant label guard, kept exact
    //   -> transitive core over the raw typed edge relation
    //   -> join with vertices(tgt label, tgt props)
    //   -> column reorder to the declared schema.
    // The core traverses all edges of the type; endpoint labels apply only to
    // the path's first and last vertex.
    std::size_t build_transitive(PropertyGraph& graph, const ExprPtr& e,
                                 const TransitiveJoinNode& n) {
        const auto& ge = detail::transitive_right(n).base;
        std::size_t l = build(graph, n.left);
        if (ge.src_label)
            l = add_join(l, add_base(graph, VertexBase{ge.src_var, ge.src_label, {}}));

        std::string tag = "$t" + std::to_string(nodes_.size());
        EdgeBase raw;
        raw.src_var = tag + "s";
        raw.edge_var = tag + "e";
        raw.edge_type = ge.edge_type;
        raw.tgt_var = tag + "t";
        std::size_t eb = add_base(graph, raw);

        ivm::TransJoinNode core;
        core.left = l;
        core.edges = eb;
        core.src_pos = node_schema(l).index_of(ge.src_var, "transitive join");
        core.range = n.range;
        core.with_path = n.path_attr.has_value();
        core.schema = node_schema(l);
        core.schema.append({ge.tgt_var, AttrKind::Vertex}, "transitive join");
        if (n.path_attr) core.schema.append({*n.path_attr, AttrKind::Path}, "transitive join");
        std::size_t out = add_node(std::move(core));

        if (ge.tgt_label || !ge.tgt_props.empty())
            out = add_join(out, add_base(graph, VertexBase{ge.tgt_var, ge.tgt_label, ge.tgt_props}));

        Schema target = schema_of(e);
        if (node_schema(out) == target) return out;
        ivm::ProjectNode reorder;
        reorder.child = out;
        reorder.schema = target;
        for (const auto& a : target.attrs)
            reorder.columns.push_back(node_schema(out).index_of(a.name, "transitive join"));
        return add_node(std::move(reorder));
    }

    // --- per-node delta propagation ---

    DeltaBag process(ivm::BaseNode& n, std::vector<DeltaBag>&,
                     const std::map<std::size_t, DeltaBag>& base_deltas) {
        auto it = base_deltas.find(n.base_id);
        if (it == base_deltas.end()) return DeltaBag(n.schema);
        return it->second;
    }

    DeltaBag process(ivm::SelectNode& n, std::vector<DeltaBag>& out,
                     const std::map<std::size_t, DeltaBag>&) {
        const DeltaBag& in = out[n.child];
        DeltaBag d(n.schema);
        for (const auto& [t, m] : in.rows) {
            bool keep = eval_predicate(n.predicate, [&](const Operand& op) -> Value {
                if (const auto* a = std::get_if<AttrRef>(&op))
                    return t[n.schema.index_of(a->name)];
                return std::get<Value>(op);
            });
            if (keep) d.add(t, m);
        }
        return d;
    }

    DeltaBag process(ivm::ProjectNode& n, std::vector<DeltaBag>& out,
                     const std::map<std::size_t, DeltaBag>&) {
        const DeltaBag& in = out[n.child];
        DeltaBag d(n.schema);
        for (const auto& [t, m] : in.rows) {
            Tuple row;
            row.reserve(n.columns.size());
            for (auto c : n.columns) row.push_back(t[c]);
            d.add(row, m);
        }
        return d;
    }

    // Classical signed three-term rule: delta(l join r) =
    // dl join r_old + l_old join dr + dl join dr, realized as
    // dl join r_old, then dr join l_new.
    DeltaBag process(ivm::JoinNode& n, std::vector<DeltaBag>& out,
                     const std::map<std::size_t, DeltaBag>&) {
        const DeltaBag& dl = out[n.left];
        const DeltaBag& dr = out[n.right];
        DeltaBag d(n.schema);

        auto key_of = [](const Tuple& t, const std::vector<std::size_t>& pos) {
            Tuple key;
            key.reserve(pos.size());
            for (auto p : pos) key.push_back(t[p]);
            return key;
        };
        auto index_add = [](std::unordered_map<Tuple, TupleCounts, TupleHash>& index,
                            const Tuple& key, const Tuple& t, std::int64_t m) {
            auto& bucket = index[key];
            auto it = bucket.find(t);
            if (it == bucket.end()) {
                bucket.emplace(t, m);
            } else {
                it->second += m;
                if (it->second == 0) bucket.erase(it);
            }
            if (bucket.empty()) index.erase(key);
        };

        for (const auto& [lt, lm] : dl.rows) {
            auto it = n.r_index.find(key_of(lt, n.l_key));
            if (it == n.r_index.end()) continue;
            for (const auto& [rt, rm] : it->second) {
                Tuple row = lt;
                for (auto k : n.r_extra) row.push_back(rt[k]);
                d.add(row, lm * rm);
            }
        }
        for (const auto& [lt, lm] : dl.rows) index_add(n.l_index, key_of(lt, n.l_key), lt, lm);
        for (const auto& [rt, rm] : dr.rows) {
            auto it = n.l_index.find(key_of(rt, n.r_key));
            if (it != n.l_index.end()) {
                for (const auto& [lt, lm] : it->second) {
                    Tuple row = lt;
                    for (auto k : n.r_extra) row.push_back(rt[k]);
                    d.add(row, lm * rm);
                }
            }
            index_add(n.r_index, key_of(rt, n.r_key), rt, rm);
        }
        return d;
    }

    DeltaBag process(ivm::TransJoinNode& n, std::vector<DeltaBag>& out,
                     const std::map<std::size_t, DeltaBag>&) {
        using PathIds = ivm::TransJoinNode::PathIds;
        const DeltaBag& dl = out[n.left];
        const DeltaBag& de = out[n.edges];
        DeltaBag d(n.schema);

        auto in_bounds = [&](std::uint32_t hops) {
            return hops >= n.range.min && (!n.range.max || hops <= *n.range.max);
        };
        auto make_row = [&](const Tuple& lt, const PathIds& p) {
            Tuple row = lt;
            row.push_back(Value::vertex_ref(p.back()));
            if (n.with_path) row.push_back(Value(PathValue{p}));
            return row;
        };
        auto emit_for_left = [&](const PathIds& p, std::int64_t sign) {
            if (!in_bounds(ivm::hops_of(p))) return;
            auto it = n.left_by_src.find(p.front());
            if (it == n.left_by_src.end()) return;
            for (const auto& [lt, lm] : it->second) d.add(make_row(lt, p), sign * lm);
        };
        auto register_path = [&](const PathIds& p) {
            const PathIds* ptr = &*n.paths.insert(p).first;
            n.by_start[p.front()].insert(ptr);
            n.by_end[p.back()].insert(ptr);
            for (std::size_t i = 1; i < p.size(); i += 2) n.by_edge[p[i]].insert(ptr);
            ++tuples_processed_;
        };
        auto unregister_path = [&](const PathIds* ptr) {
            const PathIds& p = *ptr;
            n.by_start[p.front()].erase(ptr);
            n.by_end[p.back()].erase(ptr);
            for (std::size_t i = 1; i < p.size(); i += 2) n.by_edge[p[i]].erase(ptr);
            // erase by iterator: p aliases the stored element
            n.paths.erase(n.paths.find(p));
            ++tuples_processed_;
        };
        // extends the path in place over unused edges, registering every
        // extension (the path itself is registered by the caller)
        auto extend = [&](auto&& self, PathIds& p, std::set<ElementId>& used) -> void {
            if (n.range.max && ivm::hops_of(p) >= *n.range.max) return;
            auto ait = n.adj.find(p.back());
            if (ait == n.adj.end()) return;
            for (const auto& [eid, w] : ait->second) {
                if (used.count(eid)) continue;
                used.insert(eid);
                p.push_back(eid);
                p.push_back(w);
                register_path(p);
                emit_for_left(p, +1);
                self(self, p, used);
                p.pop_back();
                p.pop_back();
                used.erase(eid);
            }
        };

        // 1. edge removals: retract every anchored path containing the edge
        for (const auto& [t, m] : de.rows) {
            if (m >= 0) continue;
            if (m != -1) throw NegativeMultiplicityError("edge base delta not a set delta");
            ElementId s = t[0].as_id(), e = t[1].as_id();
            auto eit = n.edge_st.find(e);
            if (eit == n.edge_st.end()) throw NegativeMultiplicityError("removal of unknown edge");
            n.adj[s].erase(e);
            if (n.adj[s].empty()) n.adj.erase(s);
            n.edge_st.erase(eit);
            auto affected = n.by_edge[e];  // copy: unregister mutates the index
            for (const PathIds* p : affected) {
                emit_for_left(*p, -1);
                unregister_path(p);
            }
            n.by_edge.erase(e);
        }

        // 2. edge insertions: new anchored paths are exactly those containing
        // the edge; compose maintained paths ending at its source (plus the
        // empty extension at an anchor) with fresh extensions from its target
        for (const auto& [t, m] : de.rows) {
            if (m <= 0) continue;
            if (m != 1) throw NegativeMultiplicityError("edge base delta not a set delta");
            ElementId s = t[0].as_id(), e = t[1].as_id(), w = t[2].as_id();
            std::vector<PathIds> prefixes;
            {
                auto bit = n.by_end.find(s);
                if (bit != n.by_end.end())
                    for (const PathIds* q : bit->second) prefixes.push_back(*q);
            }
            auto ait = n.anchor_count.find(s);
            if (ait != n.anchor_count.end() && ait->second > 0)
                prefixes.push_back(PathIds{s});  // empty extension
            n.adj[s].emplace(e, w);
            n.edge_st.emplace(e, std::make_pair(s, w));
            for (const auto& prefix : prefixes) {
                if (n.range.max && ivm::hops_of(prefix) + 1 > *n.range.max) continue;
                PathIds p = prefix;
                std::set<ElementId> used;
                for (std::size_t i = 1; i < p.size(); i += 2) used.insert(p[i]);
                used.insert(e);
                p.push_back(e);
                p.push_back(w);
                register_path(p);
                emit_for_left(p, +1);
                extend(extend, p, used);
            }
        }

        // 3. left deltas against the updated path bag
        for (const auto& [lt, lm] : dl.rows) {
            ElementId v0 = lt[n.src_pos].as_id();
            if (lm > 0 && n.anchor_count[v0] == 0) {
                // new anchor: seed all edge-distinct paths from v0
                PathIds p{v0};
                std::set<ElementId> used;
                auto seed = [&](auto&& self, PathIds& q, std::set<ElementId>& u) -> void {
                    if (n.range.max && ivm::hops_of(q) >= *n.range.max) return;
                    auto ait2 = n.adj.find(q.back());
                    if (ait2 == n.adj.end()) return;
                    for (const auto& [eid, tgt] : ait2->second) {
                        if (u.count(eid)) continue;
                        u.insert(eid);
                        q.push_back(eid);
                        q.push_back(tgt);
                        register_path(q);
                        self(self, q, u);
                        q.pop_back();
                        q.pop_back();
                        u.erase(eid);
                    }
                };
                seed(seed, p, used);
            }
            auto pit = n.by_start.find(v0);
            if (pit != n.by_start.end()) {
                for (const PathIds* p : pit->second)
                    if (in_bounds(ivm::hops_of(*p))) d.add(make_row(lt, *p), lm);
            }
            // update left materialization
            auto it = n.left_rows.find(lt);
            std::int64_t cur = it == n.left_rows.end() ? 0 : it->second;
            if (cur + lm < 0)
                throw NegativeMultiplicityError("left input multiplicity below zero");
            if (cur + lm == 0) {
                if (it != n.left_rows.end()) n.left_rows.erase(it);
            } else {
                n.left_rows[lt] = cur + lm;
            }
            auto& bucket = n.left_by_src[v0];
            auto bit = bucket.find(lt);
            std::int64_t bcur = bit == bucket.end() ? 0 : bit->second;
            if (bcur + lm == 0) {
                if (bit != bucket.end()) bucket.erase(bit);
            } else {
                bucket[lt] = bcur + lm;
            }
            if (bucket.empty()) n.left_by_src.erase(v0);
            n.anchor_count[v0] += lm;
            if (n.anchor_count[v0] == 0) {
                n.anchor_count.erase(v0);
                auto sit = n.by_start.find(v0);
                if (sit != n.by_start.end()) {
                    auto stale = sit->second;  // copy
                    for (const PathIds* p : stale) unregister_path(p);
                }
            }
        }
        return d;
    }

    std::vector<ivm::Node> nodes_;
    std::size_t root_ = 0;
    Schema schema_;
    TupleBag result_;
    std::map<std::size_t, std::size_t> base_nodes_;  // registry id -> node index
    std::uint64_t tuples_processed_ = 0;
};

}  // namespace grapevine
