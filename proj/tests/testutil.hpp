#pragma once

// Shared fixtures and generators for the test suite.

#include <algorithm>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "grapevine/eval.hpp"
#include "grapevine/graph.hpp"
#include "grapevine/rewriter.hpp"

namespace testutil {

using namespace grapevine;

// Discussion-thread fixture: Post 1 with transitive Comm replies 2 and 3,
// all written in English. Edge 101: 1->2, edge 102: 2->3, both REPLY.
inline PropertyGraph example_graph() {
    PropertyGraph g;
    Transaction tx;
    tx.push_back(AddVertex{VertexRecord{1, {"Post"}, {{"lang", Value("en")}}}});
    tx.push_back(AddVertex{VertexRecord{2, {"Comm"}, {{"lang", Value("en")}}}});
    tx.push_back(AddVertex{VertexRecord{3, {"Comm"}, {{"lang", Value("en")}}}});
    tx.push_back(AddEdge{EdgeRecord{101, 1, 2, "REPLY", {}}});
    tx.push_back(AddEdge{EdgeRecord{102, 2, 3, "REPLY", {}}});
    g.apply_transaction(tx);
    return g;
}

inline const char* example_query() {
    return "MATCH t = (p:Post)-[:REPLY*]->(c:Comm) WHERE p.lang = c.lang RETURN p, t";
}

// Query corpus: exercises single hops, chains, variable-length edges with and
// without bounds, path bindings, labels, edge variables, property predicates,
// literals, and aliases.
inline std::vector<std::string> query_corpus() {
    return {
        example_query(),
        "MATCH (p:Post) RETURN p",
        "MATCH (p:Post) WHERE p.lang = 'en' RETURN p.lang",
        "MATCH (a)-[e:REPLY]->(b) RETURN a, e, b",
        "MATCH (a:Comm)-[:REPLY]->(b:Comm) WHERE a.lang <> b.lang RETURN a, b",
        "MATCH (a:Post)-[:REPLY*1..3]->(b) RETURN a, b",
        "MATCH t = (a)-[:REPLY*2..2]->(b) RETURN t",
        "MATCH (a:Post)-[:REPLY]->(b)-[:REPLY]->(c:Comm) WHERE a.lang = c.lang RETURN a, c",
        "MATCH (a)-[:KNOWS]->(b) WHERE a.score < b.score RETURN a.score AS s1, b.score AS s2",
        "MATCH (a:User) WHERE a.score >= 10 RETURN a, a.score",
        "MATCH (a)-[:REPLY*]->(b:Comm) WHERE b.lang = 'en' RETURN b",
        "MATCH (a:Comm)-[e:KNOWS]->(b:User) RETURN e",
        "MATCH t = (a:Post)-[:REPLY*1..4]->(b:Comm) WHERE a.lang = b.lang RETURN a, b, t",
        "MATCH (a)-[:REPLY]->(b)-[:KNOWS]->(c) WHERE a.lang = 'en' AND c.score > 1 RETURN a, c",
    };
}

// Random graph: up to `max_vertices` vertices with Post/Comm/User labels and
// lang/score properties; sparse, mostly-forward REPLY/KNOWS edges so that
// variable-length path counts stay manageable.
inline PropertyGraph random_graph(std::mt19937& rng, std::size_t max_vertices = 50) {
    std::uniform_int_distribution<std::size_t> nv(1, max_vertices);
    std::size_t n = nv(rng);
    auto pick = [&](std::initializer_list<const char*> xs) {
        std::uniform_int_distribution<std::size_t> d(0, xs.size() - 1);
        return std::string(*(xs.begin() + d(rng)));
    };
    auto chance = [&](double p) {
        return std::uniform_real_distribution<>(0.0, 1.0)(rng) < p;
    };

    Transaction tx;
    for (std::size_t i = 1; i <= n; ++i) {
        VertexRecord v;
        v.id = i;
        v.labels.insert(pick({"Post", "Comm", "User"}));
        if (chance(0.2)) v.labels.insert(pick({"Post", "Comm", "User"}));
        if (chance(0.8)) v.properties["lang"] = Value(pick({"en", "de", "fr"}));
        if (chance(0.5))
            v.properties["score"] =
                Value(std::uniform_int_distribution<std::int64_t>(0, 20)(rng));
        tx.push_back(AddVertex{std::move(v)});
    }
    std::size_t edges = n + n / 5;
    std::uniform_int_distribution<ElementId> vid(1, n);
    for (std::size_t i = 0; i < edges; ++i) {
        ElementId s = vid(rng), t = vid(rng);
        if (s > t && chance(0.8)) std::swap(s, t);  // mostly forward
        EdgeRecord e;
        e.id = 1000 + i;
        e.source = s;
        e.target = t;
        e.edge_type = pick({"REPLY", "REPLY", "KNOWS"});
        if (chance(0.2))
            e.properties["score"] =
                Value(std::uniform_int_distribution<std::int64_t>(0, 5)(rng));
        tx.push_back(AddEdge{std::move(e)});
    }
    PropertyGraph g;
    g.apply_transaction(tx);
    return g;
}

// Random transaction valid against `g` (ops validated sequentially on a
// scratch copy so intra-transaction dependencies hold).
inline Transaction random_transaction(std::mt19937& rng, const PropertyGraph& g) {
    PropertyGraph scratch = g;
    std::uniform_int_distribution<int> nops(1, 4);
    auto chance = [&](double p) {
        return std::uniform_real_distribution<>(0.0, 1.0)(rng) < p;
    };
    auto pick_vertex = [&]() -> std::optional<ElementId> {
        if (scratch.vertices().empty()) return std::nullopt;
        std::vector<ElementId> ids;
        for (const auto& [id, v] : scratch.vertices()) {
            (void)v;
            ids.push_back(id);
        }
        return ids[std::uniform_int_distribution<std::size_t>(0, ids.size() - 1)(rng)];
    };
    auto pick_edge = [&]() -> std::optional<ElementId> {
        if (scratch.edges().empty()) return std::nullopt;
        std::vector<ElementId> ids;
        for (const auto& [id, e] : scratch.edges()) {
            (void)e;
            ids.push_back(id);
        }
        return ids[std::uniform_int_distribution<std::size_t>(0, ids.size() - 1)(rng)];
    };
    auto next_id = [&]() {
        ElementId m = 10000;
        if (!scratch.vertices().empty()) m = std::max(m, scratch.vertices().rbegin()->first);
        if (!scratch.edges().empty()) m = std::max(m, scratch.edges().rbegin()->first);
        return m + 1;
    };
    auto pick_label = [&]() {
        static const char* labels[] = {"Post", "Comm", "User"};
        return std::string(labels[std::uniform_int_distribution<int>(0, 2)(rng)]);
    };
    auto random_value = [&]() -> Value {
        static const char* langs[] = {"en", "de", "fr"};
        if (chance(0.5)) return Value(langs[std::uniform_int_distribution<int>(0, 2)(rng)]);
        return Value(std::uniform_int_distribution<std::int64_t>(0, 20)(rng));
    };

    Transaction tx;
    int want = nops(rng);
    for (int attempts = 0; static_cast<int>(tx.size()) < want && attempts < 40; ++attempts) {
        UpdateOp op = RemoveEdge{0};
        switch (std::uniform_int_distribution<int>(0, 7)(rng)) {
            case 0: {
                VertexRecord v;
                v.id = next_id();
                v.labels.insert(pick_label());
                if (chance(0.7)) v.properties["lang"] = random_value();
                op = AddVertex{std::move(v)};
                break;
            }
            case 1: {
                auto s = pick_vertex(), t = pick_vertex();
                if (!s || !t) continue;
                EdgeRecord e;
                e.id = next_id();
                e.source = *s;
                e.target = *t;
                e.edge_type = chance(0.7) ? "REPLY" : "KNOWS";
                op = AddEdge{std::move(e)};
                break;
            }
            case 2: {
                auto e = pick_edge();
                if (!e) continue;
                op = RemoveEdge{*e};
                break;
            }
            case 3: {
                // only isolated vertices are removable
                std::vector<ElementId> isolated;
                for (const auto& [id, v] : scratch.vertices()) {
                    (void)v;
                    if (scratch.out_edges(id).empty() && scratch.in_edges(id).empty())
                        isolated.push_back(id);
                }
                if (isolated.empty()) continue;
                op = RemoveVertex{isolated[std::uniform_int_distribution<std::size_t>(
                    0, isolated.size() - 1)(rng)]};
                break;
            }
            case 4: {
                auto v = pick_vertex();
                if (!v) continue;
                op = SetVertexProperty{*v, chance(0.7) ? "lang" : "score", random_value()};
                break;
            }
            case 5: {
                auto v = pick_vertex();
                if (!v) continue;
                op = RemoveVertexProperty{*v, chance(0.7) ? "lang" : "score"};
                break;
            }
            case 6: {
                auto e = pick_edge();
                if (!e) continue;
                op = SetEdgeProperty{*e, "score", random_value()};
                break;
            }
            default: {
                auto e = pick_edge();
                if (!e) continue;
                op = RemoveEdgeProperty{*e, "score"};
                break;
            }
        }
        try {
            scratch.apply_transaction(Transaction{op});
        } catch (const Error&) {
            continue;
        }
        tx.push_back(std::move(op));
    }
    return tx;
}

// Inverse of `tx` relative to `before` (the graph state the transaction was
// applied to): applying tx then the inverse restores the original graph.
inline Transaction invert_transaction(const PropertyGraph& before, const Transaction& tx) {
    PropertyGraph scratch = before;
    Transaction inverse;
    for (const auto& op : tx) {
        std::visit(
            [&](const auto& o) {
                using T = std::decay_t<decltype(o)>;
                if constexpr (std::is_same_v<T, AddVertex>) {
                    inverse.push_back(RemoveVertex{o.vertex.id});
                } else if constexpr (std::is_same_v<T, RemoveVertex>) {
                    inverse.push_back(AddVertex{scratch.vertex(o.id)});
                } else if constexpr (std::is_same_v<T, AddEdge>) {
                    inverse.push_back(RemoveEdge{o.edge.id});
                } else if constexpr (std::is_same_v<T, RemoveEdge>) {
                    inverse.push_back(AddEdge{scratch.edge(o.id)});
                } else if constexpr (std::is_same_v<T, SetVertexProperty> ||
                                     std::is_same_v<T, RemoveVertexProperty>) {
                    const auto& props = scratch.vertex(o.id).properties;
                    auto it = props.find(o.key);
                    if (it != props.end()) {
                        inverse.push_back(SetVertexProperty{o.id, o.key, it->second});
                    } else if constexpr (std::is_same_v<T, SetVertexProperty>) {
                        inverse.push_back(RemoveVertexProperty{o.id, o.key});
                    }
                } else {
                    const auto& props = scratch.edge(o.id).properties;
                    auto it = props.find(o.key);
                    if (it != props.end()) {
                        inverse.push_back(SetEdgeProperty{o.id, o.key, it->second});
                    } else if constexpr (std::is_same_v<T, SetEdgeProperty>) {
                        inverse.push_back(RemoveEdgeProperty{o.id, o.key});
                    }
                }
            },
            op);
        scratch.apply_transaction(Transaction{op});
    }
    std::reverse(inverse.begin(), inverse.end());
    return inverse;
}

// (variable, property-key) pairs referenced by the query text, for the
// minimal-schema check.
inline std::set<std::pair<std::string, std::string>> referenced_props(const QueryAst& ast) {
    std::set<std::pair<std::string, std::string>> out;
    auto note = [&](const Operand& op) {
        if (const auto* p = std::get_if<PropRef>(&op)) out.insert({p->var, p->key});
    };
    if (ast.where_clause) {
        for (const auto& c : ast.where_clause->conjuncts) {
            note(c.lhs);
            note(c.rhs);
        }
    }
    for (const auto& r : ast.return_items)
        if (r.key) out.insert({r.var, *r.key});
    return out;
}

}  // namespace testutil
