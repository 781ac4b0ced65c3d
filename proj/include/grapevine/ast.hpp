#pragma once

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "grapevine/expr.hpp"

namespace grapevine {

struct PatternNode {
    std::string var;  // generated ($nK) when the query leaves the node anonymous
    std::optional<std::string> label;
    bool operator==(const PatternNode& o) const { return var == o.var && label == o.label; }
};

struct PatternEdge {
    std::optional<std::string> var;
    std::optional<std::string> edge_type;
    bool variable_length = false;
    std::uint32_t min_hops = 1;
    std::optional<std::uint32_t> max_hops = 1;  // unset = unbounded (variable length only)
    bool operator==(const PatternEdge& o) const {
        return var == o.var && edge_type == o.edge_type && variable_length == o.variable_length &&
               min_hops == o.min_hops && max_hops == o.max_hops;
    }
};

// A single linear path pattern: nodes and edges alternate.
struct PatternGraph {
    std::optional<std::string> path_binding;
    std::vector<PatternNode> nodes;
    std::vector<PatternEdge> edges;
    bool operator==(const PatternGraph& o) const {
        return path_binding == o.path_binding && nodes == o.nodes && edges == o.edges;
    }
};

struct ReturnItem {
    std::string var;
    std::optional<std::string> key;  // set for var.property
    std::string name;                // output column name
    bool operator==(const ReturnItem& o) const {
        return var == o.var && key == o.key && name == o.name;
    }
};

struct QueryAst {
    PatternGraph match;
    std::optional<BoolExpr> where_clause;
    std::vector<ReturnItem> return_items;
    bool operator==(const QueryAst& o) const {
        return match == o.match && where_clause == o.where_clause &&
               return_items == o.return_items;
    }
};

inline bool is_generated_name(const std::string& s) { return !s.empty() && s[0] == '$'; }

inline std::string print_literal(const Value& v) {
    std::ostringstream out;
    std::visit(
        [&out](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, bool>) {
                out << (x ? "true" : "false");
            } else if constexpr (std::is_same_v<T, std::int64_t>) {
                out << x;
            } else if constexpr (std::is_same_v<T, double>) {
                out.precision(17);
                out << x;
                // keep floats distinguishable from integers when re-parsed
                if (out.str().find_first_of(".eE") == std::string::npos) out << ".0";
            } else if constexpr (std::is_same_v<T, std::string>) {
                out << '\'';
                for (char c : x) {
                    if (c == '\'' || c == '\\') out << '\\';
                    out << c;
                }
                out << '\'';
            } else {
                out << "<?>";
            }
        },
        v.data());
    return out.str();
}

inline std::string print_operand(const Operand& op) {
    if (const auto* a = std::get_if<AttrRef>(&op)) return a->name;
    if (const auto* p = std::get_if<PropRef>(&op)) return p->var + "." + p->key;
    return print_literal(std::get<Value>(op));
}

// Reconstructs query text; parse(print_query(ast)) is structurally equal to ast.
inline std::string print_query(const QueryAst& q) {
    std::ostringstream out;
    out << "MATCH ";
    if (q.match.path_binding) out << *q.match.path_binding << " = ";
    for (std::size_t i = 0; i < q.match.nodes.size(); ++i) {
        const auto& n = q.match.nodes[i];
        out << '(';
        if (!is_generated_name(n.var)) out << n.var;
        if (n.label) out << ':' << *n.label;
        out << ')';
        if (i < q.match.edges.size()) {
            const auto& e = q.match.edges[i];
            out << "-[";
            if (e.var) out << *e.var;
            if (e.edge_type) out << ':' << *e.edge_type;
            if (e.variable_length) {
                out << '*';
                if (e.min_hops != 1 || e.max_hops) {
                    out << e.min_hops << "..";
                    if (e.max_hops) out << *e.max_hops;
                }
            }
            out << "]->";
        }
    }
    if (q.where_clause) {
        out << " WHERE ";
        for (std::size_t i = 0; i < q.where_clause->conjuncts.size(); ++i) {
            if (i) out << " AND ";
            const auto& c = q.where_clause->conjuncts[i];
            out << print_operand(c.lhs) << ' ' << cmp_op_text(c.op) << ' '
                << print_operand(c.rhs);
        }
    }
    out << " RETURN ";
    for (std::size_t i = 0; i < q.return_items.size(); ++i) {
        if (i) out << ", ";
        const auto& r = q.return_items[i];
        std::string expr = r.var + (r.key ? "." + *r.key : "");
        out << expr;
        if (r.name != expr) out << " AS " << r.name;
    }
    return out.str();
}

}  // namespace grapevine
