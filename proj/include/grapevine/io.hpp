#pragma once

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "grapevine/bag.hpp"
#include "grapevine/graph.hpp"

namespace grapevine {

namespace io {

using nlohmann::json;

// Input property values are JSON scalars (atomic) or arrays (bags); paths and
// null never appear in input files.
inline Value value_from_json(const json& j, std::size_t line) {
    if (j.is_boolean()) return Value(j.get<bool>());
    if (j.is_number_integer() || j.is_number_unsigned()) return Value(j.get<std::int64_t>());
    if (j.is_number_float()) return Value(j.get<double>());
    if (j.is_string()) return Value(j.get<std::string>());
    if (j.is_array()) {
        Value::Bag elems;
        for (const auto& e : j) elems.push_back(value_from_json(e, line));
        return Value::bag(std::move(elems));
    }
    throw InputError("line " + std::to_string(line) + ": unsupported property value " + j.dump());
}

// Output rendering: vertex/edge references print as their ids, paths as the
// vertex-id array (the display convention: edges are omitted from paths),
// missing as null.
inline json value_to_json(const Value& v) {
    return std::visit(
        [](const auto& x) -> json {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Value::MissingT>) {
                return nullptr;
            } else if constexpr (std::is_same_v<T, Value::Bag>) {
                json arr = json::array();
                for (const auto& e : x) arr.push_back(value_to_json(e));
                return arr;
            } else if constexpr (std::is_same_v<T, PathValue>) {
                json arr = json::array();
                for (std::size_t i = 0; i < x.ids.size(); i += 2) arr.push_back(x.ids[i]);
                return arr;
            } else {
                return json(x);
            }
        },
        v.data());
}

inline std::map<std::string, Value> properties_from_json(const json& j, std::size_t line) {
    std::map<std::string, Value> props;
    if (j.is_null()) return props;
    if (!j.is_object())
        throw InputError("line " + std::to_string(line) + ": \"properties\" must be an object");
    for (const auto& [key, val] : j.items()) props.emplace(key, value_from_json(val, line));
    return props;
}

inline json properties_to_json(const std::map<std::string, Value>& props) {
    json j = json::object();
    for (const auto& [key, val] : props) j[key] = value_to_json(val);
    return j;
}

namespace detail {

inline json parse_line(const std::string& text, std::size_t line) {
    json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded())
        throw InputError("line " + std::to_string(line) + ": invalid JSON");
    return j;
}

inline const json& field(const json& j, const char* name, std::size_t line) {
    auto it = j.find(name);
    if (it == j.end())
        throw InputError("line " + std::to_string(line) + ": missing field \"" +
                         std::string(name) + "\"");
    return *it;
}

inline ElementId id_field(const json& j, const char* name, std::size_t line) {
    const json& f = field(j, name, line);
    if (!f.is_number_unsigned() && !(f.is_number_integer() && f.get<std::int64_t>() >= 0))
        throw InputError("line " + std::to_string(line) + ": \"" + std::string(name) +
                         "\" must be a non-negative integer");
    return f.get<ElementId>();
}

inline bool blank(const std::string& s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

}  // namespace detail

inline VertexRecord vertex_from_json(const json& j, std::size_t line) {
    VertexRecord v;
    v.id = detail::id_field(j, "id", line);
    if (auto it = j.find("labels"); it != j.end()) {
        if (!it->is_array())
            throw InputError("line " + std::to_string(line) + ": \"labels\" must be an array");
        for (const auto& l : *it) {
            if (!l.is_string())
                throw InputError("line " + std::to_string(line) + ": labels must be strings");
            v.labels.insert(l.get<std::string>());
        }
    }
    if (auto it = j.find("properties"); it != j.end())
        v.properties = properties_from_json(*it, line);
    return v;
}

inline EdgeRecord edge_from_json(const json& j, std::size_t line) {
    EdgeRecord e;
    e.id = detail::id_field(j, "id", line);
    e.source = detail::id_field(j, "source", line);
    e.target = detail::id_field(j, "target", line);
    const json& type = detail::field(j, "type", line);
    if (!type.is_string())
        throw InputError("line " + std::to_string(line) + ": \"type\" must be a string");
    e.edge_type = type.get<std::string>();
    if (auto it = j.find("properties"); it != j.end())
        e.properties = properties_from_json(*it, line);
    return e;
}

// Graph file: JSON-lines, one {"vertex": {...}} or {"edge": {...}} per line.
// Vertex lines need not precede the edges that reference them; referential
// integrity is checked after the whole file is read.
inline PropertyGraph load_graph(std::istream& in) {
    std::vector<VertexRecord> vertices;
    std::vector<EdgeRecord> edges;
    std::string text;
    std::size_t line = 0;
    while (std::getline(in, text)) {
        ++line;
        if (detail::blank(text)) continue;
        json j = detail::parse_line(text, line);
        if (auto it = j.find("vertex"); it != j.end()) {
            vertices.push_back(vertex_from_json(*it, line));
        } else if (auto it2 = j.find("edge"); it2 != j.end()) {
            edges.push_back(edge_from_json(*it2, line));
        } else {
            throw InputError("line " + std::to_string(line) +
                             ": expected a \"vertex\" or \"edge\" object");
        }
    }
    PropertyGraph g;
    Transaction tx;
    for (auto& v : vertices) tx.push_back(AddVertex{std::move(v)});
    for (auto& e : edges) tx.push_back(AddEdge{std::move(e)});
    try {
        g.apply_transaction(tx);
    } catch (const Error& err) {
        throw InputError(std::string("graph file: ") + err.what());
    }
    return g;
}

inline json vertex_to_json(const VertexRecord& v) {
    json labels = json::array();
    for (const auto& l : v.labels) labels.push_back(l);
    return json{{"vertex",
                 {{"id", v.id}, {"labels", labels}, {"properties", properties_to_json(v.properties)}}}};
}

inline json edge_to_json(const EdgeRecord& e) {
    return json{{"edge",
                 {{"id", e.id},
                  {"source", e.source},
                  {"target", e.target},
                  {"type", e.edge_type},
                  {"properties", properties_to_json(e.properties)}}}};
}

inline void save_graph(const PropertyGraph& g, std::ostream& out) {
    for (const auto& [id, v] : g.vertices()) {
        (void)id;
        out << vertex_to_json(v).dump() << '\n';
    }
    for (const auto& [id, e] : g.edges()) {
        (void)id;
        out << edge_to_json(e).dump() << '\n';
    }
}

inline UpdateOp update_op_from_json(const json& j, std::size_t line) {
    const json& op = detail::field(j, "op", line);
    if (!op.is_string())
        throw InputError("line " + std::to_string(line) + ": \"op\" must be a string");
    std::string name = op.get<std::string>();
    if (name == "add_vertex") return AddVertex{vertex_from_json(detail::field(j, "vertex", line), line)};
    if (name == "remove_vertex") return RemoveVertex{detail::id_field(j, "id", line)};
    if (name == "add_edge") return AddEdge{edge_from_json(detail::field(j, "edge", line), line)};
    if (name == "remove_edge") return RemoveEdge{detail::id_field(j, "id", line)};
    auto key = [&]() -> std::string {
        const json& k = detail::field(j, "key", line);
        if (!k.is_string())
            throw InputError("line " + std::to_string(line) + ": \"key\" must be a string");
        return k.get<std::string>();
    };
    if (name == "set_vertex_property")
        return SetVertexProperty{detail::id_field(j, "id", line), key(),
                                 value_from_json(detail::field(j, "value", line), line)};
    if (name == "remove_vertex_property")
        return RemoveVertexProperty{detail::id_field(j, "id", line), key()};
    if (name == "set_edge_property")
        return SetEdgeProperty{detail::id_field(j, "id", line), key(),
                               value_from_json(detail::field(j, "value", line), line)};
    if (name == "remove_edge_property")
        return RemoveEdgeProperty{detail::id_field(j, "id", line), key()};
    throw InputError("line " + std::to_string(line) + ": unknown op \"" + name + "\"");
}

// Update file: JSON-lines, one op per line with a "tx" integer grouping lines
// into transactions; tx numbers must be ascending and contiguous.
inline std::vector<Transaction> load_updates(std::istream& in) {
    std::vector<Transaction> txs;
    std::string text;
    std::size_t line = 0;
    bool have_cur = false;
    std::int64_t cur_tx = 0;
    while (std::getline(in, text)) {
        ++line;
        if (detail::blank(text)) continue;
        json j = detail::parse_line(text, line);
        const json& txf = detail::field(j, "tx", line);
        if (!txf.is_number_integer() && !txf.is_number_unsigned())
            throw InputError("line " + std::to_string(line) + ": \"tx\" must be an integer");
        std::int64_t tx = txf.get<std::int64_t>();
        if (!have_cur) {
            have_cur = true;
            cur_tx = tx;
            txs.emplace_back();
        } else if (tx == cur_tx + 1) {
            cur_tx = tx;
            txs.emplace_back();
        } else if (tx != cur_tx) {
            throw InputError("line " + std::to_string(line) + ": tx " + std::to_string(tx) +
                             " is not ascending and contiguous (previous tx " +
                             std::to_string(cur_tx) + ")");
        }
        txs.back().push_back(update_op_from_json(j, line));
    }
    return txs;
}

// One JSON line per distinct tuple, sorted lexicographically on the
// serialized tuple text. `extra` fields (tx/view envelope) are prepended to
// every line.
inline std::vector<std::string> serialize_view(const TupleBag& bag, const json& extra = json::object()) {
    std::vector<std::pair<std::string, std::string>> lines;
    lines.reserve(bag.rows.size());
    for (const auto& [t, m] : bag.rows) {
        json tuple = json::object();
        for (std::size_t i = 0; i < bag.schema.size(); ++i)
            tuple[bag.schema.attrs[i].name] = value_to_json(t[i]);
        json out = extra;
        out["tuple"] = tuple;
        out["multiplicity"] = m;
        lines.emplace_back(tuple.dump(), out.dump());
    }
    std::sort(lines.begin(), lines.end());
    std::vector<std::string> result;
    result.reserve(lines.size());
    for (auto& [k, v] : lines) {
        (void)k;
        result.push_back(std::move(v));
    }
    return result;
}

}  // namespace io
}  // namespace grapevine
