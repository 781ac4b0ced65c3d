#pragma once

#include <optional>
#include <string>
#include <vector>

#include "grapevine/schema.hpp"

namespace grapevine {

// A property that must be included in the base relation, e.g. {lang -> pL}.
struct PropRequest {
    std::string key;
    std::string attr;

    bool operator==(const PropRequest& o) const { return key == o.key && attr == o.attr; }
};

// get-vertices: nullary operator returning vertices with a given label,
// plus any requested properties (Missing when absent on the vertex).
struct VertexBase {
    std::string var;
    std::optional<std::string> label;
    std::vector<PropRequest> props;

    Schema schema() const {
        Schema s;
        s.append({var, AttrKind::Vertex}, "get-vertices");
        for (const auto& p : props) s.append({p.attr, AttrKind::Atomic}, "get-vertices");
        return s;
    }

    bool operator==(const VertexBase& o) const {
        return var == o.var && label == o.label && props == o.props;
    }
};

// get-edges: nullary operator returning (source, edge, target) triples for
// each edge of the given type between suitably labelled endpoints.
struct EdgeBase {
    std::string src_var;
    std::optional<std::string> src_label;
    std::vector<PropRequest> src_props;
    std::string edge_var;
    std::optional<std::string> edge_type;
    std::vector<PropRequest> edge_props;
    std::string tgt_var;
    std::optional<std::string> tgt_label;
    std::vector<PropRequest> tgt_props;

    Schema schema() const {
        Schema s;
        s.append({src_var, AttrKind::Vertex}, "get-edges");
        s.append({edge_var, AttrKind::Edge}, "get-edges");
        s.append({tgt_var, AttrKind::Vertex}, "get-edges");
        for (const auto& p : src_props) s.append({p.attr, AttrKind::Atomic}, "get-edges");
        for (const auto& p : edge_props) s.append({p.attr, AttrKind::Atomic}, "get-edges");
        for (const auto& p : tgt_props) s.append({p.attr, AttrKind::Atomic}, "get-edges");
        return s;
    }

    bool operator==(const EdgeBase& o) const {
        return src_var == o.src_var && src_label == o.src_label && src_props == o.src_props &&
               edge_var == o.edge_var && edge_type == o.edge_type && edge_props == o.edge_props &&
               tgt_var == o.tgt_var && tgt_label == o.tgt_label && tgt_props == o.tgt_props;
    }
};

}  // namespace grapevine
