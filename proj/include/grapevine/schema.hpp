#pragma once

#include <optional>
#include <string>
#include <vector>

#include "grapevine/errors.hpp"

namespace grapevine {

// Graph-relation condition: every attribute ranges over vertices, edges,
// paths, or atomic domain values.
enum class AttrKind { Vertex, Edge, Path, Atomic };

struct Attribute {
    std::string name;
    AttrKind kind = AttrKind::Atomic;

    bool operator==(const Attribute& o) const { return name == o.name && kind == o.kind; }
};

struct Schema {
    std::vector<Attribute> attrs;

    std::size_t size() const { return attrs.size(); }

    std::optional<std::size_t> find(const std::string& name) const {
        for (std::size_t i = 0; i < attrs.size(); ++i)
            if (attrs[i].name == name) return i;
        return std::nullopt;
    }

    bool contains(const std::string& name) const { return find(name).has_value(); }

    std::size_t index_of(const std::string& name, const std::string& node = "") const {
        if (auto i = find(name)) return *i;
        throw UnknownAttributeError(name, node);
    }

    void append(Attribute a, const std::string& node = "") {
        if (contains(a.name))
            throw UnknownAttributeError(a.name, node + " (duplicate attribute)");
        attrs.push_back(std::move(a));
    }

    bool operator==(const Schema& o) const { return attrs == o.attrs; }
};

}  // namespace grapevine
