#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "grapevine/bag.hpp"
#include "grapevine/errors.hpp"
#include "grapevine/relations.hpp"
#include "grapevine/value.hpp"

namespace grapevine {

struct VertexRecord {
    ElementId id = 0;
    std::set<std::string> labels;
    std::map<std::string, Value> properties;

    bool operator==(const VertexRecord& o) const {
        return id == o.id && labels == o.labels && properties == o.properties;
    }
};

struct EdgeRecord {
    ElementId id = 0;
    ElementId source = 0;
    ElementId target = 0;
    std::string edge_type;
    std::map<std::string, Value> properties;

    bool operator==(const EdgeRecord& o) const {
        return id == o.id && source == o.source && target == o.target &&
               edge_type == o.edge_type && properties == o.properties;
    }
};

struct AddVertex { VertexRecord vertex; };
struct RemoveVertex { ElementId id; };
struct AddEdge { EdgeRecord edge; };
struct RemoveEdge { ElementId id; };
struct SetVertexProperty { ElementId id; std::string key; Value value; };
struct RemoveVertexProperty { ElementId id; std::string key; };
struct SetEdgeProperty { ElementId id; std::string key; Value value; };
struct RemoveEdgeProperty { ElementId id; std::string key; };

using UpdateOp = std::variant<AddVertex, RemoveVertex, AddEdge, RemoveEdge,
                              SetVertexProperty, RemoveVertexProperty,
                              SetEdgeProperty, RemoveEdgeProperty>;
using Transaction = std::vector<UpdateOp>;

using BaseRelation = std::variant<VertexBase, EdgeBase>;

// Rows of the nested base relations alpha (vertices) and beta (edges).
struct AlphaRow {
    ElementId id;
    std::string label;
    std::map<std::string, Value> properties;
    auto operator<=>(const AlphaRow&) const = default;
};

struct BetaRow {
    ElementId source;
    ElementId target;
    std::string edge_type;
    std::map<std::string, Value> properties;
    auto operator<=>(const BetaRow&) const = default;
};

// Mutable property graph store. Single-writer: transactions are applied
// serially; reads between transactions may come from any thread.
class PropertyGraph {
public:
    const std::map<ElementId, VertexRecord>& vertices() const { return vertices_; }
    const std::map<ElementId, EdgeRecord>& edges() const { return edges_; }

    bool has_vertex(ElementId id) const { return vertices_.count(id) > 0; }
    bool has_edge(ElementId id) const { return edges_.count(id) > 0; }

    const VertexRecord& vertex(ElementId id) const {
        auto it = vertices_.find(id);
        if (it == vertices_.end()) throw UnknownIdError(id);
        return it->second;
    }

    const EdgeRecord& edge(ElementId id) const {
        auto it = edges_.find(id);
        if (it == edges_.end()) throw UnknownIdError(id);
        return it->second;
    }

    const std::set<ElementId>& out_edges(ElementId v) const {
        static const std::set<ElementId> kEmpty;
        auto it = out_edges_.find(v);
        return it == out_edges_.end() ? kEmpty : it->second;
    }

    const std::set<ElementId>& in_edges(ElementId v) const {
        static const std::set<ElementId> kEmpty;
        auto it = in_edges_.find(v);
        return it == in_edges_.end() ? kEmpty : it->second;
    }

    Value property_or_missing(const std::map<std::string, Value>& props, const std::string& key) const {
        auto it = props.find(key);
        return it == props.end() ? Value::missing() : it->second;
    }

    // --- base relations of the data model ---

    // One row per (vertex, label) pair.
    std::map<AlphaRow, std::int64_t> alpha_relation() const {
        std::map<AlphaRow, std::int64_t> out;
        for (const auto& [id, v] : vertices_)
            for (const auto& label : v.labels)
                out[AlphaRow{id, label, v.properties}] += 1;
        return out;
    }

    std::map<BetaRow, std::int64_t> beta_relation() const {
        std::map<BetaRow, std::int64_t> out;
        for (const auto& [id, e] : edges_)
            out[BetaRow{e.source, e.target, e.edge_type, e.properties}] += 1;
        return out;
    }

    // --- registered base operators (get-vertices / get-edges instances) ---

    std::size_t register_base(BaseRelation base) {
        bases_.push_back(std::move(base));
        return bases_.size() - 1;
    }

    std::size_t base_count() const { return bases_.size(); }
    const BaseRelation& base(std::size_t id) const { return bases_.at(id); }

    // Full current output of a get-vertices / get-edges operator.
    TupleBag rows(const VertexBase& vb) const {
        TupleBag out(vb.schema());
        for (const auto& [vid, rec] : vertices_) {
            (void)rec;
            append_vertex_row(out, vb, vid);
        }
        return out;
    }

    TupleBag rows(const EdgeBase& eb) const {
        TupleBag out(eb.schema());
        for (const auto& [eid, rec] : edges_) {
            (void)rec;
            append_edge_row(out, eb, eid);
        }
        return out;
    }

    TupleBag base_rows(std::size_t id) const {
        return std::visit([this](const auto& b) { return rows(b); }, bases_.at(id));
    }

    // --- transactions ---

    // Applies the transaction atomically (whole transaction rejected on the
    // first error) and returns, per registered base operator, the signed
    // delta of its output. Base operators without changes are omitted.
    std::map<std::size_t, DeltaBag> apply_transaction(const Transaction& tx) {
        PropertyGraph next = *this;
        std::map<std::size_t, DeltaBag> deltas;
        for (const auto& op : tx) next.apply_op(op, deltas);
        for (auto it = deltas.begin(); it != deltas.end();) {
            it = it->second.empty() ? deltas.erase(it) : std::next(it);
        }
        *this = std::move(next);
        return deltas;
    }

    bool operator==(const PropertyGraph& o) const {
        return vertices_ == o.vertices_ && edges_ == o.edges_;
    }

private:
    void append_vertex_row(TupleBag& out, const VertexBase& vb, ElementId vid,
                           std::int64_t mult = 1) const {
        const auto& rec = vertices_.at(vid);
        if (vb.label && rec.labels.count(*vb.label) == 0) return;
        Tuple t;
        t.reserve(1 + vb.props.size());
        t.push_back(Value::vertex_ref(vid));
        for (const auto& p : vb.props) t.push_back(property_or_missing(rec.properties, p.key));
        out.add(t, mult);
    }

    void append_edge_row(TupleBag& out, const EdgeBase& eb, ElementId eid,
                         std::int64_t mult = 1) const {
        const auto& rec = edges_.at(eid);
        if (eb.edge_type && rec.edge_type != *eb.edge_type) return;
        const auto& src = vertices_.at(rec.source);
        const auto& tgt = vertices_.at(rec.target);
        if (eb.src_label && src.labels.count(*eb.src_label) == 0) return;
        if (eb.tgt_label && tgt.labels.count(*eb.tgt_label) == 0) return;
        Tuple t;
        t.reserve(3 + eb.src_props.size() + eb.edge_props.size() + eb.tgt_props.size());
        t.push_back(Value::vertex_ref(rec.source));
        t.push_back(Value::edge_ref(eid));
        t.push_back(Value::vertex_ref(rec.target));
        for (const auto& p : eb.src_props) t.push_back(property_or_missing(src.properties, p.key));
        for (const auto& p : eb.edge_props) t.push_back(property_or_missing(rec.properties, p.key));
        for (const auto& p : eb.tgt_props) t.push_back(property_or_missing(tgt.properties, p.key));
        out.add(t, mult);
    }

    DeltaBag& delta_for(std::map<std::size_t, DeltaBag>& deltas, std::size_t id) const {
        auto it = deltas.find(id);
        if (it == deltas.end()) {
            Schema s = std::visit([](const auto& b) { return b.schema(); }, bases_[id]);
            it = deltas.emplace(id, DeltaBag(std::move(s))).first;
        }
        return it->second;
    }

    // Signed rows the given vertex currently contributes to each vertex base,
    // and its incident edges to each edge base.
    void record_vertex_rows(std::map<std::size_t, DeltaBag>& deltas, ElementId vid,
                            std::int64_t sign, bool with_incident_edges) const {
        for (std::size_t i = 0; i < bases_.size(); ++i) {
            if (const auto* vb = std::get_if<VertexBase>(&bases_[i]))
                append_vertex_row(delta_for(deltas, i), *vb, vid, sign);
        }
        if (!with_incident_edges) return;
        std::set<ElementId> incident = out_edges(vid);
        incident.insert(in_edges(vid).begin(), in_edges(vid).end());
        for (ElementId eid : incident) record_edge_rows(deltas, eid, sign);
    }

    void record_edge_rows(std::map<std::size_t, DeltaBag>& deltas, ElementId eid,
                          std::int64_t sign) const {
        for (std::size_t i = 0; i < bases_.size(); ++i) {
            if (const auto* eb = std::get_if<EdgeBase>(&bases_[i]))
                append_edge_row(delta_for(deltas, i), *eb, eid, sign);
        }
    }

    void apply_op(const UpdateOp& op, std::map<std::size_t, DeltaBag>& deltas) {
        std::visit([&](const auto& o) { apply_one(o, deltas); }, op);
    }

    void apply_one(const AddVertex& op, std::map<std::size_t, DeltaBag>& deltas) {
        ElementId id = op.vertex.id;
        if (vertices_.count(id) || edges_.count(id)) throw DuplicateIdError(id);
        VertexRecord rec = op.vertex;
        vertices_.emplace(id, std::move(rec));
        record_vertex_rows(deltas, id, +1, /*with_incident_edges=*/false);
    }

    void apply_one(const RemoveVertex& op, std::map<std::size_t, DeltaBag>& deltas) {
        if (!vertices_.count(op.id)) throw UnknownIdError(op.id);
        if (!out_edges(op.id).empty() || !in_edges(op.id).empty())
            throw DanglingVertexRemovalError(op.id);
        record_vertex_rows(deltas, op.id, -1, /*with_incident_edges=*/false);
        vertices_.erase(op.id);
    }

    void apply_one(const AddEdge& op, std::map<std::size_t, DeltaBag>& deltas) {
        ElementId id = op.edge.id;
        if (vertices_.count(id) || edges_.count(id)) throw DuplicateIdError(id);
        if (!vertices_.count(op.edge.source)) throw UnknownIdError(op.edge.source);
        if (!vertices_.count(op.edge.target)) throw UnknownIdError(op.edge.target);
        edges_.emplace(id, op.edge);
        out_edges_[op.edge.source].insert(id);
        in_edges_[op.edge.target].insert(id);
        record_edge_rows(deltas, id, +1);
    }

    void apply_one(const RemoveEdge& op, std::map<std::size_t, DeltaBag>& deltas) {
        auto it = edges_.find(op.id);
        if (it == edges_.end()) throw UnknownIdError(op.id);
        record_edge_rows(deltas, op.id, -1);
        out_edges_[it->second.source].erase(op.id);
        in_edges_[it->second.target].erase(op.id);
        edges_.erase(it);
    }

    // Property updates are fine-grained nested updates: delete-old-row plus
    // insert-new-row on every base operator whose output mentions the entity.
    void apply_one(const SetVertexProperty& op, std::map<std::size_t, DeltaBag>& deltas) {
        auto it = vertices_.find(op.id);
        if (it == vertices_.end()) throw UnknownIdError(op.id);
        record_vertex_rows(deltas, op.id, -1, /*with_incident_edges=*/true);
        it->second.properties[op.key] = op.value;
        record_vertex_rows(deltas, op.id, +1, /*with_incident_edges=*/true);
    }

    void apply_one(const RemoveVertexProperty& op, std::map<std::size_t, DeltaBag>& deltas) {
        auto it = vertices_.find(op.id);
        if (it == vertices_.end()) throw UnknownIdError(op.id);
        if (!it->second.properties.count(op.key)) return;
        record_vertex_rows(deltas, op.id, -1, /*with_incident_edges=*/true);
        it->second.properties.erase(op.key);
        record_vertex_rows(deltas, op.id, +1, /*with_incident_edges=*/true);
    }

    void apply_one(const SetEdgeProperty& op, std::map<std::size_t, DeltaBag>& deltas) {
        auto it = edges_.find(op.id);
        if (it == edges_.end()) throw UnknownIdError(op.id);
        record_edge_rows(deltas, op.id, -1);
        it->second.properties[op.key] = op.value;
        record_edge_rows(deltas, op.id, +1);
    }

    void apply_one(const RemoveEdgeProperty& op, std::map<std::size_t, DeltaBag>& deltas) {
        auto it = edges_.find(op.id);
        if (it == edges_.end()) throw UnknownIdError(op.id);
        if (!it->second.properties.count(op.key)) return;
        record_edge_rows(deltas, op.id, -1);
        it->second.properties.erase(op.key);
        record_edge_rows(deltas, op.id, +1);
    }

    std::map<ElementId, VertexRecord> vertices_;
    std::map<ElementId, EdgeRecord> edges_;
    std::map<ElementId, std::set<ElementId>> out_edges_;
    std::map<ElementId, std::set<ElementId>> in_edges_;
    std::vector<BaseRelation> bases_;
};

}  // namespace grapevine
