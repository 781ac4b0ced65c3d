#include <doctest.h>

#include "grapevine/graph.hpp"
#include "testutil.hpp"

using namespace grapevine;
using testutil::example_graph;

TEST_CASE("alpha relation matches the example graph") {
    PropertyGraph g = example_graph();
    auto alpha = g.alpha_relation();
    CHECK(alpha.size() == 3);
    AlphaRow post{1, "Post", {{"lang", Value("en")}}};
    REQUIRE(alpha.count(post) == 1);
    CHECK(alpha.at(post) == 1);
    CHECK(alpha.count(AlphaRow{2, "Comm", {{"lang", Value("en")}}}) == 1);
}

TEST_CASE("beta relation matches the example graph") {
    PropertyGraph g = example_graph();
    auto beta = g.beta_relation();
    REQUIRE(beta.size() == 2);
    CHECK(beta.count(BetaRow{1, 2, "REPLY", {}}) == 1);
    CHECK(beta.count(BetaRow{2, 3, "REPLY", {}}) == 1);
}

TEST_CASE("empty graph yields empty base relations") {
    PropertyGraph g;
    CHECK(g.alpha_relation().empty());
    CHECK(g.beta_relation().empty());
}

TEST_CASE("a vertex with two labels contributes two alpha rows") {
    PropertyGraph g;
    g.apply_transaction({AddVertex{VertexRecord{7, {"Post", "Comm"}, {}}}});
    auto alpha = g.alpha_relation();
    CHECK(alpha.size() == 2);
    CHECK(alpha.count(AlphaRow{7, "Post", {}}) == 1);
    CHECK(alpha.count(AlphaRow{7, "Comm", {}}) == 1);
}

TEST_CASE("self-loop edge appears as one beta row") {
    PropertyGraph g;
    g.apply_transaction({AddVertex{VertexRecord{1, {"Post"}, {}}},
                         AddEdge{EdgeRecord{2, 1, 1, "REPLY", {}}}});
    auto beta = g.beta_relation();
    REQUIRE(beta.size() == 1);
    CHECK(beta.count(BetaRow{1, 1, "REPLY", {}}) == 1);
}

TEST_CASE("edge insertion delta on a registered get-edges operator") {
    PropertyGraph g = example_graph();
    EdgeBase eb;
    eb.src_var = "a";
    eb.edge_var = "e";
    eb.edge_type = "REPLY";
    eb.tgt_var = "b";
    std::size_t id = g.register_base(eb);

    g.apply_transaction({AddVertex{VertexRecord{4, {"Comm"}, {{"lang", Value("en")}}}}});
    auto deltas = g.apply_transaction({AddEdge{EdgeRecord{103, 3, 4, "REPLY", {}}}});
    REQUIRE(deltas.count(id) == 1);
    const DeltaBag& d = deltas.at(id);
    REQUIRE(d.rows.size() == 1);
    Tuple expect{Value::vertex_ref(3), Value::edge_ref(103), Value::vertex_ref(4)};
    REQUIRE(d.rows.count(expect) == 1);
    CHECK(d.rows.at(expect) == 1);
}

TEST_CASE("empty transaction produces no deltas and no changes") {
    PropertyGraph g = example_graph();
    g.register_base(VertexBase{"v", std::nullopt, {}});
    PropertyGraph before = g;
    auto deltas = g.apply_transaction({});
    CHECK(deltas.empty());
    CHECK(g == before);
}

TEST_CASE("removing a vertex with incident edges is rejected") {
    PropertyGraph g = example_graph();
    CHECK_THROWS_AS(g.apply_transaction({RemoveVertex{1}}), DanglingVertexRemovalError);
}

TEST_CASE("failed transactions are rejected atomically") {
    PropertyGraph g = example_graph();
    PropertyGraph before = g;
    Transaction tx{AddVertex{VertexRecord{4, {"Comm"}, {}}}, RemoveVertex{1}};
    CHECK_THROWS_AS(g.apply_transaction(tx), DanglingVertexRemovalError);
    CHECK(g == before);  // the valid AddVertex must not stick
}

TEST_CASE("id errors") {
    PropertyGraph g = example_graph();
    CHECK_THROWS_AS(g.apply_transaction({AddVertex{VertexRecord{1, {}, {}}}}), DuplicateIdError);
    // vertex and edge ids share one id space
    CHECK_THROWS_AS(g.apply_transaction({AddVertex{VertexRecord{101, {}, {}}}}), DuplicateIdError);
    CHECK_THROWS_AS(g.apply_transaction({RemoveEdge{999}}), UnknownIdError);
    CHECK_THROWS_AS(g.apply_transaction({AddEdge{EdgeRecord{200, 1, 999, "REPLY", {}}}}),
                    UnknownIdError);
    CHECK_THROWS_AS(g.apply_transaction({SetVertexProperty{999, "lang", Value("en")}}),
                    UnknownIdError);
}

TEST_CASE("property update is a fine-grained delete-old plus insert-new") {
    PropertyGraph g = example_graph();
    std::size_t vb = g.register_base(VertexBase{"c", std::string("Comm"), {{"lang", "cL"}}});
    // an edge base requesting target properties also sees the change
    EdgeBase ebase;
    ebase.src_var = "a";
    ebase.edge_var = "e";
    ebase.edge_type = "REPLY";
    ebase.tgt_var = "b";
    ebase.tgt_props = {{"lang", "bL"}};
    std::size_t eb = g.register_base(ebase);

    auto deltas = g.apply_transaction({SetVertexProperty{3, "lang", Value("de")}});
    REQUIRE(deltas.count(vb) == 1);
    const DeltaBag& dv = deltas.at(vb);
    CHECK(dv.rows.size() == 2);
    CHECK(dv.rows.at(Tuple{Value::vertex_ref(3), Value("en")}) == -1);
    CHECK(dv.rows.at(Tuple{Value::vertex_ref(3), Value("de")}) == 1);

    REQUIRE(deltas.count(eb) == 1);
    const DeltaBag& de = deltas.at(eb);
    Tuple old_row{Value::vertex_ref(2), Value::edge_ref(102), Value::vertex_ref(3), Value("en")};
    Tuple new_row{Value::vertex_ref(2), Value::edge_ref(102), Value::vertex_ref(3), Value("de")};
    CHECK(de.rows.at(old_row) == -1);
    CHECK(de.rows.at(new_row) == 1);
}

TEST_CASE("removing an absent property is a no-op") {
    PropertyGraph g = example_graph();
    g.register_base(VertexBase{"v", std::nullopt, {{"lang", "l"}}});
    PropertyGraph before = g;
    auto deltas = g.apply_transaction({RemoveVertexProperty{1, "nope"}});
    CHECK(deltas.empty());
    CHECK(g == before);
}

TEST_CASE("missing requested properties surface as Missing in base rows") {
    PropertyGraph g;
    g.apply_transaction({AddVertex{VertexRecord{1, {"Post"}, {}}}});
    TupleBag rows = g.rows(VertexBase{"p", std::string("Post"), {{"lang", "pL"}}});
    REQUIRE(rows.rows.size() == 1);
    CHECK(rows.rows.count(Tuple{Value::vertex_ref(1), Value::missing()}) == 1);
}

TEST_CASE("deltas are exact: rebuild equals old rows plus delta, and negation rolls back") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        PropertyGraph g = testutil::random_graph(rng, 25);
        std::vector<std::size_t> ids;
        ids.push_back(g.register_base(VertexBase{"p", std::string("Post"), {{"lang", "pL"}}}));
        ids.push_back(g.register_base(VertexBase{"v", std::nullopt, {}}));
        EdgeBase eb;
        eb.src_var = "a";
        eb.src_label = "Post";
        eb.edge_var = "e";
        eb.edge_type = "REPLY";
        eb.tgt_var = "b";
        eb.tgt_props = {{"lang", "bL"}};
        ids.push_back(g.register_base(eb));

        std::map<std::size_t, TupleBag> before;
        for (auto id : ids) before[id] = g.base_rows(id);

        Transaction tx = testutil::random_transaction(rng, g);
        auto deltas = g.apply_transaction(tx);

        for (auto id : ids) {
            TupleBag expect = before[id];
            if (deltas.count(id)) expect.apply_checked(deltas.at(id));
            CHECK(expect == g.base_rows(id));
        }
        // negated deltas restore the original base relations
        for (auto id : ids) {
            TupleBag back = g.base_rows(id);
            if (deltas.count(id)) back.apply_checked(deltas.at(id).negated());
            CHECK(back == before[id]);
        }
    }
}
