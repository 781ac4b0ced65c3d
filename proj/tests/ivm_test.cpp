#include <doctest.h>

#include "grapevine/eval.hpp"
#include "grapevine/ivm.hpp"
#include "grapevine/rewriter.hpp"
#include "testutil.hpp"

using namespace grapevine;

namespace {

struct Fixture {
    PropertyGraph g = testutil::example_graph();
    CompiledQuery q = compile_query(testutil::example_query());
    ViewHandle view = ViewHandle::instantiate(g, q.fra);
};

Tuple result_row(std::initializer_list<ElementId> path_ids) {
    PathValue p;
    p.ids = path_ids;
    return Tuple{Value::vertex_ref(1), Value(std::move(p))};
}

}  // namespace

TEST_CASE("initial evaluation materializes the documented result") {
    Fixture f;
    TupleBag bag = f.view.read_view();
    REQUIRE(bag.rows.size() == 2);
    CHECK(bag.rows.at(result_row({1, 101, 2})) == 1);
    CHECK(bag.rows.at(result_row({1, 101, 2, 102, 3})) == 1);
}

TEST_CASE("instantiate requires an FRA expression") {
    PropertyGraph g = testutil::example_graph();
    CompiledQuery q = compile_query(testutil::example_query());
    CHECK_THROWS_AS(ViewHandle::instantiate(g, q.gra), Error);
    CHECK_THROWS_AS(ViewHandle::instantiate(g, q.nra), Error);
}

TEST_CASE("extending the thread adds exactly the new path") {
    Fixture f;
    Transaction tx{AddVertex{VertexRecord{4, {"Comm"}, {{"lang", Value("en")}}}},
                   AddEdge{EdgeRecord{103, 3, 4, "REPLY", {}}}};
    DeltaBag d = f.view.on_transaction(f.g.apply_transaction(tx));
    REQUIRE(d.rows.size() == 1);
    CHECK(d.rows.at(result_row({1, 101, 2, 102, 3, 103, 4})) == 1);
    CHECK(f.view.read_view().rows.size() == 3);
}

TEST_CASE("deleting an edge retracts the paths through it") {
    Fixture f;
    DeltaBag d = f.view.on_transaction(f.g.apply_transaction({RemoveEdge{102}}));
    REQUIRE(d.rows.size() == 1);
    CHECK(d.rows.at(result_row({1, 101, 2, 102, 3})) == -1);
    TupleBag bag = f.view.read_view();
    REQUIRE(bag.rows.size() == 1);
    CHECK(bag.rows.at(result_row({1, 101, 2})) == 1);
}

TEST_CASE("an empty transaction propagates to an empty delta") {
    Fixture f;
    DeltaBag d = f.view.on_transaction(f.g.apply_transaction({}));
    CHECK(d.rows.empty());
}

TEST_CASE("a property update flows through as delete-old plus insert-new") {
    Fixture f;
    DeltaBag d =
        f.view.on_transaction(f.g.apply_transaction({SetVertexProperty{3, "lang", Value("de")}}));
    REQUIRE(d.rows.size() == 1);
    CHECK(d.rows.at(result_row({1, 101, 2, 102, 3})) == -1);
    // and back
    DeltaBag d2 =
        f.view.on_transaction(f.g.apply_transaction({SetVertexProperty{3, "lang", Value("en")}}));
    CHECK(d2.rows.at(result_row({1, 101, 2, 102, 3})) == 1);
}

TEST_CASE("maintained views equal reference evaluation under random updates") {
    std::mt19937 rng(2024);
    auto corpus = testutil::query_corpus();
    for (int trial = 0; trial < 40; ++trial) {
        PropertyGraph g = testutil::random_graph(rng, 20);
        CompiledQuery q = compile_query(corpus[trial % corpus.size()]);
        ViewHandle view = ViewHandle::instantiate(g, q.fra);
        REQUIRE(view.read_view().rows == evaluate(g, q.fra).rows);
        for (int step = 0; step < 5; ++step) {
            Transaction tx = testutil::random_transaction(rng, g);
            view.on_transaction(g.apply_transaction(tx));
            TupleBag expect = evaluate(g, q.fra);
            REQUIRE(view.read_view().rows == expect.rows);
        }
    }
}

TEST_CASE("inverse transactions restore the prior view exactly") {
    std::mt19937 rng(99);
    auto corpus = testutil::query_corpus();
    for (int trial = 0; trial < 25; ++trial) {
        PropertyGraph g = testutil::random_graph(rng, 20);
        CompiledQuery q = compile_query(corpus[trial % corpus.size()]);
        ViewHandle view = ViewHandle::instantiate(g, q.fra);
        Transaction tx = testutil::random_transaction(rng, g);
        Transaction inv = testutil::invert_transaction(g, tx);
        TupleBag before = view.read_view();
        PropertyGraph graph_before = g;
        view.on_transaction(g.apply_transaction(tx));
        view.on_transaction(g.apply_transaction(inv));
        CHECK(g == graph_before);
        CHECK(view.read_view().rows == before.rows);
    }
}

TEST_CASE("cyclic graphs terminate; emitted paths have pairwise-distinct edges") {
    PropertyGraph g;
    Transaction tx;
    for (ElementId v = 1; v <= 10; ++v) {
        std::set<std::string> labels{"Comm"};
        if (v == 1) labels.insert("Post");
        tx.push_back(AddVertex{VertexRecord{v, labels, {{"lang", Value("en")}}}});
    }
    for (ElementId v = 1; v <= 10; ++v)
        tx.push_back(AddEdge{EdgeRecord{100 + v, v, v % 10 + 1, "REPLY", {}}});
    g.apply_transaction(tx);

    CompiledQuery q = compile_query(testutil::example_query());
    ViewHandle view = ViewHandle::instantiate(g, q.fra);
    TupleBag bag = view.read_view();
    // one path per hop count 1..10; the edge-distinct rule stops the cycle
    CHECK(bag.rows.size() == 10);
    for (const auto& [row, mult] : bag.rows) {
        CHECK(mult == 1);
        const PathValue& p = row[1].as_path();
        CHECK(p.well_formed());
        std::set<ElementId> edges;
        for (std::size_t i = 1; i < p.ids.size(); i += 2) edges.insert(p.ids[i]);
        CHECK(edges.size() == p.hops());  // pairwise distinct
    }
    // closing the loop twice is impossible: deleting one edge halves the reach
    DeltaBag d = view.on_transaction(g.apply_transaction({RemoveEdge{105}}));
    CHECK(view.read_view().rows == evaluate(g, q.fra).rows);
    CHECK(!d.rows.empty());
}

TEST_CASE("tuples_processed reflects work done") {
    Fixture f;
    CHECK(f.view.tuples_processed() > 0);
    f.view.on_transaction(f.g.apply_transaction({}));
    CHECK(f.view.tuples_processed() == 0);
}
