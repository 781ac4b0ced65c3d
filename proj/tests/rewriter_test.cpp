#include <doctest.h>

#include <fstream>
#include <sstream>

#include "grapevine/eval.hpp"
#include "grapevine/rewriter.hpp"
#include "testutil.hpp"

using namespace grapevine;

static std::string golden(const std::string& name) {
    std::ifstream in(std::string(GRAPEVINE_GOLDEN_DIR) + "/" + name);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string s = buf.str();
    if (!s.empty() && s.back() == '\n') s.pop_back();
    return s;
}

TEST_CASE("rewrite steps of the thread query match the golden expressions") {
    CompiledQuery q = compile_query(testutil::example_query());
    CHECK(pretty(q.gra) == golden("step1.txt"));
    CHECK(pretty(q.nra) == golden("step2.txt"));
    CHECK(pretty(q.fra) == golden("step3.txt"));
}

TEST_CASE("single-hop expand becomes a natural join with get-edges") {
    CompiledQuery q = compile_query("MATCH (a:Post)-[e:REPLY]->(b:Comm) RETURN a, e, b");
    CHECK(pretty(q.nra) ==
          "project[a, e, b](join(get-vertices(a:Post), get-edges(a:Post, e:REPLY, b:Comm)))");
    CHECK(pretty(q.fra) == pretty(q.nra));  // nothing to push down
}

TEST_CASE("property push-down yields exactly the referenced pairs") {
    for (const auto& text : testutil::query_corpus()) {
        CompiledQuery q = compile_query(text);
        CHECK(prop_request_pairs(q.fra) == testutil::referenced_props(q.ast));
        CHECK(prop_request_pairs(q.gra).empty());
        CHECK(prop_request_pairs(q.nra).empty());
    }
}

TEST_CASE("push-down rejects variables without exactly one binder") {
    // the same variable bound by two get-vertices operators
    ExprPtr v = make_expr(GetVerticesNode{{"p", std::nullopt, {}}});
    ExprPtr join = make_expr(NaturalJoinNode{v, v});
    ExprPtr un = make_expr(UnnestNode{join, {{"p", "lang", "pL"}}});
    CHECK_THROWS_AS(push_down_properties(un), AmbiguousBindingError);
    // no binder at all
    ExprPtr free_var = make_expr(UnnestNode{v, {{"q", "lang", "qL"}}});
    CHECK_THROWS_AS(push_down_properties(free_var), AmbiguousBindingError);
}

TEST_CASE("all three forms evaluate to the same bag over random graphs") {
    std::mt19937 rng(42);
    auto corpus = testutil::query_corpus();
    std::vector<CompiledQuery> queries;
    for (const auto& text : corpus) queries.push_back(compile_query(text));
    for (int trial = 0; trial < 8; ++trial) {
        PropertyGraph g = testutil::random_graph(rng, 30);
        for (const auto& q : queries) {
            TupleBag gra = evaluate(g, q.gra);
            TupleBag nra = evaluate(g, q.nra);
            TupleBag fra = evaluate(g, q.fra);
            CHECK(nra.rows == gra.rows);
            CHECK(fra.rows == gra.rows);
        }
    }
}

TEST_CASE("the example query evaluates to the documented result on the fixture") {
    PropertyGraph g = testutil::example_graph();
    CompiledQuery q = compile_query(testutil::example_query());
    TupleBag out = evaluate(g, q.fra);
    REQUIRE(out.rows.size() == 2);
    Tuple r1{Value::vertex_ref(1), Value(PathValue{{1, 101, 2}})};
    Tuple r2{Value::vertex_ref(1), Value(PathValue{{1, 101, 2, 102, 3}})};
    CHECK(out.rows.at(r1) == 1);
    CHECK(out.rows.at(r2) == 1);
    CHECK(evaluate(g, q.gra).rows == out.rows);
    CHECK(evaluate(g, q.nra).rows == out.rows);
}
