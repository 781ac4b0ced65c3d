// Batch driver: load a graph, register standing queries, stream update
// transactions, and emit maintained view snapshots or deltas as JSON lines.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "grapevine/eval.hpp"
#include "grapevine/io.hpp"
#include "grapevine/ivm.hpp"
#include "grapevine/rewriter.hpp"

namespace {

using namespace grapevine;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct ViewState {
    CompiledQuery query;
    std::optional<ViewHandle> handle;  // absent in --full mode
    TupleBag last;                     // last full result, --full mode only
};

void emit(const TupleBag& bag, std::size_t tx, std::size_t view) {
    io::json extra{{"tx", tx}, {"view", view}};
    for (const auto& line : io::serialize_view(bag, extra)) std::cout << line << '\n';
}

int run(const std::string& graph_path, const std::vector<std::string>& query_paths,
        const std::string& updates_path, const std::string& emit_mode, bool full, bool stats) {
    std::ifstream graph_in(graph_path);
    if (!graph_in) throw InputError("cannot open " + graph_path);
    PropertyGraph graph = io::load_graph(graph_in);

    std::vector<Transaction> txs;
    if (!updates_path.empty()) {
        if (updates_path == "-") {
            txs = io::load_updates(std::cin);
        } else {
            std::ifstream in(updates_path);
            if (!in) throw InputError("cannot open " + updates_path);
            txs = io::load_updates(in);
        }
    }

    if (stats) std::cerr << "tx,tuples,wall_us\n";
    auto stat_line = [&](std::size_t tx, std::uint64_t tuples,
                         std::chrono::steady_clock::duration wall) {
        if (!stats) return;
        auto us = std::chrono::duration_cast<std::chrono::microseconds>(wall).count();
        std::cerr << tx << ',' << tuples << ',' << us << '\n';
    };

    std::vector<ViewState> views;
    {
        auto t0 = std::chrono::steady_clock::now();
        std::uint64_t tuples = 0;
        for (const auto& path : query_paths) {
            ViewState v{compile_query(read_file(path)), std::nullopt, TupleBag{}};
            if (full) {
                EvalStats es;
                v.last = evaluate(graph, v.query.fra, &es);
                tuples += es.tuples;
            } else {
                v.handle = ViewHandle::instantiate(graph, v.query.fra);
                tuples += v.handle->tuples_processed();
            }
            views.push_back(std::move(v));
        }
        stat_line(0, tuples, std::chrono::steady_clock::now() - t0);
    }

    bool snapshots = emit_mode == "snapshots";
    if (snapshots) {
        for (std::size_t k = 0; k < views.size(); ++k)
            emit(full ? views[k].last : views[k].handle->read_view(), 0, k);
    }

    for (std::size_t n = 0; n < txs.size(); ++n) {
        auto t0 = std::chrono::steady_clock::now();
        std::uint64_t tuples = 0;
        std::vector<DeltaBag> view_deltas(views.size());
        auto base_deltas = graph.apply_transaction(txs[n]);
        for (std::size_t k = 0; k < views.size(); ++k) {
            if (full) {
                EvalStats es;
                TupleBag next = evaluate(graph, views[k].query.fra, &es);
                tuples += es.tuples;
                DeltaBag d = next;
                d.add_all(views[k].last.negated());
                view_deltas[k] = std::move(d);
                views[k].last = std::move(next);
            } else {
                view_deltas[k] = views[k].handle->on_transaction(base_deltas);
                tuples += views[k].handle->tuples_processed();
            }
        }
        stat_line(n + 1, tuples, std::chrono::steady_clock::now() - t0);
        for (std::size_t k = 0; k < views.size(); ++k) {
            if (snapshots) {
                emit(full ? views[k].last : views[k].handle->read_view(), n + 1, k);
            } else {
                emit(view_deltas[k], n + 1, k);
            }
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Incrementally maintained property graph query views"};
    std::string graph_path, updates_path, emit_mode = "snapshots";
    std::vector<std::string> query_paths;
    bool full = false, stats = false;
    app.add_option("--graph", graph_path, "graph file (JSON lines)")->required();
    app.add_option("--query", query_paths, "query file; repeatable")->required();
    app.add_option("--updates", updates_path, "update file (JSON lines), '-' for stdin");
    app.add_option("--emit", emit_mode, "output mode")
        ->check(CLI::IsMember({"snapshots", "deltas"}));
    app.add_flag("--full", full, "re-evaluate from scratch each transaction instead of IVM");
    app.add_flag("--stats", stats, "per-transaction tuple counts and wall time to stderr as CSV");
    CLI11_PARSE(app, argc, argv);

    try {
        return run(graph_path, query_paths, updates_path, emit_mode, full, stats);
    } catch (const grapevine::SyntaxError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const grapevine::InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const grapevine::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
