// End-to-end orchestration: scheduling, determinism, baselines, failures.
#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <string>
#include <vector>

#include "qcut/pipeline.hpp"
#include "support/reference.hpp"

using namespace qcut;

namespace {

RunConfig small_run() {
    RunConfig cfg;
    cfg.er_n = 12;
    cfg.er_p = 0.5;
    cfg.er_seed = 0;
    cfg.subgraphs = 3;
    cfg.layers = 2;
    cfg.budget = 60;
    cfg.workers = 1;
    return cfg;
}

}  // namespace

TEST_CASE("rounds are consecutive groups with the largest piece first") {
    REQUIRE(schedule_rounds({5, 5, 5}, 24) == std::vector<std::vector<int>>{{0, 1, 2}});
    REQUIRE(schedule_rounds(std::vector<int>(25, 4), 24).size() == 2);
    const auto grid = schedule_rounds(std::vector<int>(16, 4), 4);
    REQUIRE(grid.size() == 4);
    for (int r = 0; r < 4; ++r)
        REQUIRE(grid[r] == std::vector<int>{4 * r, 4 * r + 1, 4 * r + 2, 4 * r + 3});
    REQUIRE(schedule_rounds({3, 7, 5}, 3) == std::vector<std::vector<int>>{{1, 2, 0}});
    REQUIRE(schedule_rounds({4, 4, 9, 1}, 2) ==
            std::vector<std::vector<int>>{{0, 1}, {2, 3}});  // stable on ties
    REQUIRE_THROWS_AS(schedule_rounds({1, 2}, 0), config_error);
    REQUIRE_THROWS_AS(schedule_rounds({}, 2), config_error);
}

TEST_CASE("results do not depend on slot or worker counts") {
    auto base = run_pipeline(small_run());
    REQUIRE(base.status == "ok");
    for (int solvers : {1, 2, 4}) {
        for (int workers : {1, 2, 4}) {
            RunConfig cfg = small_run();
            cfg.solvers = solvers;
            cfg.workers = workers;
            auto r = run_pipeline(cfg);
            REQUIRE(r.merge.best_value == base.merge.best_value);
            REQUIRE(r.merge.assignment == base.merge.assignment);
            REQUIRE(r.merge.candidates_evaluated == base.merge.candidates_evaluated);
            REQUIRE(r.baseline.value == base.baseline.value);
            REQUIRE(r.metrics.ar == base.metrics.ar);
            REQUIRE(r.subgraphs.size() == base.subgraphs.size());
            for (std::size_t i = 0; i < r.subgraphs.size(); ++i) {
                REQUIRE(r.subgraphs[i].expectation == base.subgraphs[i].expectation);
                REQUIRE(r.subgraphs[i].evals == base.subgraphs[i].evals);
                REQUIRE(r.subgraphs[i].retained == base.subgraphs[i].retained);
            }
            // Concurrency stays within the configured slots.
            REQUIRE(r.schedule.slots == solvers);
            REQUIRE(r.schedule.max_concurrent >= 1);
            REQUIRE(r.schedule.max_concurrent <= solvers);
        }
    }
}

TEST_CASE("the round count in the report is the ceiling split") {
    RunConfig cfg;
    cfg.er_n = 30;
    cfg.er_p = 0.3;
    cfg.er_seed = 1;
    cfg.qubit_cap = 6;
    cfg.solvers = 2;
    cfg.layers = 1;
    cfg.budget = 10;
    cfg.workers = 2;
    auto r = run_pipeline(cfg);
    REQUIRE(r.config.subgraphs == 6);  // smallest count fitting 30 vertices under cap 6
    REQUIRE(r.schedule.rounds == 3);
    REQUIRE(r.schedule.slots == 2);
    REQUIRE(r.schedule.max_concurrent <= 2);
    for (const auto& s : r.subgraphs) REQUIRE(s.size <= 6);
}

TEST_CASE("unset slot count defaults to min(workers, subgraphs)") {
    RunConfig cfg = small_run();
    cfg.workers = 4;
    auto r = run_pipeline(cfg);
    REQUIRE(r.config.solvers == 3);
    REQUIRE(r.config.workers == 4);
}

TEST_CASE("keeping every class turns the pipeline into exact search") {
    Graph g = generate_er_graph(10, 0.5, 0);
    const auto brute = ref::enumerate_max_cut(g);
    RunConfig cfg;
    cfg.er_n = 10;
    cfg.er_p = 0.5;
    cfg.er_seed = 0;
    cfg.subgraphs = 2;
    cfg.top_k = 0;  // every complement class of both pieces
    cfg.layers = 1;
    cfg.budget = 5;
    cfg.workers = 1;
    auto r = run_pipeline(cfg);
    REQUIRE(r.merge.best_value == brute.value);
    REQUIRE(r.merge.assignment == brute.assignment.to_string());
    REQUIRE(r.merge.candidates_evaluated == 1024);  // all 2^10 assignments
    REQUIRE(r.merge.validated);
    REQUIRE(r.baseline.kind == "brute");
    REQUIRE(r.metrics.ar == 1.0);
    REQUIRE_FALSE(r.metrics.ar_exceeds_one);
    REQUIRE(r.config.merge_mode == "level");
}

TEST_CASE("a single subgraph degenerates to one solve") {
    RunConfig cfg;
    cfg.er_n = 8;
    cfg.er_p = 0.5;
    cfg.er_seed = 2;
    cfg.workers = 1;
    auto r = run_pipeline(cfg);
    REQUIRE(r.config.subgraphs == 1);
    REQUIRE(r.schedule.rounds == 1);
    REQUIRE(r.subgraphs.size() == 1);
    REQUIRE(r.subgraphs[0].size == 8);
    REQUIRE(r.merge.candidates_evaluated == 4);  // both orientations of k=2 classes
    REQUIRE(r.merge.assignment.size() == 8);
    REQUIRE(r.merge.validated);
}

TEST_CASE("candidate requests clamp to each piece's class count") {
    RunConfig cfg;
    cfg.er_n = 6;
    cfg.er_p = 0.8;
    cfg.er_seed = 5;
    cfg.subgraphs = 4;  // sizes 3,2,2,2
    cfg.top_k = 4;
    cfg.layers = 1;
    cfg.budget = 10;
    cfg.workers = 1;
    auto r = run_pipeline(cfg);
    std::vector<int> retained;
    for (const auto& s : r.subgraphs) retained.push_back(s.retained);
    REQUIRE(retained == std::vector<int>{4, 2, 2, 2});
    REQUIRE(r.config.top_k == 4);  // the request is echoed, not the clamp
}

TEST_CASE("fixed-value baselines give the neutral efficiency score") {
    RunConfig cfg = small_run();
    cfg.baseline = BaselineKind::kFixedValue;
    cfg.baseline_value = 7.5;
    auto r = run_pipeline(cfg);
    REQUIRE(r.baseline.kind == "value");
    REQUIRE(r.baseline.value == 7.5);
    REQUIRE(r.baseline.seconds == r.times.total_s);  // unset time mirrors the algorithm
    REQUIRE(r.metrics.ef == 0.5);
    REQUIRE(r.metrics.ar == r.merge.best_value / 7.5);
    REQUIRE(r.metrics.pei == r.metrics.ar * 50.0);

    cfg.baseline_seconds = 10.0;
    auto r2 = run_pipeline(cfg);
    REQUIRE(r2.baseline.seconds == 10.0);
    REQUIRE(r2.metrics.ef > 0.0);
    REQUIRE(r2.metrics.ef < 1.0);
}

TEST_CASE("a tiny fixed baseline flags the ratio as above one") {
    RunConfig cfg = small_run();
    cfg.baseline = BaselineKind::kFixedValue;
    cfg.baseline_value = 0.5;
    auto r = run_pipeline(cfg);
    REQUIRE(r.metrics.ar > 1.0);
    REQUIRE(r.metrics.ar_exceeds_one);
}

TEST_CASE("the local-search baseline takes over past the brute cap") {
    RunConfig cfg;
    cfg.er_n = 30;
    cfg.er_p = 0.2;
    cfg.er_seed = 9;
    cfg.qubit_cap = 8;
    cfg.layers = 1;
    cfg.budget = 15;
    cfg.local_restarts = 5;
    cfg.brute_cap = 24;
    cfg.workers = 1;
    auto r = run_pipeline(cfg);
    REQUIRE(r.baseline.kind == "local");
    REQUIRE(r.baseline.value > 0.0);
    REQUIRE(r.has_metrics);
}

TEST_CASE("the merge honors the path budget by switching to windows") {
    RunConfig cfg;
    cfg.er_n = 18;
    cfg.er_p = 0.4;
    cfg.er_seed = 3;
    cfg.qubit_cap = 5;
    cfg.top_k = 3;
    cfg.layers = 1;
    cfg.budget = 10;
    cfg.path_budget = 50.0;  // hundreds of complete chains: over this budget
    cfg.workers = 1;
    auto r = run_pipeline(cfg);
    REQUIRE(r.config.merge_mode == "windowed");
    REQUIRE(r.merge.validated);
    REQUIRE(r.status == "ok");

    cfg.path_budget = 1e9;
    auto r2 = run_pipeline(cfg);
    REQUIRE(r2.config.merge_mode == "level");
    REQUIRE(r2.merge.best_value >= r.merge.best_value);
}

TEST_CASE("the algorithm clock excludes the baseline") {
    auto r = run_pipeline(small_run());
    REQUIRE(r.times.total_s == r.times.partition_s + r.times.qaoa_s + r.times.merge_s);
    REQUIRE(r.times.baseline_s >= 0.0);
}

TEST_CASE("failures carry their stage and cause") {
    RunConfig none;
    try {
        run_pipeline(none);
        FAIL("expected pipeline_error");
    } catch (const pipeline_error& e) {
        REQUIRE(e.cause() == pipeline_error::Cause::kConfig);
        REQUIRE(e.stage() == "graph");
    }

    RunConfig missing;
    missing.graph_file = "/nonexistent/never.graph";
    try {
        run_pipeline(missing);
        FAIL("expected pipeline_error");
    } catch (const pipeline_error& e) {
        REQUIRE(e.cause() == pipeline_error::Cause::kIo);
        REQUIRE(e.stage() == "graph");
    }

    RunConfig bad = small_run();
    bad.budget = 0;
    try {
        run_pipeline(bad);
        FAIL("expected pipeline_error");
    } catch (const pipeline_error& e) {
        REQUIRE(e.cause() == pipeline_error::Cause::kConfig);
        REQUIRE(e.stage() == "config");
    }

    RunConfig tight;
    tight.er_n = 20;
    tight.er_p = 0.5;
    tight.er_seed = 0;
    tight.subgraphs = 2;
    tight.qubit_cap = 10;  // pieces of 11 and 10 cannot fit
    tight.workers = 1;
    try {
        run_pipeline(tight);
        FAIL("expected pipeline_error");
    } catch (const pipeline_error& e) {
        REQUIRE(e.cause() == pipeline_error::Cause::kResource);
        REQUIRE(e.stage() == "partition");
    }

    RunConfig refuse = small_run();
    refuse.merge_mode = MergeMode::kLevel;
    refuse.path_budget = 2.0;
    try {
        run_pipeline(refuse);
        FAIL("expected pipeline_error");
    } catch (const pipeline_error& e) {
        REQUIRE(e.cause() == pipeline_error::Cause::kResource);
        REQUIRE(e.stage() == "merge");
        REQUIRE(e.report().subgraphs.size() == 3);
    }
}

TEST_CASE("the worker environment override is honored and validated") {
    RunConfig cfg = small_run();
    cfg.workers = 0;
    setenv("QCUT_WORKERS", "3", 1);
    auto r = run_pipeline(cfg);
    REQUIRE(r.config.workers == 3);

    setenv("QCUT_WORKERS", "zero", 1);
    try {
        run_pipeline(cfg);
        FAIL("expected pipeline_error");
    } catch (const pipeline_error& e) {
        REQUIRE(e.cause() == pipeline_error::Cause::kConfig);
        REQUIRE(e.stage() == "config");
    }
    unsetenv("QCUT_WORKERS");
}

TEST_CASE("a prebuilt graph runs through the same pipeline") {
    Graph g = generate_er_graph(9, 0.6, 11);
    RunConfig cfg;
    cfg.subgraphs = 2;
    cfg.layers = 1;
    cfg.budget = 20;
    cfg.workers = 1;
    auto r = run_pipeline(g, cfg);
    REQUIRE(r.status == "ok");
    REQUIRE(r.n == 9);
    REQUIRE_FALSE(r.generated);
    REQUIRE(r.merge.validated);
    REQUIRE(cut_value(g, Assignment::from_string(r.merge.assignment)) == r.merge.best_value);
}
