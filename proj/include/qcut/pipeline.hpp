#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "qcut/errors.hpp"
#include "qcut/graph.hpp"
#include "qcut/maxcut_oracles.hpp"
#include "qcut/merge.hpp"
#include "qcut/metrics.hpp"
#include "qcut/partition.hpp"
#include "qcut/qaoa.hpp"
#include "qcut/report.hpp"

namespace qcut {

enum class BaselineKind {
    kAuto,        // brute force when it fits the cap, local search otherwise
    kBruteForce,
    kLocalSearch,
    kFixedValue,  // externally supplied optimum
};

enum class MergeMode {
    kAuto,  // exhaustive when the path estimate fits the budget, else windowed
    kLevel,
    kWindowed,
};

struct RunConfig {
    // graph source: a file path, or ER(n, p, seed) when the path is empty
    std::string graph_file;
    std::size_t er_n = 0;
    double er_p = 0.5;
    std::uint64_t er_seed = 0;

    std::size_t qubit_cap = 20;  // largest subgraph a solver may receive
    int solvers = 0;             // concurrent solver slots; 0 = min(workers, subgraphs)
    int subgraphs = 0;           // 0 = fewest pieces that fit the qubit cap
    int top_k = 2;               // candidates kept per subgraph; 0 = every class
    int start_level = 1;         // merge prefix depth
    int layers = 3;
    int budget = 200;            // optimizer evaluations per subgraph
    std::uint64_t seed = 0;      // subgraph i solves with seed + i
    double alpha = 1e-3;

    BaselineKind baseline = BaselineKind::kAuto;
    double baseline_value = 0.0;     // for kFixedValue
    double baseline_seconds = -1.0;  // for kFixedValue; negative reuses the algorithm time
    int local_restarts = 20;
    std::uint64_t baseline_seed = 1234567;
    std::size_t brute_cap = 24;

    bool fold = true;
    bool halve_symmetry = false;
    PartitionMode partition_mode = PartitionMode::kBalanced;
    MergeEval merge_eval = MergeEval::kIncremental;
    MergeMode merge_mode = MergeMode::kAuto;
    double path_budget = 1e9;
    int workers = 0;  // 0 = QCUT_WORKERS env var, then hardware threads
    double nm_tolerance = 1e-5;
};

/// Stage failure carrying whatever the run had produced so far.
class pipeline_error : public std::runtime_error {
public:
    enum class Cause { kConfig, kResource, kIo, kInternal };

    pipeline_error(Cause cause, std::string stage, const std::string& message,
                   ExperimentReport report)
        : std::runtime_error(message),
          cause_(cause),
          stage_(std::move(stage)),
          report_(std::move(report)) {}

    Cause cause() const { return cause_; }
    const std::string& stage() const { return stage_; }
    const ExperimentReport& report() const { return report_; }

private:
    Cause cause_;
    std::string stage_;
    ExperimentReport report_;
};

/// Worker budget: explicit config wins, then the QCUT_WORKERS environment
/// variable, then the hardware thread count.
inline int resolve_workers(int configured) {
    if (configured > 0) return configured;
    if (configured < 0) throw config_error("worker count cannot be negative");
    if (const char* env = std::getenv("QCUT_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1)
            throw config_error("QCUT_WORKERS must be a positive integer, got \"" +
                               std::string(env) + "\"");
        return static_cast<int>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Groups subgraph indices into ceil(M/slots) consecutive rounds; within a
/// round the largest piece goes first (stable on index for equal sizes).
inline std::vector<std::vector<int>> schedule_rounds(const std::vector<int>& sizes, int slots) {
    if (slots < 1) throw config_error("solver slot count must be positive");
    if (sizes.empty()) throw config_error("no subgraphs to schedule");
    std::vector<std::vector<int>> rounds;
    const int M = static_cast<int>(sizes.size());
    for (int start = 0; start < M; start += slots) {
        std::vector<int> round;
        for (int i = start; i < std::min(M, start + slots); ++i) round.push_back(i);
        std::stable_sort(round.begin(), round.end(),
                         [&](int a, int b) { return sizes[a] > sizes[b]; });
        rounds.push_back(std::move(round));
    }
    return rounds;
}

namespace detail {

struct StageClock {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

inline ExperimentReport run_pipeline_impl(const Graph& g, const RunConfig& cfg,
                                          ExperimentReport r) {
    using Cause = pipeline_error::Cause;
    auto fail = [&](Cause cause, const std::string& stage,
                    const std::string& message) -> pipeline_error {
        r.status = "error";
        r.error_stage = stage;
        r.error_message = message;
        return pipeline_error(cause, stage, message, r);
    };
    auto guard = [&](const char* stage, auto&& fn) {
        try {
            fn();
        } catch (const pipeline_error&) {
            throw;
        } catch (const config_error& e) {
            throw fail(Cause::kConfig, stage, e.what());
        } catch (const resource_error& e) {
            throw fail(Cause::kResource, stage, e.what());
        } catch (const io_error& e) {
            throw fail(Cause::kIo, stage, e.what());
        } catch (const std::exception& e) {
            throw fail(Cause::kInternal, stage, e.what());
        }
    };

    r.n = g.n();
    r.edges = g.edge_count();
    r.environment.hardware_threads = static_cast<int>(std::thread::hardware_concurrency());
#ifdef _OPENMP
    r.environment.openmp = true;
#endif
#if defined(__VERSION__)
    r.environment.compiler = __VERSION__;
#endif

    int workers = 1;
    guard("config", [&] {
        if (cfg.layers < 1) throw config_error("layer count must be positive");
        if (cfg.budget < 1) throw config_error("optimizer budget must be positive");
        if (!(cfg.alpha > 0.0)) throw config_error("alpha must be positive");
        if (cfg.top_k < 0) throw config_error("top_k cannot be negative");
        if (cfg.start_level < 1) throw config_error("start level must be positive");
        if (cfg.qubit_cap < 2 || cfg.qubit_cap > kQubitCap)
            throw config_error("qubit cap must lie in [2, " + std::to_string(kQubitCap) + "]");
        if (!(cfg.path_budget > 0)) throw config_error("path budget must be positive");
        if (cfg.solvers < 0) throw config_error("solver slot count cannot be negative");
        if (cfg.subgraphs < 0) throw config_error("subgraph count cannot be negative");
        if (cfg.local_restarts < 1) throw config_error("local search needs at least one restart");
        if (cfg.baseline == BaselineKind::kFixedValue && !(cfg.baseline_value > 0.0))
            throw config_error("a fixed baseline needs a positive cut value");
        workers = resolve_workers(cfg.workers);
    });

    r.config.qubit_cap = cfg.qubit_cap;
    r.config.workers = workers;
    r.config.top_k = cfg.top_k;
    r.config.start_level = cfg.start_level;
    r.config.layers = cfg.layers;
    r.config.budget = cfg.budget;
    r.config.seed = cfg.seed;
    r.config.alpha = cfg.alpha;
    r.config.fold = cfg.fold;
    r.config.halve_symmetry = cfg.halve_symmetry;
    r.config.partition_mode =
        cfg.partition_mode == PartitionMode::kBalanced ? "balanced" : "paper-exact";
    r.config.merge_eval = cfg.merge_eval == MergeEval::kFullGraph ? "full" : "incremental";
    r.config.path_budget = cfg.path_budget;
    r.config.nm_tolerance = cfg.nm_tolerance;
    r.config.local_restarts = cfg.local_restarts;

    // partition
    PartitionResult part;
    guard("partition", [&] {
        detail::StageClock clock;
        const int M =
            cfg.subgraphs != 0 ? cfg.subgraphs
                               : derive_subgraph_count(g.n(), cfg.qubit_cap);
        part = partition(g, M, cfg.partition_mode, cfg.qubit_cap);
        r.config.subgraphs = static_cast<int>(part.subgraphs.size());
        r.times.partition_s = clock.seconds();
    });
    const int M = static_cast<int>(part.subgraphs.size());

    // per-subgraph solves, round by round
    std::vector<SolveResult> solves(part.subgraphs.size());
    guard("qaoa", [&] {
        detail::StageClock clock;
        const int slots = cfg.solvers != 0 ? cfg.solvers : std::max(1, std::min(workers, M));
        std::vector<int> sizes;
        for (const auto& s : part.subgraphs) sizes.push_back(static_cast<int>(s.size()));
        const auto rounds = schedule_rounds(sizes, slots);
        const int threads_per = std::max(1, workers / std::min(slots, M));

        r.has_schedule = true;
        r.schedule.rounds = static_cast<int>(rounds.size());
        r.schedule.slots = slots;
        r.config.solvers = slots;

        std::vector<double> seconds(part.subgraphs.size(), 0.0);
        std::vector<std::exception_ptr> errors(part.subgraphs.size());
        std::atomic<int> active{0};
        std::atomic<int> peak{0};

        auto solve_one = [&](int idx) {
            const int now = active.fetch_add(1) + 1;
            int seen = peak.load();
            while (now > seen && !peak.compare_exchange_weak(seen, now)) {
            }
            detail::StageClock sc;
            try {
                const auto& sub = part.subgraphs[static_cast<std::size_t>(idx)];
                const std::size_t width = sub.size();
                const std::size_t classes = cfg.fold ? (std::size_t{1} << (width - 1))
                                                     : (std::size_t{1} << width);
                SolveOptions so;
                so.top_k = cfg.top_k == 0
                               ? static_cast<int>(classes)
                               : static_cast<int>(
                                     std::min<std::size_t>(classes,
                                                           static_cast<std::size_t>(cfg.top_k)));
                so.layers = cfg.layers;
                so.budget = cfg.budget;
                so.seed = cfg.seed + static_cast<std::uint64_t>(idx);
                so.fold = cfg.fold;
                so.threads = threads_per;
                so.qubit_cap = cfg.qubit_cap;
                so.tolerance = cfg.nm_tolerance;
                solves[static_cast<std::size_t>(idx)] = solve_subgraph(sub.local_graph, so);
            } catch (...) {
                errors[static_cast<std::size_t>(idx)] = std::current_exception();
            }
            seconds[static_cast<std::size_t>(idx)] = sc.seconds();
            active.fetch_sub(1);
        };

        for (const auto& round : rounds) {
            if (round.size() == 1) {
                solve_one(round[0]);
                continue;
            }
            std::vector<std::thread> threads;
            threads.reserve(round.size());
            for (int idx : round) threads.emplace_back(solve_one, idx);
            for (auto& t : threads) t.join();
        }
        for (const auto& err : errors)
            if (err) std::rethrow_exception(err);

        r.schedule.max_concurrent = peak.load();
        for (std::size_t i = 0; i < solves.size(); ++i) {
            ExperimentReport::Subgraph sg;
            sg.index = static_cast<int>(i);
            sg.size = static_cast<int>(part.subgraphs[i].size());
            sg.retained = static_cast<int>(solves[i].candidates.entries.size());
            sg.expectation = solves[i].expectation;
            sg.evals = solves[i].evals;
            sg.seconds = seconds[i];
            r.subgraphs.push_back(sg);
        }
        r.times.qaoa_s = clock.seconds();
    });

    // merge
    MergeResult merged;
    guard("merge", [&] {
        detail::StageClock clock;
        std::vector<CandidateSet> sets;
        sets.reserve(solves.size());
        for (auto& s : solves) sets.push_back(std::move(s.candidates));
        const CandidatePool pool = build_candidate_pools(sets);

        MergeMode mode = cfg.merge_mode;
        if (mode == MergeMode::kAuto)
            mode = estimate_paths(pool, cfg.halve_symmetry) <= cfg.path_budget
                       ? MergeMode::kLevel
                       : MergeMode::kWindowed;

        if (mode == MergeMode::kLevel) {
            MergeOptions mo;
            mo.start_level = std::min(cfg.start_level, M);
            mo.workers = workers;
            mo.eval = cfg.merge_eval;
            mo.path_budget = cfg.path_budget;
            mo.halve_symmetry = cfg.halve_symmetry;
            merged = level_aware_merge(pool, g, part, mo);
            r.config.merge_mode = "level";
        } else {
            ChainedMergeOptions co;
            co.workers = workers;
            merged = chained_merge(pool, g, part, co);
            r.config.merge_mode = "windowed";
        }

        r.has_merge = true;
        r.merge.best_value = merged.best_value;
        r.merge.assignment = merged.best_assignment.to_string();
        r.merge.candidates_evaluated = merged.candidates_evaluated;
        r.times.merge_s = clock.seconds();
    });

    r.times.total_s = r.times.partition_s + r.times.qaoa_s + r.times.merge_s;

    // baseline (outside the algorithm's clock)
    guard("baseline", [&] {
        detail::StageClock clock;
        BaselineKind kind = cfg.baseline;
        if (kind == BaselineKind::kAuto)
            kind = g.n() <= cfg.brute_cap ? BaselineKind::kBruteForce : BaselineKind::kLocalSearch;
        switch (kind) {
            case BaselineKind::kBruteForce: {
                const CutResult b = brute_force_max_cut(g, cfg.brute_cap);
                r.baseline.kind = "brute";
                r.baseline.value = b.value;
                r.baseline.seconds = clock.seconds();
                break;
            }
            case BaselineKind::kLocalSearch: {
                const CutResult b = local_search_max_cut(g, cfg.local_restarts, cfg.baseline_seed);
                r.baseline.kind = "local";
                r.baseline.value = b.value;
                r.baseline.seconds = clock.seconds();
                break;
            }
            default: {
                r.baseline.kind = "value";
                r.baseline.value = cfg.baseline_value;
                r.baseline.seconds =
                    cfg.baseline_seconds >= 0.0 ? cfg.baseline_seconds : r.times.total_s;
                break;
            }
        }
        r.has_baseline = true;
        r.config.baseline = r.baseline.kind;
        r.times.baseline_s = clock.seconds();
    });

    // metrics and self-check
    guard("metrics", [&] {
        const Assignment a = Assignment::from_string(r.merge.assignment);
        r.merge.validated = cut_value(g, a) == r.merge.best_value;
        r.has_metrics = true;
        r.metrics.ar = approximation_ratio(r.merge.best_value, r.baseline.value);
        r.metrics.ef = efficiency_factor(r.times.total_s, r.baseline.seconds, cfg.alpha);
        r.metrics.pei = performance_efficiency_index(r.metrics.ar, r.metrics.ef);
        r.metrics.ar_exceeds_one = r.metrics.ar > 1.0;
    });

    return r;
}

} // namespace detail

/// Full pipeline over an already-built graph: partition, per-subgraph QAOA in
/// scheduled rounds, chain merge, baseline, metrics. Throws pipeline_error
/// with the partial report when a stage fails.
inline ExperimentReport run_pipeline(const Graph& g, const RunConfig& cfg) {
    ExperimentReport r;
    r.generated = false;
    return detail::run_pipeline_impl(g, cfg, std::move(r));
}

/// As above, but the graph comes from cfg: a file when graph_file is set,
/// otherwise ER(er_n, er_p, er_seed).
inline ExperimentReport run_pipeline(const RunConfig& cfg) {
    ExperimentReport r;
    Graph g(0);
    using Cause = pipeline_error::Cause;
    try {
        if (!cfg.graph_file.empty()) {
            r.generated = false;
            r.graph_file = cfg.graph_file;
            g = load_graph_file(cfg.graph_file);
        } else {
            if (cfg.er_n == 0)
                throw config_error("no graph source: set a file or er_n/er_p/er_seed");
            r.generated = true;
            r.p = cfg.er_p;
            r.graph_seed = cfg.er_seed;
            g = generate_er_graph(cfg.er_n, cfg.er_p, cfg.er_seed);
        }
    } catch (const config_error& e) {
        r.status = "error";
        r.error_stage = "graph";
        r.error_message = e.what();
        throw pipeline_error(Cause::kConfig, "graph", e.what(), r);
    } catch (const io_error& e) {
        r.status = "error";
        r.error_stage = "graph";
        r.error_message = e.what();
        throw pipeline_error(Cause::kIo, "graph", e.what(), r);
    }
    return detail::run_pipeline_impl(g, cfg, std::move(r));
}

} // namespace qcut
