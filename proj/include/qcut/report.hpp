#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "qcut/errors.hpp"
#include "qcut/graph.hpp"

namespace qcut {

/// Everything one pipeline run records. Sections that a failed stage never
/// reached stay absent (has_* false) and are omitted from the JSON.
struct ExperimentReport {
    int schema_version = 1;
    std::string status = "ok";  // "ok" or "error"

    // graph
    std::size_t n = 0;
    std::size_t edges = 0;
    bool generated = false;  // true: ER(n, p, seed); false: loaded from file
    double p = 0.0;
    std::uint64_t graph_seed = 0;
    std::string graph_file;

    // resolved configuration
    struct Config {
        std::size_t qubit_cap = 0;
        int subgraphs = 0;
        int solvers = 0;
        int workers = 0;
        int top_k = 0;  // as requested; 0 keeps every class
        int start_level = 0;
        int layers = 0;
        int budget = 0;
        std::uint64_t seed = 0;
        double alpha = 0.0;
        bool fold = true;
        bool halve_symmetry = false;
        std::string partition_mode;  // "balanced" or "paper-exact"
        std::string merge_eval;      // "full" or "incremental"
        std::string merge_mode;      // "level" or "windowed"
        std::string baseline;        // "brute", "local" or "value"
        double path_budget = 0.0;
        double nm_tolerance = 0.0;
        int local_restarts = 0;
    } config;

    struct Schedule {
        int rounds = 0;
        int slots = 0;
        int max_concurrent = 0;  // observed, not just planned
    } schedule;
    bool has_schedule = false;

    struct Subgraph {
        int index = 0;
        int size = 0;
        int retained = 0;  // candidate classes kept after any clamping
        double expectation = 0.0;
        int evals = 0;
        double seconds = 0.0;
    };
    std::vector<Subgraph> subgraphs;

    struct Merge {
        double best_value = 0.0;
        std::string assignment;
        std::uint64_t candidates_evaluated = 0;
        bool validated = false;  // assignment re-scored to best_value
    } merge;
    bool has_merge = false;

    struct Baseline {
        std::string kind;  // "brute", "local" or "value"
        double value = 0.0;
        double seconds = 0.0;
    } baseline;
    bool has_baseline = false;

    struct Metrics {
        double ar = 0.0;
        double ef = 0.0;
        double pei = 0.0;
        bool ar_exceeds_one = false;
    } metrics;
    bool has_metrics = false;

    struct Times {
        double partition_s = 0.0;
        double qaoa_s = 0.0;
        double merge_s = 0.0;
        double baseline_s = 0.0;
        double total_s = 0.0;  // partition + qaoa + merge: the algorithm side only
    } times;

    // like the timings, excluded from determinism comparisons
    struct Environment {
        int hardware_threads = 0;
        bool openmp = false;
        std::string compiler;
    } environment;

    std::string error_stage;  // set when status == "error"
    std::string error_message;
};

inline nlohmann::json to_json(const ExperimentReport& r) {
    nlohmann::json j;
    j["schema_version"] = r.schema_version;
    j["status"] = r.status;

    nlohmann::json graph;
    graph["n"] = r.n;
    graph["edges"] = r.edges;
    graph["generated"] = r.generated;
    if (r.generated) {
        graph["p"] = r.p;
        graph["seed"] = r.graph_seed;
    } else {
        graph["file"] = r.graph_file;
    }
    j["graph"] = graph;

    j["config"] = {{"qubit_cap", r.config.qubit_cap},
                   {"subgraphs", r.config.subgraphs},
                   {"solvers", r.config.solvers},
                   {"workers", r.config.workers},
                   {"top_k", r.config.top_k},
                   {"start_level", r.config.start_level},
                   {"layers", r.config.layers},
                   {"budget", r.config.budget},
                   {"seed", r.config.seed},
                   {"alpha", r.config.alpha},
                   {"fold", r.config.fold},
                   {"halve_symmetry", r.config.halve_symmetry},
                   {"partition_mode", r.config.partition_mode},
                   {"merge_eval", r.config.merge_eval},
                   {"merge_mode", r.config.merge_mode},
                   {"baseline", r.config.baseline},
                   {"path_budget", r.config.path_budget},
                   {"nm_tolerance", r.config.nm_tolerance},
                   {"local_restarts", r.config.local_restarts}};

    if (r.has_schedule)
        j["schedule"] = {{"rounds", r.schedule.rounds},
                         {"slots", r.schedule.slots},
                         {"max_concurrent", r.schedule.max_concurrent}};

    if (!r.subgraphs.empty()) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& s : r.subgraphs)
            arr.push_back({{"index", s.index},
                           {"size", s.size},
                           {"retained", s.retained},
                           {"expectation", s.expectation},
                           {"evals", s.evals},
                           {"seconds", s.seconds}});
        j["subgraphs"] = arr;
    }

    if (r.has_merge)
        j["merge"] = {{"best_value", r.merge.best_value},
                      {"assignment", r.merge.assignment},
                      {"candidates_evaluated", r.merge.candidates_evaluated},
                      {"validated", r.merge.validated}};

    if (r.has_baseline)
        j["baseline"] = {{"kind", r.baseline.kind},
                         {"value", r.baseline.value},
                         {"seconds", r.baseline.seconds}};

    if (r.has_metrics)
        j["metrics"] = {{"ar", r.metrics.ar},
                        {"ef", r.metrics.ef},
                        {"pei", r.metrics.pei},
                        {"ar_exceeds_one", r.metrics.ar_exceeds_one}};

    j["times"] = {{"partition_s", r.times.partition_s},
                  {"qaoa_s", r.times.qaoa_s},
                  {"merge_s", r.times.merge_s},
                  {"baseline_s", r.times.baseline_s},
                  {"total_s", r.times.total_s}};

    j["environment"] = {{"hardware_threads", r.environment.hardware_threads},
                        {"openmp", r.environment.openmp},
                        {"compiler", r.environment.compiler}};

    if (r.status == "error")
        j["error"] = {{"stage", r.error_stage}, {"message", r.error_message}};
    return j;
}

inline std::string emit_report(const ExperimentReport& r) { return to_json(r).dump(2) + "\n"; }

/// Inverse of emit_report; numeric fields come back bit-exact (the JSON
/// writer emits shortest round-trip doubles).
inline ExperimentReport parse_report(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw io_error(std::string("report is not valid JSON: ") + e.what());
    }
    try {
        ExperimentReport r;
        r.schema_version = j.at("schema_version").get<int>();
        if (r.schema_version != 1)
            throw io_error("unsupported report schema version " + std::to_string(r.schema_version));
        r.status = j.at("status").get<std::string>();

        const auto& graph = j.at("graph");
        r.n = graph.at("n").get<std::size_t>();
        r.edges = graph.at("edges").get<std::size_t>();
        r.generated = graph.at("generated").get<bool>();
        if (r.generated) {
            r.p = graph.at("p").get<double>();
            r.graph_seed = graph.at("seed").get<std::uint64_t>();
        } else {
            r.graph_file = graph.at("file").get<std::string>();
        }

        const auto& c = j.at("config");
        r.config.qubit_cap = c.at("qubit_cap").get<std::size_t>();
        r.config.subgraphs = c.at("subgraphs").get<int>();
        r.config.solvers = c.at("solvers").get<int>();
        r.config.workers = c.at("workers").get<int>();
        r.config.top_k = c.at("top_k").get<int>();
        r.config.start_level = c.at("start_level").get<int>();
        r.config.layers = c.at("layers").get<int>();
        r.config.budget = c.at("budget").get<int>();
        r.config.seed = c.at("seed").get<std::uint64_t>();
        r.config.alpha = c.at("alpha").get<double>();
        r.config.fold = c.at("fold").get<bool>();
        r.config.halve_symmetry = c.at("halve_symmetry").get<bool>();
        r.config.partition_mode = c.at("partition_mode").get<std::string>();
        r.config.merge_eval = c.at("merge_eval").get<std::string>();
        r.config.merge_mode = c.at("merge_mode").get<std::string>();
        r.config.baseline = c.at("baseline").get<std::string>();
        r.config.path_budget = c.at("path_budget").get<double>();
        r.config.nm_tolerance = c.at("nm_tolerance").get<double>();
        r.config.local_restarts = c.at("local_restarts").get<int>();

        if (j.contains("schedule")) {
            r.has_schedule = true;
            r.schedule.rounds = j["schedule"].at("rounds").get<int>();
            r.schedule.slots = j["schedule"].at("slots").get<int>();
            r.schedule.max_concurrent = j["schedule"].at("max_concurrent").get<int>();
        }

        if (j.contains("subgraphs"))
            for (const auto& s : j["subgraphs"]) {
                ExperimentReport::Subgraph sg;
                sg.index = s.at("index").get<int>();
                sg.size = s.at("size").get<int>();
                sg.retained = s.at("retained").get<int>();
                sg.expectation = s.at("expectation").get<double>();
                sg.evals = s.at("evals").get<int>();
                sg.seconds = s.at("seconds").get<double>();
                r.subgraphs.push_back(sg);
            }

        if (j.contains("merge")) {
            r.has_merge = true;
            r.merge.best_value = j["merge"].at("best_value").get<double>();
            r.merge.assignment = j["merge"].at("assignment").get<std::string>();
            r.merge.candidates_evaluated = j["merge"].at("candidates_evaluated").get<std::uint64_t>();
            r.merge.validated = j["merge"].at("validated").get<bool>();
        }

        if (j.contains("baseline")) {
            r.has_baseline = true;
            r.baseline.kind = j["baseline"].at("kind").get<std::string>();
            r.baseline.value = j["baseline"].at("value").get<double>();
            r.baseline.seconds = j["baseline"].at("seconds").get<double>();
        }

        if (j.contains("metrics")) {
            r.has_metrics = true;
            r.metrics.ar = j["metrics"].at("ar").get<double>();
            r.metrics.ef = j["metrics"].at("ef").get<double>();
            r.metrics.pei = j["metrics"].at("pei").get<double>();
            r.metrics.ar_exceeds_one = j["metrics"].at("ar_exceeds_one").get<bool>();
        }

        const auto& t = j.at("times");
        r.times.partition_s = t.at("partition_s").get<double>();
        r.times.qaoa_s = t.at("qaoa_s").get<double>();
        r.times.merge_s = t.at("merge_s").get<double>();
        r.times.baseline_s = t.at("baseline_s").get<double>();
        r.times.total_s = t.at("total_s").get<double>();

        if (j.contains("environment")) {
            r.environment.hardware_threads = j["environment"].at("hardware_threads").get<int>();
            r.environment.openmp = j["environment"].at("openmp").get<bool>();
            r.environment.compiler = j["environment"].at("compiler").get<std::string>();
        }

        if (j.contains("error")) {
            r.error_stage = j["error"].at("stage").get<std::string>();
            r.error_message = j["error"].at("message").get<std::string>();
        }
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw io_error(std::string("report is missing required fields: ") + e.what());
    }
}

inline std::string csv_header() {
    return "n,p,seed,M,K,L,cut,ar,ef,pei,partition_s,qaoa_s,merge_s,baseline_s,total_s";
}

/// One sweep row. Graphs loaded from files leave p and seed empty.
inline std::string csv_row(const ExperimentReport& r) {
    auto num = [](double v) { return detail::format_weight(v); };
    std::string row = std::to_string(r.n) + ",";
    if (r.generated) row += num(r.p);
    row += ",";
    if (r.generated) row += std::to_string(r.graph_seed);
    row += "," + std::to_string(r.config.subgraphs) + "," + std::to_string(r.config.top_k) + "," +
           std::to_string(r.config.start_level) + ",";
    row += (r.has_merge ? num(r.merge.best_value) : "") + std::string(",");
    row += (r.has_metrics ? num(r.metrics.ar) : "") + std::string(",");
    row += (r.has_metrics ? num(r.metrics.ef) : "") + std::string(",");
    row += (r.has_metrics ? num(r.metrics.pei) : "") + std::string(",");
    row += num(r.times.partition_s) + "," + num(r.times.qaoa_s) + "," + num(r.times.merge_s) +
           "," + num(r.times.baseline_s) + "," + num(r.times.total_s);
    return row;
}

} // namespace qcut
