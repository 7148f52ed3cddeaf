// Command-line front end: solve one instance, sweep a parameter grid, run the
// classical oracles, or generate ER instances. Exit codes: 0 success,
// 1 invalid configuration, 2 resource guard tripped, 3 I/O error.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qcut/qcut.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitResource = 2;
constexpr int kExitIo = 3;

int exit_code_for(qcut::pipeline_error::Cause cause) {
    switch (cause) {
        case qcut::pipeline_error::Cause::kResource: return kExitResource;
        case qcut::pipeline_error::Cause::kIo: return kExitIo;
        default: return kExitConfig;
    }
}

struct ErSpec {
    std::size_t n = 0;
    double p = 0.0;
    std::uint64_t seed = 0;
};

// "--er n,p,seed" with seed optional (defaults to 0)
ErSpec parse_er(const std::string& text) {
    ErSpec er;
    std::istringstream in(text);
    std::string tok;
    std::vector<std::string> parts;
    while (std::getline(in, tok, ',')) parts.push_back(tok);
    if (parts.size() < 2 || parts.size() > 3)
        throw qcut::config_error("--er expects n,p[,seed], got \"" + text + "\"");
    try {
        er.n = std::stoull(parts[0]);
        er.p = std::stod(parts[1]);
        er.seed = parts.size() == 3 ? std::stoull(parts[2]) : 0;
    } catch (const std::exception&) {
        throw qcut::config_error("--er expects numeric n,p[,seed], got \"" + text + "\"");
    }
    return er;
}

// "brute", "local" or "value=X"
void parse_baseline(const std::string& text, qcut::RunConfig& cfg) {
    if (text == "brute") {
        cfg.baseline = qcut::BaselineKind::kBruteForce;
    } else if (text == "local") {
        cfg.baseline = qcut::BaselineKind::kLocalSearch;
    } else if (text.rfind("value=", 0) == 0) {
        cfg.baseline = qcut::BaselineKind::kFixedValue;
        try {
            cfg.baseline_value = std::stod(text.substr(6));
        } catch (const std::exception&) {
            throw qcut::config_error("--baseline value=X needs a number, got \"" + text + "\"");
        }
    } else if (text == "auto") {
        cfg.baseline = qcut::BaselineKind::kAuto;
    } else {
        throw qcut::config_error("--baseline must be brute, local, value=X or auto");
    }
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw qcut::io_error("cannot open for writing: " + path);
    out << text;
    out.flush();
    if (!out) throw qcut::io_error("write failure: " + path);
}

// §flags shared by solve and sweep
struct SolveFlags {
    std::string graph_file;
    std::string er_text;
    std::string baseline_text = "auto";
    std::string partition_text = "balanced";
    std::string merge_mode_text = "auto";
    std::string merge_eval_text = "incremental";
    std::string format = "json";
    std::string out_path;
    qcut::RunConfig cfg;
    bool no_fold = false;
};

void add_solver_options(CLI::App* cmd, SolveFlags& f) {
    cmd->add_option("--graph", f.graph_file, "graph file (edge-list format)");
    cmd->add_option("--er", f.er_text, "generate ER graph: n,p[,seed]");
    cmd->add_option("--qubits", f.cfg.qubit_cap, "max subgraph size a solver accepts")
        ->capture_default_str();
    cmd->add_option("--solvers", f.cfg.solvers, "concurrent solver slots (0 = auto)")
        ->capture_default_str();
    cmd->add_option("--subgraphs", f.cfg.subgraphs, "partition piece count (0 = derive)")
        ->capture_default_str();
    cmd->add_option("--top-k", f.cfg.top_k, "candidates kept per subgraph (0 = all classes)")
        ->capture_default_str();
    cmd->add_option("--merge-level", f.cfg.start_level, "merge prefix expansion depth")
        ->capture_default_str();
    cmd->add_option("--layers", f.cfg.layers, "QAOA layer count")->capture_default_str();
    cmd->add_option("--budget", f.cfg.budget, "optimizer evaluations per subgraph")
        ->capture_default_str();
    cmd->add_option("--alpha", f.cfg.alpha, "efficiency-factor exponent")->capture_default_str();
    cmd->add_option("--seed", f.cfg.seed, "base solver seed (subgraph i adds i)")
        ->capture_default_str();
    cmd->add_option("--baseline", f.baseline_text, "brute | local | value=X | auto")
        ->capture_default_str();
    cmd->add_option("--partition", f.partition_text, "balanced | paper-exact")
        ->capture_default_str();
    cmd->add_option("--merge-mode", f.merge_mode_text, "auto | level | windowed")
        ->capture_default_str();
    cmd->add_option("--merge-eval", f.merge_eval_text, "incremental | full")
        ->capture_default_str();
    cmd->add_option("--path-budget", f.cfg.path_budget, "merge enumeration refusal threshold")
        ->capture_default_str();
    cmd->add_option("--workers", f.cfg.workers, "worker threads (0 = QCUT_WORKERS or hardware)")
        ->capture_default_str();
    cmd->add_option("--restarts", f.cfg.local_restarts, "local-search baseline restarts")
        ->capture_default_str();
    cmd->add_option("--brute-cap", f.cfg.brute_cap, "brute-force baseline size cap")
        ->capture_default_str();
    cmd->add_flag("--no-fold", f.no_fold, "keep raw bitstrings instead of complement classes");
    cmd->add_flag("--halve-symmetry", f.cfg.halve_symmetry,
                  "skip global complements during the merge");
}

void finalize_config(SolveFlags& f, bool require_graph = true) {
    if (require_graph) {
        if (!f.graph_file.empty() && !f.er_text.empty())
            throw qcut::config_error("give either --graph or --er, not both");
        if (f.graph_file.empty() && f.er_text.empty())
            throw qcut::config_error("a graph source is required: --graph FILE or --er n,p[,seed]");
        if (!f.er_text.empty()) {
            const ErSpec er = parse_er(f.er_text);
            f.cfg.er_n = er.n;
            f.cfg.er_p = er.p;
            f.cfg.er_seed = er.seed;
        } else {
            f.cfg.graph_file = f.graph_file;
        }
    }
    parse_baseline(f.baseline_text, f.cfg);
    if (f.partition_text == "balanced")
        f.cfg.partition_mode = qcut::PartitionMode::kBalanced;
    else if (f.partition_text == "paper-exact")
        f.cfg.partition_mode = qcut::PartitionMode::kTailRemainder;
    else
        throw qcut::config_error("--partition must be balanced or paper-exact");
    if (f.merge_mode_text == "auto")
        f.cfg.merge_mode = qcut::MergeMode::kAuto;
    else if (f.merge_mode_text == "level")
        f.cfg.merge_mode = qcut::MergeMode::kLevel;
    else if (f.merge_mode_text == "windowed")
        f.cfg.merge_mode = qcut::MergeMode::kWindowed;
    else
        throw qcut::config_error("--merge-mode must be auto, level or windowed");
    if (f.merge_eval_text == "incremental")
        f.cfg.merge_eval = qcut::MergeEval::kIncremental;
    else if (f.merge_eval_text == "full")
        f.cfg.merge_eval = qcut::MergeEval::kFullGraph;
    else
        throw qcut::config_error("--merge-eval must be incremental or full");
    if (f.format != "json" && f.format != "csv")
        throw qcut::config_error("--format must be json or csv");
    f.cfg.fold = !f.no_fold;
}

// nudge toward the sweet spot where prefix count roughly matches the pool
void parallelism_hint(const qcut::RunConfig& cfg) {
    const int workers = qcut::resolve_workers(cfg.workers);
    if (workers <= 1 || cfg.top_k == 0) return;
    const double starts =
        2.0 * std::pow(static_cast<double>(cfg.top_k), static_cast<double>(cfg.start_level));
    if (starts < workers)
        std::cerr << "note: merge expands " << starts << " starting paths for " << workers
                  << " workers; a deeper --merge-level would use them all\n";
    else if (starts > 64.0 * workers)
        std::cerr << "note: merge expands " << starts << " starting paths for " << workers
                  << " workers; a shallower --merge-level would cut setup cost\n";
}

int cmd_solve(SolveFlags& f) {
    finalize_config(f);
    parallelism_hint(f.cfg);
    const qcut::ExperimentReport report = qcut::run_pipeline(f.cfg);
    if (f.format == "json")
        write_text(f.out_path, qcut::emit_report(report));
    else
        write_text(f.out_path, qcut::csv_header() + "\n" + qcut::csv_row(report) + "\n");
    return kExitOk;
}

// Grid file: JSON object; "n", "p", "seed", "top_k", "merge_level" may be
// arrays (cross product, in that nesting order); every other key is a scalar
// forwarded to the run config. Rows stream to the sink as they finish.
int cmd_sweep(const std::string& grid_path, SolveFlags& base, const std::string& out_path) {
    std::ifstream in(grid_path);
    if (!in) throw qcut::io_error("cannot open grid file: " + grid_path);
    nlohmann::json grid;
    try {
        grid = nlohmann::json::parse(in, nullptr, true, true);  // allow comments
    } catch (const nlohmann::json::exception& e) {
        throw qcut::io_error("grid file is not valid JSON: " + std::string(e.what()));
    }
    if (!grid.is_object()) throw qcut::io_error("grid file must hold a JSON object");

    auto axis = [&](const char* key, nlohmann::json fallback) {
        nlohmann::json v = grid.contains(key) ? grid[key] : std::move(fallback);
        if (!v.is_array()) v = nlohmann::json::array({v});
        if (v.empty()) throw qcut::config_error(std::string("grid axis '") + key + "' is empty");
        return v;
    };

    qcut::RunConfig cfg = base.cfg;
    try {
        if (grid.contains("qubits")) cfg.qubit_cap = grid["qubits"].get<std::size_t>();
        if (grid.contains("solvers")) cfg.solvers = grid["solvers"].get<int>();
        if (grid.contains("subgraphs")) cfg.subgraphs = grid["subgraphs"].get<int>();
        if (grid.contains("layers")) cfg.layers = grid["layers"].get<int>();
        if (grid.contains("budget")) cfg.budget = grid["budget"].get<int>();
        if (grid.contains("alpha")) cfg.alpha = grid["alpha"].get<double>();
        if (grid.contains("workers")) cfg.workers = grid["workers"].get<int>();
        if (grid.contains("fold")) cfg.fold = grid["fold"].get<bool>();
        if (grid.contains("halve_symmetry")) cfg.halve_symmetry = grid["halve_symmetry"].get<bool>();
        if (grid.contains("path_budget")) cfg.path_budget = grid["path_budget"].get<double>();
        if (grid.contains("baseline")) parse_baseline(grid["baseline"].get<std::string>(), cfg);
        if (grid.contains("partition")) {
            const auto mode = grid["partition"].get<std::string>();
            if (mode == "balanced")
                cfg.partition_mode = qcut::PartitionMode::kBalanced;
            else if (mode == "paper-exact")
                cfg.partition_mode = qcut::PartitionMode::kTailRemainder;
            else
                throw qcut::config_error("grid 'partition' must be balanced or paper-exact");
        }
    } catch (const nlohmann::json::exception& e) {
        throw qcut::config_error("grid scalar has the wrong type: " + std::string(e.what()));
    }

    const auto ns = axis("n", nlohmann::json::array({20}));
    const auto ps = axis("p", nlohmann::json::array({0.5}));
    const auto seeds = axis("seed", nlohmann::json::array({0}));
    const auto ks = axis("top_k", nlohmann::json::array({cfg.top_k}));
    const auto ls = axis("merge_level", nlohmann::json::array({cfg.start_level}));

    std::ostream* sink = &std::cout;
    std::ofstream file;
    if (!out_path.empty() && out_path != "-") {
        file.open(out_path);
        if (!file) throw qcut::io_error("cannot open for writing: " + out_path);
        sink = &file;
    }
    *sink << qcut::csv_header() << "\n";
    sink->flush();

    try {
        for (const auto& n : ns)
            for (const auto& p : ps)
                for (const auto& seed : seeds)
                    for (const auto& k : ks)
                        for (const auto& l : ls) {
                            qcut::RunConfig run = cfg;
                            run.er_n = n.get<std::size_t>();
                            run.er_p = p.get<double>();
                            run.er_seed = seed.get<std::uint64_t>();
                            run.top_k = k.get<int>();
                            run.start_level = l.get<int>();
                            const qcut::ExperimentReport report = qcut::run_pipeline(run);
                            *sink << qcut::csv_row(report) << "\n";
                            sink->flush();
                        }
    } catch (const nlohmann::json::exception& e) {
        throw qcut::config_error("grid axis has the wrong type: " + std::string(e.what()));
    }
    if (!*sink) throw qcut::io_error("write failure on sweep output");
    return kExitOk;
}

int cmd_oracle(const std::string& graph_file, const std::string& er_text,
               const std::string& method, int restarts, std::uint64_t seed, std::size_t cap,
               const std::string& out_path) {
    if (graph_file.empty() == er_text.empty())
        throw qcut::config_error("give exactly one of --graph or --er");
    qcut::Graph g(0);
    if (!graph_file.empty()) {
        g = qcut::load_graph_file(graph_file);
    } else {
        const ErSpec er = parse_er(er_text);
        g = qcut::generate_er_graph(er.n, er.p, er.seed);
    }

    qcut::detail::StageClock clock;
    qcut::CutResult res{0.0, qcut::Assignment(g.n(), 0)};
    if (method == "brute")
        res = qcut::brute_force_max_cut(g, cap);
    else if (method == "local")
        res = qcut::local_search_max_cut(g, restarts, seed);
    else
        throw qcut::config_error("--method must be brute or local");

    nlohmann::json j;
    j["method"] = method;
    j["n"] = g.n();
    j["edges"] = g.edge_count();
    j["value"] = res.value;
    j["assignment"] = res.assignment.to_string();
    j["seconds"] = clock.seconds();
    write_text(out_path, j.dump(2) + "\n");
    return kExitOk;
}

int cmd_gen(const std::string& er_text, const std::string& out_path) {
    if (er_text.empty()) throw qcut::config_error("gen needs --er n,p[,seed]");
    const ErSpec er = parse_er(er_text);
    const qcut::Graph g = qcut::generate_er_graph(er.n, er.p, er.seed);
    std::ostringstream buf;
    buf << "# ER n=" << er.n << " p=" << er.p << " seed=" << er.seed << "\n";
    qcut::save_graph(g, buf);
    write_text(out_path, buf.str());
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Divide-and-conquer Max-Cut solver: partitioned QAOA simulation with "
                 "candidate merging"};
    app.require_subcommand(1);

    SolveFlags solve_flags;
    CLI::App* solve = app.add_subcommand("solve", "run the full pipeline on one instance");
    add_solver_options(solve, solve_flags);
    solve->add_option("--format", solve_flags.format, "json | csv")->capture_default_str();
    solve->add_option("--out", solve_flags.out_path, "output path (default stdout)");

    SolveFlags sweep_flags;
    std::string grid_path, sweep_out;
    CLI::App* sweep = app.add_subcommand("sweep", "run a parameter grid, emitting CSV rows");
    sweep->add_option("--grid", grid_path, "JSON grid file")->required();
    sweep->add_option("--out", sweep_out, "output path (default stdout)");
    add_solver_options(sweep, sweep_flags);

    std::string o_graph, o_er, o_method = "brute", o_out;
    int o_restarts = 20;
    std::uint64_t o_seed = 0;
    std::size_t o_cap = 24;
    CLI::App* oracle = app.add_subcommand("oracle", "classical reference solvers");
    oracle->add_option("--graph", o_graph, "graph file");
    oracle->add_option("--er", o_er, "generate ER graph: n,p[,seed]");
    oracle->add_option("--method", o_method, "brute | local")->capture_default_str();
    oracle->add_option("--restarts", o_restarts, "local-search restarts")->capture_default_str();
    oracle->add_option("--seed", o_seed, "local-search seed")->capture_default_str();
    oracle->add_option("--cap", o_cap, "brute-force size cap")->capture_default_str();
    oracle->add_option("--out", o_out, "output path (default stdout)");

    std::string g_er, g_out;
    CLI::App* gen = app.add_subcommand("gen", "emit an ER instance in edge-list format");
    gen->add_option("--er", g_er, "n,p[,seed]")->required();
    gen->add_option("--out", g_out, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (solve->parsed()) return cmd_solve(solve_flags);
        if (sweep->parsed()) {
            finalize_config(sweep_flags, /*require_graph=*/false);
            return cmd_sweep(grid_path, sweep_flags, sweep_out);
        }
        if (oracle->parsed())
            return cmd_oracle(o_graph, o_er, o_method, o_restarts, o_seed, o_cap, o_out);
        if (gen->parsed()) return cmd_gen(g_er, g_out);
    } catch (const qcut::pipeline_error& e) {
        std::cerr << "error in stage '" << e.stage() << "': " << e.what() << "\n";
        if (!solve_flags.out_path.empty() && solve_flags.out_path != "-") {
            try {
                write_text(solve_flags.out_path, qcut::emit_report(e.report()));
            } catch (...) {
            }
        }
        return exit_code_for(e.cause());
    } catch (const qcut::config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const qcut::resource_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitResource;
    } catch (const qcut::io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
