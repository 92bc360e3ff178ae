// Command-line front end: instance generation, single solver runs, and the
// multi-run benchmark harness with CSV output.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rflp/bench.hpp"
#include "rflp/eamls.hpp"
#include "rflp/errors.hpp"
#include "rflp/evolve.hpp"
#include "rflp/instgen.hpp"
#include "rflp/oracle.hpp"
#include "rflp/rng.hpp"

namespace {

namespace fs = std::filesystem;

struct solver_flags {
    std::uint32_t generations = 0; // 0 = pick by instance scale
    std::size_t pop_size = 0;      // 0 = pick by instance scale
    double crossover_rate = 0.9;
    double mutation_rate = 0.1;
    std::size_t ls_count = 10;
    double l3_threshold = 0.8;
    std::size_t pop_step = 100;

    void add_to(CLI::App& cmd) {
        cmd.add_option("--generations", generations, "Generation count (0 = scale default)");
        cmd.add_option("--pop-size", pop_size, "Population size (0 = scale default)");
        cmd.add_option("--crossover-rate", crossover_rate, "GA crossover rate");
        cmd.add_option("--mutation-rate", mutation_rate, "Per-bit mutation rate");
        cmd.add_option("--ls-count", ls_count, "EAMLS individuals expanded per generation");
        cmd.add_option("--l3-threshold", l3_threshold, "EAMLS population growth threshold");
        cmd.add_option("--pop-step", pop_step, "EAMLS population growth step");
    }

    rflp::ga_config ga(std::size_t n, const rflp::model_config& model) const {
        rflp::ga_config cfg;
        rflp::apply_scale_defaults(n, cfg);
        if (generations != 0) cfg.generations = generations;
        if (pop_size != 0) cfg.pop_size = pop_size;
        cfg.crossover_rate = crossover_rate;
        cfg.mutation_rate = mutation_rate;
        cfg.model = model;
        return cfg;
    }

    rflp::eamls_config eamls(std::size_t n, const rflp::model_config& model) const {
        rflp::eamls_config cfg;
        rflp::apply_scale_defaults(n, cfg);
        if (generations != 0) cfg.generations = generations;
        if (pop_size != 0) cfg.pop_size = pop_size;
        cfg.mutation_rate = mutation_rate;
        cfg.ls_count = ls_count;
        cfg.l3_threshold = l3_threshold;
        cfg.pop_step = pop_step;
        cfg.model = model;
        return cfg;
    }
};

rflp::model_config parse_model(const std::string& name, double alpha) {
    if (name == "m2") return rflp::model_config::m2(alpha);
    if (name == "msum") return rflp::model_config::msum(alpha);
    throw std::invalid_argument("unknown model '" + name + "' (expected m2 or msum)");
}

void write_text(const std::string& out_path, const std::string& text) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open " + out_path + " for writing");
    out << text;
}

int cmd_gen(std::size_t n, std::uint32_t count, std::uint64_t seed, const std::string& out_dir,
            const std::string& prefix, double failure_prob,
            std::pair<std::int64_t, std::int64_t> demand_range,
            std::pair<std::int64_t, std::int64_t> cost_range) {
    fs::create_directories(out_dir.empty() ? "." : out_dir);
    for (std::uint32_t k = 0; k < count; ++k) {
        rflp::gen_params params;
        params.n = n;
        params.failure_prob = failure_prob;
        params.demand_min = demand_range.first;
        params.demand_max = demand_range.second;
        params.fixed_cost_min = cost_range.first;
        params.fixed_cost_max = cost_range.second;
        params.seed = rflp::derive_seed(seed, {k});
        const rflp::instance inst = rflp::generate_instance(params);

        std::ostringstream name;
        name << prefix << "-n" << n << "-" << (k + 1) << ".inst";
        const fs::path path = fs::path(out_dir.empty() ? "." : out_dir) / name.str();
        rflp::instance_metadata meta{
            {"seed", std::to_string(params.seed)},
            {"base_seed", std::to_string(seed)},
            {"index", std::to_string(k + 1)},
        };
        rflp::write_instance_file(inst, path, meta);
        std::cout << path.string() << "\tseed=" << params.seed << '\n';
    }
    return 0;
}

int cmd_solve(const std::string& instance_path, const std::string& solver_name,
              const std::string& model_name, double alpha, std::uint64_t seed,
              const std::string& out_path, std::size_t oracle_limit, const solver_flags& flags) {
    const rflp::instance inst = rflp::read_instance_file(instance_path);
    const rflp::model_config model = parse_model(model_name, alpha);
    const std::string id = instance_path == "-" ? "stdin" : fs::path(instance_path).stem().string();
    const rflp::solver_kind kind = rflp::solver_from_string(solver_name);

    rflp::run_report report;
    switch (kind) {
        case rflp::solver_kind::ga:
            report = rflp::run_ga(inst, [&] {
                auto cfg = flags.ga(inst.n, model);
                cfg.seed = seed;
                return cfg;
            }());
            break;
        case rflp::solver_kind::eamls:
            report = rflp::run_eamls(inst, [&] {
                auto cfg = flags.eamls(inst.n, model);
                cfg.seed = seed;
                return cfg;
            }());
            break;
        case rflp::solver_kind::oracle: {
            const auto t0 = std::chrono::steady_clock::now();
            const rflp::exact_result exact = rflp::brute_force_optimum(inst, model, oracle_limit);
            report.solver = "oracle";
            report.model = model.name();
            report.alpha = alpha;
            report.seed = seed;
            report.best_genotype = exact.optimum;
            report.best_objective = exact.objective;
            report.levels_used = model.levels_for(exact.optimum.popcount());
            report.evaluations = exact.num_enumerated;
            report.params = {{"limit", std::to_string(oracle_limit)}};
            report.total_ms =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                    .count();
            break;
        }
    }
    write_text(out_path, rflp::report_to_json(report, id, inst.n));
    if (!out_path.empty() && out_path != "-") {
        std::cerr << "wrote " << out_path << " (best " << report.best_objective << ")\n";
    }
    return 0;
}

int cmd_bench(const std::vector<std::string>& instance_paths, std::size_t gen_n,
              std::uint32_t gen_count, std::uint64_t gen_seed, const std::string& solvers_csv,
              const std::string& model_name, double alpha, std::uint32_t runs,
              std::uint64_t base_seed, const std::string& out_prefix,
              const std::string& reference, bool emit_trace, std::size_t oracle_limit,
              const solver_flags& flags) {
    rflp::bench_plan plan;
    plan.model = parse_model(model_name, alpha);
    plan.runs = runs;
    plan.base_seed = base_seed;
    plan.oracle_limit = oracle_limit;
    plan.keep_traces = emit_trace;

    for (const auto& path : instance_paths) {
        plan.instances.push_back(
            {fs::path(path).stem().string(), rflp::read_instance_file(path)});
    }
    if (gen_n != 0) {
        for (std::uint32_t k = 0; k < gen_count; ++k) {
            rflp::gen_params params;
            params.n = gen_n;
            params.seed = rflp::derive_seed(gen_seed, {k});
            plan.instances.push_back({std::to_string(gen_n) + "-" + std::to_string(k + 1),
                                      rflp::generate_instance(params)});
        }
    }
    if (plan.instances.empty()) {
        throw std::invalid_argument("bench: give --instance files and/or --n with --count");
    }

    std::stringstream solvers(solvers_csv);
    std::string token;
    while (std::getline(solvers, token, ',')) {
        if (!token.empty()) plan.solvers.push_back(rflp::solver_from_string(token));
    }
    if (plan.solvers.empty()) throw std::invalid_argument("bench: empty solver list");

    // All instances in one plan share solver parameters, resolved on the
    // first instance's scale when not given explicitly.
    const std::size_t scale_n = plan.instances.front().inst.n;
    plan.ga = flags.ga(scale_n, plan.model);
    plan.ea = flags.eamls(scale_n, plan.model);

    const rflp::bench_result result = rflp::run_bench(plan);
    for (const auto& failure : result.failures) std::cerr << "warning: " << failure << '\n';

    const auto summary = rflp::summarize(result.records, reference);
    {
        std::ofstream raw(out_prefix + "_raw.csv");
        if (!raw) throw std::runtime_error("cannot open " + out_prefix + "_raw.csv");
        rflp::write_raw_csv(raw, result.records);
    }
    {
        std::ofstream sum(out_prefix + "_summary.csv");
        if (!sum) throw std::runtime_error("cannot open " + out_prefix + "_summary.csv");
        rflp::write_summary_csv(sum, summary);
    }
    if (emit_trace) {
        std::ofstream traces(out_prefix + "_traces.jsonl");
        if (!traces) throw std::runtime_error("cannot open " + out_prefix + "_traces.jsonl");
        std::size_t t = 0;
        for (const auto& rec : result.records) {
            if (rec.solver == "oracle") continue;
            if (t >= result.traces.size()) break;
            std::size_t inst_n = 0;
            for (const auto& ni : plan.instances) {
                if (ni.id == rec.instance_id) {
                    inst_n = ni.inst.n;
                    break;
                }
            }
            std::string json = rflp::report_to_json(result.traces[t++], rec.instance_id, inst_n);
            // one object per line
            for (auto& c : json) {
                if (c == '\n') c = ' ';
            }
            traces << json << '\n';
        }
    }
    rflp::write_summary_csv(std::cout, summary);
    std::cerr << "wrote " << out_prefix << "_raw.csv, " << out_prefix << "_summary.csv"
              << (emit_trace ? ", " + out_prefix + "_traces.jsonl" : "") << '\n';
    return 0;
}

int cmd_stats(const std::string& in_path, const std::string& out_path,
              const std::string& reference) {
    std::vector<rflp::run_record> records;
    if (in_path == "-") {
        records = rflp::read_raw_csv(std::cin, "<stdin>");
    } else {
        std::ifstream in(in_path);
        if (!in) throw std::runtime_error("cannot open " + in_path);
        records = rflp::read_raw_csv(in, in_path);
    }
    const auto summary = rflp::summarize(records, reference);
    std::ostringstream out;
    rflp::write_summary_csv(out, summary);
    write_text(out_path, out.str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reliable facility location solvers and benchmark harness"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "Generate seeded random instances");
    std::size_t gen_nodes = 0;
    std::uint32_t gen_count = 1;
    std::uint64_t gen_seed = 1;
    std::string gen_out = ".";
    std::string gen_prefix = "rflp";
    double gen_p = 0.05;
    std::pair<std::int64_t, std::int64_t> gen_demand{0, 1000};
    std::pair<std::int64_t, std::int64_t> gen_cost{500, 1500};
    gen->add_option("--n", gen_nodes, "Nodes per instance")->required();
    gen->add_option("--count", gen_count, "Number of instances");
    gen->add_option("--seed", gen_seed, "Base seed");
    gen->add_option("--out", gen_out, "Output directory");
    gen->add_option("--prefix", gen_prefix, "File name prefix");
    gen->add_option("--failure-prob", gen_p, "Facility failure probability");
    gen->add_option("--demand-min", gen_demand.first, "Demand range lower end");
    gen->add_option("--demand-max", gen_demand.second, "Demand range upper end");
    gen->add_option("--cost-min", gen_cost.first, "Fixed cost range lower end");
    gen->add_option("--cost-max", gen_cost.second, "Fixed cost range upper end");

    // solve
    auto* solve = app.add_subcommand("solve", "Run one solver on one instance");
    std::string solve_instance;
    std::string solve_solver;
    std::string solve_model = "msum";
    double solve_alpha = 1.0;
    std::uint64_t solve_seed = 1;
    std::string solve_out;
    std::size_t solve_oracle_limit = 20;
    solver_flags solve_flags;
    solve->add_option("--instance", solve_instance, "Instance file ('-' for stdin)")->required();
    solve->add_option("--solver", solve_solver, "ga, eamls or oracle")->required();
    solve->add_option("--model", solve_model, "m2 or msum");
    solve->add_option("--alpha", solve_alpha, "Transportation cost weight");
    solve->add_option("--seed", solve_seed, "Run seed");
    solve->add_option("--out", solve_out, "Report path (default stdout)");
    solve->add_option("--oracle-limit", solve_oracle_limit, "Max nodes for the exact solver");
    solve_flags.add_to(*solve);

    // bench
    auto* bench = app.add_subcommand("bench", "Run a multi-run benchmark");
    std::vector<std::string> bench_instances;
    std::size_t bench_n = 0;
    std::uint32_t bench_count = 8;
    std::uint64_t bench_gen_seed = 1;
    std::string bench_solvers = "ga,eamls";
    std::string bench_model = "msum";
    double bench_alpha = 1.0;
    std::uint32_t bench_runs = 30;
    std::uint64_t bench_seed = 1;
    std::string bench_out = "bench";
    std::string bench_reference = "eamls";
    bool bench_trace = false;
    std::size_t bench_oracle_limit = 20;
    solver_flags bench_flags;
    bench->add_option("--instance", bench_instances, "Instance files (repeatable)");
    bench->add_option("--n", bench_n, "Generate instances with this many nodes");
    bench->add_option("--count", bench_count, "Number of generated instances");
    bench->add_option("--gen-seed", bench_gen_seed, "Base seed for generated instances");
    bench->add_option("--solvers", bench_solvers, "Comma-separated solver list");
    bench->add_option("--model", bench_model, "m2 or msum");
    bench->add_option("--alpha", bench_alpha, "Transportation cost weight");
    bench->add_option("--runs", bench_runs, "Runs per (instance, solver)");
    bench->add_option("--seed", bench_seed, "Base seed for run seeds");
    bench->add_option("--out", bench_out, "Output file prefix");
    bench->add_option("--reference", bench_reference, "Reference solver for Gap/Wilcoxon");
    bench->add_flag("--emit-trace", bench_trace, "Also write per-run traces (jsonl)");
    bench->add_option("--oracle-limit", bench_oracle_limit, "Max nodes for the exact solver");
    bench_flags.add_to(*bench);

    // stats
    auto* stats = app.add_subcommand("stats", "Recompute summary statistics from a raw CSV");
    std::string stats_in;
    std::string stats_out;
    std::string stats_reference = "eamls";
    stats->add_option("--in", stats_in, "Raw results CSV ('-' for stdin)")->required();
    stats->add_option("--out", stats_out, "Summary CSV path (default stdout)");
    stats->add_option("--reference", stats_reference, "Reference solver");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 1;
    }

    try {
        if (gen->parsed()) {
            return cmd_gen(gen_nodes, gen_count, gen_seed, gen_out, gen_prefix, gen_p, gen_demand,
                           gen_cost);
        }
        if (solve->parsed()) {
            return cmd_solve(solve_instance, solve_solver, solve_model, solve_alpha, solve_seed,
                             solve_out, solve_oracle_limit, solve_flags);
        }
        if (bench->parsed()) {
            return cmd_bench(bench_instances, bench_n, bench_count, bench_gen_seed, bench_solvers,
                             bench_model, bench_alpha, bench_runs, bench_seed, bench_out,
                             bench_reference, bench_trace, bench_oracle_limit, bench_flags);
        }
        if (stats->parsed()) {
            return cmd_stats(stats_in, stats_out, stats_reference);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
