#include "rflp/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "rflp/errors.hpp"
#include "rflp/oracle.hpp"
#include "rflp/rng.hpp"
#include "rflp/stats.hpp"

namespace rflp {

namespace {

constexpr double k_nan = std::numeric_limits<double>::quiet_NaN();

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

} // namespace

std::string to_string(solver_kind kind) {
    switch (kind) {
        case solver_kind::ga: return "ga";
        case solver_kind::eamls: return "eamls";
        case solver_kind::oracle: return "oracle";
    }
    throw std::logic_error("unknown solver kind");
}

solver_kind solver_from_string(const std::string& name) {
    if (name == "ga") return solver_kind::ga;
    if (name == "eamls") return solver_kind::eamls;
    if (name == "oracle") return solver_kind::oracle;
    throw std::invalid_argument("unknown solver '" + name + "' (expected ga, eamls or oracle)");
}

std::uint64_t solver_seed_id(solver_kind kind) {
    switch (kind) {
        case solver_kind::ga: return 1;
        case solver_kind::eamls: return 2;
        case solver_kind::oracle: return 3;
    }
    throw std::logic_error("unknown solver kind");
}

std::uint64_t cell_seed(std::uint64_t base_seed, std::size_t instance_index, solver_kind solver,
                        std::uint32_t run) {
    return derive_seed(base_seed, {instance_index, solver_seed_id(solver), run});
}

void apply_scale_defaults(std::size_t n, ga_config& ga) {
    if (n <= 10) {
        ga.generations = 60;
        ga.pop_size = 30;
    } else if (n <= 50) {
        ga.generations = 200;
        ga.pop_size = 200;
    } else if (n <= 100) {
        ga.generations = 400;
        ga.pop_size = 200;
    } else {
        ga.generations = 4600;
        ga.pop_size = 200;
    }
}

void apply_scale_defaults(std::size_t n, eamls_config& ea) {
    if (n <= 10) {
        ea.generations = 10;
        ea.pop_size = 20;
    } else if (n <= 50) {
        ea.generations = 20;
        ea.pop_size = 20;
    } else if (n <= 100) {
        ea.generations = 50;
        ea.pop_size = 100;
    } else {
        ea.generations = 250;
        ea.pop_size = 200;
    }
}

bench_result run_bench(const bench_plan& plan) {
    if (plan.instances.empty()) throw std::invalid_argument("bench: no instances");
    if (plan.solvers.empty()) throw std::invalid_argument("bench: no solvers");
    if (plan.runs < 1) throw std::invalid_argument("bench: runs must be at least 1");

    bench_result result;
    using clock = std::chrono::steady_clock;

    for (std::size_t idx = 0; idx < plan.instances.size(); ++idx) {
        const auto& [id, inst] = plan.instances[idx];
        const std::size_t first_record = result.records.size();
        double optimum = k_nan;

        for (solver_kind kind : plan.solvers) {
            const std::uint32_t runs = kind == solver_kind::oracle ? 1 : plan.runs;
            for (std::uint32_t run = 0; run < runs; ++run) {
                const std::uint64_t seed = cell_seed(plan.base_seed, idx, kind, run);
                run_record rec;
                rec.instance_id = id;
                rec.solver = to_string(kind);
                rec.model = plan.model.name();
                rec.run = run;
                rec.seed = seed;
                try {
                    const auto t0 = clock::now();
                    switch (kind) {
                        case solver_kind::ga: {
                            ga_config cfg = plan.ga;
                            cfg.model = plan.model;
                            cfg.seed = seed;
                            run_report report = run_ga(inst, cfg);
                            rec.best_objective = report.best_objective;
                            rec.evals = report.evaluations;
                            if (plan.keep_traces) result.traces.push_back(std::move(report));
                            break;
                        }
                        case solver_kind::eamls: {
                            eamls_config cfg = plan.ea;
                            cfg.model = plan.model;
                            cfg.seed = seed;
                            run_report report = run_eamls(inst, cfg);
                            rec.best_objective = report.best_objective;
                            rec.evals = report.evaluations;
                            if (plan.keep_traces) result.traces.push_back(std::move(report));
                            break;
                        }
                        case solver_kind::oracle: {
                            const exact_result exact =
                                brute_force_optimum(inst, plan.model, plan.oracle_limit);
                            rec.best_objective = exact.objective;
                            rec.evals = exact.num_enumerated;
                            optimum = exact.objective;
                            break;
                        }
                    }
                    rec.time_ms =
                        std::chrono::duration<double, std::milli>(clock::now() - t0).count();
                } catch (const std::exception& e) {
                    result.failures.push_back("instance " + id + ", solver " + to_string(kind) +
                                              ", run " + std::to_string(run) + ": " + e.what());
                    continue;
                }
                result.records.push_back(std::move(rec));
            }
        }

        if (!std::isnan(optimum)) {
            result.oracle_optima.emplace_back(id, optimum);
            for (std::size_t k = first_record; k < result.records.size(); ++k) {
                auto& rec = result.records[k];
                rec.is_optimal =
                    rec.best_objective - optimum <= 1e-9 * std::fabs(optimum) ? 1 : 0;
            }
        }
    }
    return result;
}

namespace {

struct cell_stats {
    std::string model;
    std::vector<double> bests;   // run order
    std::vector<double> times_ms;
    std::vector<int> opt_flags;
};

summary_row make_row(const std::string& instance_id, const std::string& solver,
                     const cell_stats& cell, const cell_stats* reference) {
    summary_row row;
    row.instance_id = instance_id;
    row.solver = solver;
    row.model = cell.model;
    row.runs = cell.bests.size();
    row.aov = mean(cell.bests);
    row.mean_time_s = mean(cell.times_ms) / 1000.0;

    row.or_rate = k_nan;
    if (!cell.opt_flags.empty() &&
        std::none_of(cell.opt_flags.begin(), cell.opt_flags.end(), [](int f) { return f < 0; })) {
        double hits = 0;
        for (int f : cell.opt_flags) hits += f;
        row.or_rate = hits / static_cast<double>(cell.opt_flags.size());
    }

    row.gap_pct = k_nan;
    row.wilcoxon_p = k_nan;
    row.significant = -1;
    if (reference) {
        const double ref_aov = mean(reference->bests);
        row.gap_pct = (row.aov - ref_aov) / ref_aov * 100.0;
        if (reference->bests.size() == cell.bests.size()) {
            const auto test = wilcoxon_signed_rank(cell.bests, reference->bests);
            row.wilcoxon_p = test.p_value;
            row.significant = test.significant ? 1 : 0;
        }
    }
    return row;
}

} // namespace

std::vector<summary_row> summarize(std::span<const run_record> records,
                                   const std::string& reference_solver) {
    // (instance, solver) -> stats, preserving first-seen order
    std::vector<std::string> instance_order;
    std::vector<std::string> solver_order;
    std::map<std::pair<std::string, std::string>, cell_stats> cells;
    for (const auto& rec : records) {
        if (std::find(instance_order.begin(), instance_order.end(), rec.instance_id) ==
            instance_order.end()) {
            instance_order.push_back(rec.instance_id);
        }
        if (std::find(solver_order.begin(), solver_order.end(), rec.solver) ==
            solver_order.end()) {
            solver_order.push_back(rec.solver);
        }
        auto& cell = cells[{rec.instance_id, rec.solver}];
        cell.model = rec.model;
        cell.bests.push_back(rec.best_objective);
        cell.times_ms.push_back(rec.time_ms);
        cell.opt_flags.push_back(rec.is_optimal);
    }

    std::vector<summary_row> rows;
    for (const auto& inst_id : instance_order) {
        const auto ref_it = cells.find({inst_id, reference_solver});
        const cell_stats* ref = ref_it == cells.end() ? nullptr : &ref_it->second;
        for (const auto& solver : solver_order) {
            const auto it = cells.find({inst_id, solver});
            if (it == cells.end()) continue; // missing cell, left absent
            rows.push_back(make_row(inst_id, solver, it->second, ref));
        }
    }

    // Aggregate row per solver; the Wilcoxon pairs per-instance AOVs.
    for (const auto& solver : solver_order) {
        cell_stats all;
        std::vector<double> inst_aovs;
        std::vector<double> ref_aovs;
        for (const auto& inst_id : instance_order) {
            const auto it = cells.find({inst_id, solver});
            if (it == cells.end()) continue;
            const auto& cell = it->second;
            all.model = cell.model;
            all.bests.insert(all.bests.end(), cell.bests.begin(), cell.bests.end());
            all.times_ms.insert(all.times_ms.end(), cell.times_ms.begin(), cell.times_ms.end());
            all.opt_flags.insert(all.opt_flags.end(), cell.opt_flags.begin(),
                                 cell.opt_flags.end());
            const auto ref_it = cells.find({inst_id, reference_solver});
            if (ref_it != cells.end()) {
                inst_aovs.push_back(mean(cell.bests));
                ref_aovs.push_back(mean(ref_it->second.bests));
            }
        }
        if (all.bests.empty()) continue;
        summary_row row = make_row("ALL", solver, all, nullptr);
        if (!inst_aovs.empty()) {
            const double ref_aov = mean(ref_aovs);
            row.gap_pct = (mean(inst_aovs) - ref_aov) / ref_aov * 100.0;
            const auto test = wilcoxon_signed_rank(inst_aovs, ref_aovs);
            row.wilcoxon_p = test.p_value;
            row.significant = test.significant ? 1 : 0;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {
constexpr const char* k_raw_header =
    "instance_id,solver,model,run,seed,best_objective,time_ms,evals,is_optimal";
constexpr const char* k_summary_header =
    "instance_id,solver,model,runs,aov,or_rate,gap_pct,mean_time_s,wilcoxon_p,significant";
} // namespace

void write_raw_csv(std::ostream& out, std::span<const run_record> records) {
    out << k_raw_header << '\n';
    for (const auto& rec : records) {
        out << rec.instance_id << ',' << rec.solver << ',' << rec.model << ',' << rec.run << ','
            << rec.seed << ',' << fmt("%.17g", rec.best_objective) << ','
            << fmt("%.3f", rec.time_ms) << ',' << rec.evals << ',';
        if (rec.is_optimal >= 0) out << rec.is_optimal;
        out << '\n';
    }
}

std::vector<run_record> read_raw_csv(std::istream& in, const std::string& source_name) {
    std::string line;
    std::size_t line_no = 0;
    auto fail = [&](const std::string& message) -> void {
        throw parse_error(source_name, line_no, message);
    };

    if (!std::getline(in, line)) fail("empty file");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != k_raw_header) fail("unexpected header, expected '" + std::string(k_raw_header) + "'");

    std::vector<run_record> records;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::size_t pos = 0;
        while (true) {
            const std::size_t comma = line.find(',', pos);
            if (comma == std::string::npos) {
                fields.push_back(line.substr(pos));
                break;
            }
            fields.push_back(line.substr(pos, comma - pos));
            pos = comma + 1;
        }
        if (fields.size() != 9) fail("expected 9 fields, got " + std::to_string(fields.size()));
        run_record rec;
        rec.instance_id = fields[0];
        rec.solver = fields[1];
        rec.model = fields[2];
        try {
            rec.run = static_cast<std::uint32_t>(std::stoul(fields[3]));
            rec.seed = std::stoull(fields[4]);
            rec.best_objective = std::stod(fields[5]);
            rec.time_ms = std::stod(fields[6]);
            rec.evals = std::stoull(fields[7]);
            rec.is_optimal = fields[8].empty() ? -1 : std::stoi(fields[8]);
        } catch (const std::exception&) {
            fail("cannot parse numeric field");
        }
        records.push_back(std::move(rec));
    }
    return records;
}

namespace {

std::string csv_opt(double v, const char* spec) {
    return std::isnan(v) ? std::string{} : fmt(spec, v);
}

} // namespace

void write_summary_csv(std::ostream& out, std::span<const summary_row> rows) {
    out << k_summary_header << '\n';
    for (const auto& row : rows) {
        out << row.instance_id << ',' << row.solver << ',' << row.model << ',' << row.runs << ','
            << fmt("%.10g", row.aov) << ',' << csv_opt(row.or_rate, "%.4f") << ','
            << csv_opt(row.gap_pct, "%.4f") << ',' << fmt("%.3f", row.mean_time_s) << ','
            << csv_opt(row.wilcoxon_p, "%.6g") << ',';
        if (row.significant >= 0) out << row.significant;
        out << '\n';
    }
}

std::string report_to_json(const run_report& report, const std::string& instance_id,
                           std::size_t instance_n, bool include_trace) {
    nlohmann::ordered_json j;
    j["solver"] = report.solver;
    j["model"] = report.model;
    j["alpha"] = report.alpha;
    j["seed"] = report.seed;
    j["instance"] = {{"id", instance_id}, {"n", instance_n}};
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    for (const auto& [key, value] : report.params) params[key] = value;
    j["params"] = params;
    j["best"] = {{"genotype", report.best_genotype.to_string()},
                 {"objective", report.best_objective},
                 {"levels", report.levels_used},
                 {"evaluations", report.evaluations}};
    if (include_trace) {
        auto trace = nlohmann::ordered_json::array();
        for (const auto& e : report.trace) {
            nlohmann::ordered_json row;
            row["generation"] = e.generation;
            row["best"] = e.best_objective;
            row["mean"] = e.mean_objective;
            row["population_size"] = e.population_size;
            row["evaluations"] = e.evaluations;
            if (!std::isnan(e.l3)) row["l3"] = e.l3;
            trace.push_back(std::move(row));
        }
        j["trace"] = std::move(trace);
    }
    // Wall-clock durations are kept out of the deterministic sections.
    auto per_gen = nlohmann::ordered_json::array();
    for (const auto& e : report.trace) per_gen.push_back(e.elapsed_ms);
    j["timing"] = {{"total_ms", report.total_ms}, {"per_generation_ms", std::move(per_gen)}};
    return j.dump(2) + "\n";
}

} // namespace rflp
