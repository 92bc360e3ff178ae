#ifndef RFLP_BENCH_HPP
#define RFLP_BENCH_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rflp/eamls.hpp"
#include "rflp/evolve.hpp"
#include "rflp/instance.hpp"
#include "rflp/report.hpp"

namespace rflp {

enum class solver_kind { ga, eamls, oracle };

std::string to_string(solver_kind kind);
solver_kind solver_from_string(const std::string& name);

// Stable ids used in seed derivation; adding a solver never shifts the seeds
// of existing ones.
std::uint64_t solver_seed_id(solver_kind kind);

// Seed of one (instance, solver, run) cell.
std::uint64_t cell_seed(std::uint64_t base_seed, std::size_t instance_index, solver_kind solver,
                        std::uint32_t run);

// Generation count and population size per instance scale. The brackets are
// n <= 10, n <= 50, n <= 100 and above.
void apply_scale_defaults(std::size_t n, ga_config& ga);
void apply_scale_defaults(std::size_t n, eamls_config& ea);

struct named_instance {
    std::string id;
    instance inst;
};

struct bench_plan {
    std::vector<named_instance> instances;
    std::vector<solver_kind> solvers;
    model_config model;
    ga_config ga;     // template; seed is overwritten per cell
    eamls_config ea;  // template; seed is overwritten per cell
    std::uint32_t runs = 30;
    std::uint64_t base_seed = 1;
    std::size_t oracle_limit = 20;
    bool keep_traces = false;
};

// One row of the raw results file.
struct run_record {
    std::string instance_id;
    std::string solver;
    std::string model;
    std::uint32_t run = 0;
    std::uint64_t seed = 0;
    double best_objective = 0.0;
    double time_ms = 0.0;
    std::uint64_t evals = 0;
    int is_optimal = -1; // -1 when no exact optimum is available
};

struct bench_result {
    std::vector<run_record> records;
    std::vector<run_report> traces; // populated when plan.keep_traces
    std::vector<std::pair<std::string, double>> oracle_optima;
    std::vector<std::string> failures; // per-cell failure notes
};

// Executes every (instance, solver, run) cell sequentially with derived
// seeds. The oracle runs once per instance; when it ran, every record of
// that instance gets its is_optimal flag (objective within 1e-9 relative of
// the optimum).
bench_result run_bench(const bench_plan& plan);

// Per (instance, solver) aggregate plus one "ALL" row per solver. Gap and
// the Wilcoxon test compare against `reference_solver` (per-run pairing per
// instance; the ALL row pairs per-instance AOVs). Unavailable statistics are
// NaN / -1.
struct summary_row {
    std::string instance_id;
    std::string solver;
    std::string model;
    std::size_t runs = 0;
    double aov = 0.0;
    double or_rate = 0.0;   // NaN when no oracle optimum was available
    double gap_pct = 0.0;   // NaN when the reference is absent
    double mean_time_s = 0.0;
    double wilcoxon_p = 0.0; // NaN when not applicable
    int significant = -1;    // -1 not applicable, else 0/1 at the 0.05 level
};

std::vector<summary_row> summarize(std::span<const run_record> records,
                                   const std::string& reference_solver);

// Raw results CSV. Columns:
//   instance_id,solver,model,run,seed,best_objective,time_ms,evals,is_optimal
// Everything except time_ms is reproduced exactly by a rerun with the same
// plan and base seed.
void write_raw_csv(std::ostream& out, std::span<const run_record> records);
std::vector<run_record> read_raw_csv(std::istream& in, const std::string& source_name);

// Summary CSV. Columns:
//   instance_id,solver,model,runs,aov,or_rate,gap_pct,mean_time_s,wilcoxon_p,significant
void write_summary_csv(std::ostream& out, std::span<const summary_row> rows);

// Structured single-run report. Deterministic fields live under "trace" and
// "best"; wall-clock durations are isolated under "timing".
std::string report_to_json(const run_report& report, const std::string& instance_id,
                           std::size_t instance_n, bool include_trace = true);

} // namespace rflp

#endif
