#ifndef RFLP_REPORT_HPP
#define RFLP_REPORT_HPP

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "rflp/genotype.hpp"

namespace rflp {

// One row per generation. `l3` is NaN for solvers that do not track it.
// `elapsed_ms` is the only non-deterministic field; determinism checks and
// comparisons must ignore it.
struct trace_entry {
    std::uint32_t generation = 0;
    double best_objective = 0.0;
    double mean_objective = 0.0;
    std::size_t population_size = 0; // the mu in effect for this generation
    std::uint64_t evaluations = 0;   // cumulative fitness evaluations
    double l3 = std::numeric_limits<double>::quiet_NaN();
    double elapsed_ms = 0.0;
};

struct run_report {
    std::string solver;
    std::string model;
    double alpha = 1.0;
    std::uint64_t seed = 0;
    genotype best_genotype;
    double best_objective = 0.0;
    std::size_t levels_used = 0;     // m of the best solution
    std::uint64_t evaluations = 0;   // total fitness evaluations
    double total_ms = 0.0;
    std::vector<trace_entry> trace;
    std::vector<std::pair<std::string, std::string>> params; // config echo
};

} // namespace rflp

#endif
