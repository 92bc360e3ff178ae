#ifndef RFLP_EAMLS_HPP
#define RFLP_EAMLS_HPP

#include <cstdint>
#include <functional>
#include <unordered_set>
#include <vector>

#include "rflp/core.hpp"
#include "rflp/evolve.hpp"
#include "rflp/report.hpp"

namespace rflp {

struct eamls_config {
    std::uint32_t generations = 10;
    std::size_t pop_size = 20;       // initial mu; grows by pop_step
    double mutation_rate = 0.1;
    std::size_t ls_count = 10;       // individuals expanded per local-search pass
    double l3_threshold = 0.8;       // beta
    std::size_t pop_step = 100;      // population growth when l3 exceeds beta
    std::uint64_t seed = 0;
    model_config model;

    void validate() const;
};

// Cross-generation memory of the local search. `searched` holds every
// genotype whose neighborhood has already been expanded; `all_neighbor_inds`
// accumulates every genotype the local search has ever produced. Both only
// grow over a run.
struct search_memory {
    std::unordered_set<genotype, genotype_hash> searched;
    std::unordered_set<genotype, genotype_hash> all_neighbor_inds;
};

// Test and instrumentation hooks. `on_neighborhood` fires once per expanded
// genotype with the raw one-bit flips and their repaired forms, in flip
// order and before deduplication.
struct eamls_hooks {
    std::function<void(const genotype& source, const std::vector<genotype>& flipped,
                       const std::vector<genotype>& repaired)>
        on_neighborhood;
};

// All distinct repaired one-bit flips of g, in flip order (first occurrence
// kept). At most g.size() genotypes.
std::vector<genotype> hamming_neighborhood(const genotype& g, const evaluator& ev);

// Memorable local search: walk pop + offspring best-objective-first, expand
// the Hamming-1 neighborhood of each genotype not yet in memory.searched
// (recording it there), and stop once ls_count new genotypes have been
// expanded. Returns the deduplicated, evaluated union of the neighborhoods.
population memorable_local_search(const population& pop, const population& offspring,
                                  search_memory& memory, std::size_t ls_count,
                                  const evaluator& ev, const model_config& model,
                                  const eamls_hooks* hooks = nullptr);

// Fraction of population slots whose genotype appears in all_neighbor_inds;
// duplicates in pop are counted per slot. Convergence indicator in [0, 1].
double l3_value(const population& pop,
                const std::unordered_set<genotype, genotype_hash>& all_neighbor_inds);

// The hybrid solver: mutation-only offspring, memorable local search,
// (mu+lambda) survival over the three pools, l3-driven population growth.
// Deterministic given the config seed.
run_report run_eamls(const instance& inst, const eamls_config& config,
                     const eamls_hooks* hooks = nullptr);

} // namespace rflp

#endif
