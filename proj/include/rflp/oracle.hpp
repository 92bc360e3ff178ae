#ifndef RFLP_ORACLE_HPP
#define RFLP_ORACLE_HPP

#include <cstdint>

#include "rflp/core.hpp"

namespace rflp {

struct exact_result {
    genotype optimum;
    double objective = 0.0;
    std::uint64_t num_enumerated = 0; // feasible genotypes examined: 2^n - n - 1
};

// Exhaustive exact solver. Enumerates every genotype with at least two
// selected sites in counting order of the bit string (bit 0 read as the most
// significant digit, so counting order equals lexicographic order) and keeps
// the minimum objective; ties go to the lexicographically smallest genotype.
// Refuses instances larger than `limit` nodes.
//
// The OpenMP build partitions the enumeration range across threads and merges
// with the same (objective, genotype) ordering, so both entry points return
// identical results. The serial one is the reference kept for testing.
exact_result brute_force_optimum(const instance& inst, const model_config& config,
                                 std::size_t limit = 20);
exact_result brute_force_optimum_serial(const instance& inst, const model_config& config,
                                        std::size_t limit = 20);

// Recomputes the objective by a deliberately naive route: selection-sort of
// the selected sites per customer (distances via std::hypot), level terms via
// std::pow summed highest level first, customers walked in reverse. Testing
// oracle for the optimized evaluator; agreement within 1e-9 relative.
double independent_evaluate(const genotype& g, const instance& inst, const model_config& config);

} // namespace rflp

#endif
