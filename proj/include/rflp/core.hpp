#ifndef RFLP_CORE_HPP
#define RFLP_CORE_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "rflp/genotype.hpp"
#include "rflp/instance.hpp"

namespace rflp {

// Euclidean distance between nodes i and j; realizes the per-unit shipping
// cost c_ij. Throws std::out_of_range on bad indices.
double distance(const instance& inst, std::size_t i, std::size_t j);

// Per-customer permutation of all site indices by ascending distance, ties by
// ascending site index. Row i is the full service preference order of
// customer i. Built once per instance and shared read-only by all solvers.
class nearest_order_table {
public:
    nearest_order_table() = default;
    nearest_order_table(std::size_t n, std::vector<std::uint32_t> order)
        : n_(n), order_(std::move(order)) {}

    std::size_t size() const { return n_; }

    std::span<const std::uint32_t> row(std::size_t i) const {
        return {order_.data() + i * n_, n_};
    }

private:
    std::size_t n_ = 0;
    std::vector<std::uint32_t> order_;
};

nearest_order_table nearest_order(const instance& inst);

// Decoded allocation decision: assign[i][r] is the site serving customer i at
// level r, i.e. the one that steps in once the r closer sites have all failed.
struct allocation_table {
    std::size_t levels = 0; // m
    std::vector<std::vector<std::uint32_t>> assign;
};

struct evaluated_solution {
    genotype geno;
    double objective = 0.0;
    std::size_t levels = 0;
};

// True iff at least two sites are selected.
bool is_feasible(const genotype& g);

// Flips zero genes to one in ascending fixed-cost order (ties by site index)
// until at least two sites are selected. Feasible inputs pass through
// unchanged; selected sites are never dropped.
genotype repair(const genotype& g, const instance& inst);

// Assigns each customer its m nearest selected sites in ascending distance
// order, with m from the model's allocation rule. Throws feasibility_error
// when too few sites are selected for the rule.
allocation_table decode_allocation(const genotype& g, const nearest_order_table& order,
                                   const model_config& config);

// Checks every allocation invariant against the genotype: one site per level,
// only selected sites, no site twice for one customer, rows in non-decreasing
// distance order.
bool verify_allocation(const allocation_table& alloc, const genotype& g, const instance& inst);

// Total cost of a location decision: fixed costs of the selected sites plus
// the expected transportation cost over failure levels,
//   sum_j f_j X_j + alpha * sum_i h_i * sum_r c(i, assign[i][r]) p^r (1-p).
// Convenience entry that builds the preference table on the fly; solvers use
// the evaluator below.
evaluated_solution evaluate(const genotype& g, const instance& inst, const model_config& config);

// Precomputed evaluation context for one instance: distance matrix, nearest
// order rows and the repair order. Immutable after construction, safe to
// share across threads.
class evaluator {
public:
    explicit evaluator(const instance& inst);

    const instance& inst() const { return *inst_; }
    const nearest_order_table& order() const { return order_; }

    double objective(const genotype& g, const model_config& config) const;

    allocation_table decode(const genotype& g, const model_config& config) const {
        return decode_allocation(g, order_, config);
    }

    void repair_in_place(genotype& g) const;

    // Objective for a batch of genotypes, results written in input order so
    // the output is independent of thread count. The OpenMP build evaluates
    // genotypes in parallel; evaluate_batch_serial is the reference kernel
    // kept for testing and benchmarking.
    void evaluate_batch(std::span<const genotype> batch, const model_config& config,
                        std::span<double> out) const;
    void evaluate_batch_serial(std::span<const genotype> batch, const model_config& config,
                               std::span<double> out) const;

    double site_distance(std::size_t customer, std::size_t site) const {
        return dist_[customer * inst_->n + site];
    }

private:
    const instance* inst_;
    std::vector<double> dist_; // row-major n*n
    nearest_order_table order_;
    std::vector<std::uint32_t> repair_order_; // sites by (fixed cost, index)
};

} // namespace rflp

#endif
