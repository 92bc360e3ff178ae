#include "rflp/oracle.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rflp/errors.hpp"

namespace rflp {

namespace {

// Bit i of the code is X_i's digit with X_0 most significant.
std::uint64_t code_to_bits(std::uint64_t code, std::size_t n) {
    std::uint64_t bits = 0;
    for (std::size_t j = 0; j < n; ++j) {
        bits |= ((code >> (n - 1 - j)) & 1u) << j;
    }
    return bits;
}

void check_limit(const instance& inst, std::size_t limit) {
    if (limit > 62) throw std::invalid_argument("oracle: limit above 62 is not supported");
    if (inst.n > limit) {
        throw std::invalid_argument("oracle: instance has " + std::to_string(inst.n) +
                                    " nodes, above the enumeration limit of " +
                                    std::to_string(limit) +
                                    " (raise the limit explicitly to override)");
    }
    if (inst.n < 2) throw std::invalid_argument("oracle: instance needs at least two nodes");
}

struct best_cell {
    double objective;
    std::uint64_t code;

    bool better_than(const best_cell& other) const {
        if (objective != other.objective) return objective < other.objective;
        return code < other.code;
    }
};

} // namespace

exact_result brute_force_optimum_serial(const instance& inst, const model_config& config,
                                        std::size_t limit) {
    check_limit(inst, limit);
    config.validate();
    const evaluator ev(inst);
    const std::uint64_t space = std::uint64_t{1} << inst.n;
    const std::size_t want = config.fixed_m ? *config.fixed_m : 2;

    genotype scratch(inst.n);
    best_cell best{0.0, 0};
    bool have_best = false;
    std::uint64_t enumerated = 0;
    for (std::uint64_t code = 0; code < space; ++code) {
        if (std::popcount(code) < 2) continue;
        ++enumerated;
        if (static_cast<std::size_t>(std::popcount(code)) < want) continue;
        scratch.assign_bits(code_to_bits(code, inst.n));
        const best_cell cell{ev.objective(scratch, config), code};
        if (!have_best || cell.better_than(best)) {
            best = cell;
            have_best = true;
        }
    }
    if (!have_best) {
        throw feasibility_error("oracle: no genotype satisfies the allocation rule");
    }

    exact_result result;
    result.optimum = genotype(inst.n);
    result.optimum.assign_bits(code_to_bits(best.code, inst.n));
    result.objective = best.objective;
    result.num_enumerated = enumerated;
    return result;
}

exact_result brute_force_optimum(const instance& inst, const model_config& config,
                                 std::size_t limit) {
#ifndef _OPENMP
    return brute_force_optimum_serial(inst, config, limit);
#else
    check_limit(inst, limit);
    config.validate();
    const evaluator ev(inst);
    const std::uint64_t space = std::uint64_t{1} << inst.n;
    const std::size_t want = config.fixed_m ? *config.fixed_m : 2;

    best_cell best{0.0, 0};
    bool have_best = false;
    std::uint64_t enumerated = 0;

#pragma omp parallel
    {
        genotype scratch(inst.n);
        best_cell local{0.0, 0};
        bool have_local = false;
        std::uint64_t local_count = 0;
#pragma omp for schedule(static) nowait
        for (std::int64_t signed_code = 0; signed_code < static_cast<std::int64_t>(space);
             ++signed_code) {
            const auto code = static_cast<std::uint64_t>(signed_code);
            if (std::popcount(code) < 2) continue;
            ++local_count;
            if (static_cast<std::size_t>(std::popcount(code)) < want) continue;
            scratch.assign_bits(code_to_bits(code, inst.n));
            const best_cell cell{ev.objective(scratch, config), code};
            if (!have_local || cell.better_than(local)) {
                local = cell;
                have_local = true;
            }
        }
#pragma omp critical
        {
            enumerated += local_count;
            if (have_local && (!have_best || local.better_than(best))) {
                best = local;
                have_best = true;
            }
        }
    }
    if (!have_best) {
        throw feasibility_error("oracle: no genotype satisfies the allocation rule");
    }

    exact_result result;
    result.optimum = genotype(inst.n);
    result.optimum.assign_bits(code_to_bits(best.code, inst.n));
    result.objective = best.objective;
    result.num_enumerated = enumerated;
    return result;
#endif
}

double independent_evaluate(const genotype& g, const instance& inst, const model_config& config) {
    inst.validate();
    config.validate();
    const std::size_t selected_count = g.popcount();
    if (selected_count < 2) throw feasibility_error("independent_evaluate: infeasible genotype");
    const std::size_t m = config.levels_for(selected_count);
    if (m > selected_count) {
        throw feasibility_error("independent_evaluate: rule needs more sites than selected");
    }

    std::vector<std::size_t> selected;
    for (std::size_t j = 0; j < inst.n; ++j) {
        if (g.test(j)) selected.push_back(j);
    }

    const double p = inst.failure_prob;
    double transport = 0.0;
    std::vector<double> dist(selected.size());
    std::vector<std::size_t> site(selected.size());
    for (std::size_t ii = inst.n; ii-- > 0;) {
        if (inst.demands[ii] == 0) continue;
        for (std::size_t k = 0; k < selected.size(); ++k) {
            site[k] = selected[k];
            dist[k] = std::hypot(inst.coords[ii].x - inst.coords[site[k]].x,
                                 inst.coords[ii].y - inst.coords[site[k]].y);
        }
        // selection sort by (distance, site index)
        for (std::size_t a = 0; a + 1 < selected.size(); ++a) {
            std::size_t best = a;
            for (std::size_t b = a + 1; b < selected.size(); ++b) {
                if (dist[b] < dist[best] || (dist[b] == dist[best] && site[b] < site[best])) {
                    best = b;
                }
            }
            std::swap(dist[a], dist[best]);
            std::swap(site[a], site[best]);
        }
        double expected = 0.0;
        for (std::size_t r = m; r-- > 0;) {
            expected += dist[r] * std::pow(p, static_cast<double>(r)) * (1.0 - p);
        }
        transport += static_cast<double>(inst.demands[ii]) * expected;
    }

    double fixed = 0.0;
    for (std::size_t k = selected.size(); k-- > 0;) {
        fixed += static_cast<double>(inst.fixed_costs[selected[k]]);
    }
    return fixed + config.alpha * transport;
}

} // namespace rflp
