#include "rflp/core.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "rflp/errors.hpp"

namespace rflp {

void instance::validate() const {
    if (n == 0) throw std::invalid_argument("instance: n must be positive");
    if (coords.size() != n || demands.size() != n || fixed_costs.size() != n) {
        throw std::invalid_argument("instance: field lengths must all equal n");
    }
    for (std::size_t i = 0; i < n; ++i) {
        const auto& c = coords[i];
        if (!(c.x >= 0.0 && c.x <= 1.0 && c.y >= 0.0 && c.y <= 1.0)) {
            throw std::invalid_argument("instance: coordinate " + std::to_string(i) +
                                        " outside the unit square");
        }
        if (demands[i] < 0) {
            throw std::invalid_argument("instance: demand " + std::to_string(i) + " is negative");
        }
        if (fixed_costs[i] <= 0) {
            throw std::invalid_argument("instance: fixed cost " + std::to_string(i) +
                                        " is not positive");
        }
    }
    if (!(failure_prob >= 0.0 && failure_prob < 1.0)) {
        throw std::invalid_argument("instance: failure probability must lie in [0, 1)");
    }
}

void model_config::validate() const {
    if (!(alpha >= 0.0)) throw std::invalid_argument("model: alpha must be non-negative");
    if (fixed_m && *fixed_m < 2) {
        throw std::invalid_argument("model: fixed allocation count must be at least 2");
    }
}

double distance(const instance& inst, std::size_t i, std::size_t j) {
    if (i >= inst.n || j >= inst.n) throw std::out_of_range("distance: node index out of range");
    const double dx = inst.coords[i].x - inst.coords[j].x;
    const double dy = inst.coords[i].y - inst.coords[j].y;
    return std::sqrt(dx * dx + dy * dy);
}

nearest_order_table nearest_order(const instance& inst) {
    const std::size_t n = inst.n;
    std::vector<std::uint32_t> order(n * n);
    std::vector<double> row_dist(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto* row = order.data() + i * n;
        std::iota(row, row + n, std::uint32_t{0});
        for (std::size_t j = 0; j < n; ++j) row_dist[j] = distance(inst, i, j);
        std::sort(row, row + n, [&](std::uint32_t a, std::uint32_t b) {
            if (row_dist[a] != row_dist[b]) return row_dist[a] < row_dist[b];
            return a < b;
        });
    }
    return {n, std::move(order)};
}

bool is_feasible(const genotype& g) {
    return g.popcount() >= 2;
}

genotype repair(const genotype& g, const instance& inst) {
    if (is_feasible(g)) return g;
    if (g.size() < 2) throw std::invalid_argument("repair: genotype shorter than two sites");
    std::vector<std::uint32_t> order(g.size());
    std::iota(order.begin(), order.end(), std::uint32_t{0});
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (inst.fixed_costs[a] != inst.fixed_costs[b]) {
            return inst.fixed_costs[a] < inst.fixed_costs[b];
        }
        return a < b;
    });
    genotype out = g;
    std::size_t selected = out.popcount();
    for (std::uint32_t j : order) {
        if (selected >= 2) break;
        if (!out.test(j)) {
            out.set(j);
            ++selected;
        }
    }
    return out;
}

namespace {

std::size_t checked_levels(const genotype& g, const model_config& config) {
    const std::size_t selected = g.popcount();
    if (selected < 2) {
        throw feasibility_error("genotype selects fewer than two sites");
    }
    const std::size_t m = config.levels_for(selected);
    if (m > selected) {
        throw feasibility_error("allocation rule needs " + std::to_string(m) +
                                " sites but only " + std::to_string(selected) + " are selected");
    }
    return m;
}

} // namespace

allocation_table decode_allocation(const genotype& g, const nearest_order_table& order,
                                   const model_config& config) {
    const std::size_t m = checked_levels(g, config);
    const std::size_t n = order.size();
    allocation_table table;
    table.levels = m;
    table.assign.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto& row = table.assign[i];
        row.reserve(m);
        for (std::uint32_t j : order.row(i)) {
            if (!g.test(j)) continue;
            row.push_back(j);
            if (row.size() == m) break;
        }
    }
    return table;
}

bool verify_allocation(const allocation_table& alloc, const genotype& g, const instance& inst) {
    if (alloc.assign.size() != inst.n) return false;
    std::vector<char> seen(inst.n);
    for (std::size_t i = 0; i < inst.n; ++i) {
        const auto& row = alloc.assign[i];
        if (row.size() != alloc.levels) return false;
        std::fill(seen.begin(), seen.end(), 0);
        double prev = -1.0;
        for (std::uint32_t j : row) {
            if (j >= inst.n) return false;
            if (!g.test(j)) return false;    // only selected sites may serve
            if (seen[j]) return false;       // one level per site and customer
            seen[j] = 1;
            const double d = distance(inst, i, j);
            if (d < prev) return false;      // levels follow ascending distance
            prev = d;
        }
    }
    return true;
}

evaluated_solution evaluate(const genotype& g, const instance& inst, const model_config& config) {
    const evaluator ev(inst);
    evaluated_solution sol;
    sol.geno = g;
    sol.objective = ev.objective(g, config);
    sol.levels = config.levels_for(g.popcount());
    return sol;
}

evaluator::evaluator(const instance& inst) : inst_(&inst) {
    inst.validate();
    const std::size_t n = inst.n;
    dist_.resize(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            dist_[i * n + j] = distance(inst, i, j);
        }
    }
    order_ = nearest_order(inst);
    repair_order_.resize(n);
    std::iota(repair_order_.begin(), repair_order_.end(), std::uint32_t{0});
    std::sort(repair_order_.begin(), repair_order_.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (inst.fixed_costs[a] != inst.fixed_costs[b]) {
            return inst.fixed_costs[a] < inst.fixed_costs[b];
        }
        return a < b;
    });
}

double evaluator::objective(const genotype& g, const model_config& config) const {
    const std::size_t m = checked_levels(g, config);
    const std::size_t n = inst_->n;
    const double p = inst_->failure_prob;

    std::int64_t fixed = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (g.test(j)) fixed += inst_->fixed_costs[j];
    }

    double transport = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::int64_t h = inst_->demands[i];
        if (h == 0) continue;
        const double* drow = dist_.data() + i * n;
        double expected = 0.0;
        double weight = 1.0 - p; // level-r service weight p^r (1-p)
        std::size_t found = 0;
        for (std::uint32_t j : order_.row(i)) {
            if (!g.test(j)) continue;
            expected += drow[j] * weight;
            weight *= p;
            if (++found == m) break;
        }
        transport += static_cast<double>(h) * expected;
    }
    return static_cast<double>(fixed) + config.alpha * transport;
}

void evaluator::repair_in_place(genotype& g) const {
    std::size_t selected = g.popcount();
    if (selected >= 2) return;
    if (g.size() < 2) throw std::invalid_argument("repair: genotype shorter than two sites");
    for (std::uint32_t j : repair_order_) {
        if (!g.test(j)) {
            g.set(j);
            if (++selected >= 2) break;
        }
    }
}

void evaluator::evaluate_batch_serial(std::span<const genotype> batch, const model_config& config,
                                      std::span<double> out) const {
    for (std::size_t i = 0; i < batch.size(); ++i) {
        out[i] = objective(batch[i], config);
    }
}

void evaluator::evaluate_batch(std::span<const genotype> batch, const model_config& config,
                               std::span<double> out) const {
    std::atomic<bool> infeasible{false};
    const auto count = static_cast<std::int64_t>(batch.size());
#pragma omp parallel for schedule(dynamic, 16) if (count >= 32)
    for (std::int64_t i = 0; i < count; ++i) {
        try {
            out[static_cast<std::size_t>(i)] = objective(batch[static_cast<std::size_t>(i)], config);
        } catch (const feasibility_error&) {
            infeasible.store(true, std::memory_order_relaxed);
        }
    }
    if (infeasible.load()) {
        throw feasibility_error("evaluate_batch: batch contains an infeasible genotype");
    }
}

} // namespace rflp
