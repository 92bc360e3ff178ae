#include "rflp/eamls.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

namespace rflp {

void eamls_config::validate() const {
    if (generations < 1) throw std::invalid_argument("eamls: generations must be at least 1");
    if (pop_size < 2) throw std::invalid_argument("eamls: population size must be at least 2");
    if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) {
        throw std::invalid_argument("eamls: mutation rate must lie in [0, 1]");
    }
    if (ls_count < 1) throw std::invalid_argument("eamls: ls_count must be at least 1");
    if (!(l3_threshold >= 0.0 && l3_threshold <= 1.0)) {
        throw std::invalid_argument("eamls: l3 threshold must lie in [0, 1]");
    }
    model.validate();
}

std::vector<genotype> hamming_neighborhood(const genotype& g, const evaluator& ev) {
    if (g.size() < 2) throw std::invalid_argument("neighborhood: genotype shorter than two sites");
    std::vector<genotype> out;
    out.reserve(g.size());
    std::unordered_set<genotype, genotype_hash> seen;
    for (std::size_t bit = 0; bit < g.size(); ++bit) {
        genotype nb = g;
        nb.flip(bit);
        ev.repair_in_place(nb);
        if (seen.insert(nb).second) out.push_back(std::move(nb));
    }
    return out;
}

population memorable_local_search(const population& pop, const population& offspring,
                                  search_memory& memory, std::size_t ls_count,
                                  const evaluator& ev, const model_config& model,
                                  const eamls_hooks* hooks) {
    if (ls_count < 1) throw std::invalid_argument("mls: ls_count must be at least 1");

    // Best first; stable order keeps pop ahead of offspring on equal objective.
    std::vector<const individual*> pool;
    pool.reserve(pop.size() + offspring.size());
    for (const auto& ind : pop) pool.push_back(&ind);
    for (const auto& ind : offspring) pool.push_back(&ind);
    std::stable_sort(pool.begin(), pool.end(), [](const individual* a, const individual* b) {
        return a->objective < b->objective;
    });

    std::vector<genotype> collected;
    std::unordered_set<genotype, genotype_hash> collected_set;
    std::size_t expanded = 0;
    for (const individual* ind : pool) {
        if (expanded == ls_count) break;
        if (memory.searched.contains(ind->geno)) continue;
        memory.searched.insert(ind->geno);
        ++expanded;

        if (hooks && hooks->on_neighborhood) {
            std::vector<genotype> flipped;
            std::vector<genotype> repaired;
            flipped.reserve(ind->geno.size());
            repaired.reserve(ind->geno.size());
            for (std::size_t bit = 0; bit < ind->geno.size(); ++bit) {
                genotype nb = ind->geno;
                nb.flip(bit);
                flipped.push_back(nb);
                ev.repair_in_place(nb);
                repaired.push_back(std::move(nb));
            }
            hooks->on_neighborhood(ind->geno, flipped, repaired);
        }

        for (auto& nb : hamming_neighborhood(ind->geno, ev)) {
            if (collected_set.insert(nb).second) collected.push_back(std::move(nb));
        }
    }

    std::vector<double> objectives(collected.size());
    ev.evaluate_batch(collected, model, objectives);
    population result;
    result.reserve(collected.size());
    for (std::size_t k = 0; k < collected.size(); ++k) {
        result.push_back({std::move(collected[k]), objectives[k], 1.0 / objectives[k]});
    }
    return result;
}

double l3_value(const population& pop,
                const std::unordered_set<genotype, genotype_hash>& all_neighbor_inds) {
    if (pop.empty()) throw std::invalid_argument("l3: empty population");
    std::size_t hits = 0;
    for (const auto& ind : pop) {
        if (all_neighbor_inds.contains(ind.geno)) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(pop.size());
}

namespace {

population evaluate_genotypes(std::vector<genotype>&& genos, const evaluator& ev,
                              const model_config& model) {
    std::vector<double> objectives(genos.size());
    ev.evaluate_batch(genos, model, objectives);
    population pop;
    pop.reserve(genos.size());
    for (std::size_t k = 0; k < genos.size(); ++k) {
        pop.push_back({std::move(genos[k]), objectives[k], 1.0 / objectives[k]});
    }
    return pop;
}

double mean_objective(const population& pop) {
    double sum = 0.0;
    for (const auto& ind : pop) sum += ind.objective;
    return sum / static_cast<double>(pop.size());
}

} // namespace

run_report run_eamls(const instance& inst, const eamls_config& config, const eamls_hooks* hooks) {
    config.validate();
    const evaluator ev(inst);
    xoshiro256pp rng(config.seed);
    const auto start = std::chrono::steady_clock::now();
    auto now_ms = [&] {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    };

    auto genos = init_population(config.pop_size, inst.n, rng);
    for (auto& g : genos) ev.repair_in_place(g);
    population pop = evaluate_genotypes(std::move(genos), ev, config.model);
    std::uint64_t evals = config.pop_size;

    search_memory memory;
    std::size_t mu = config.pop_size;

    run_report report;
    report.solver = "eamls";
    report.model = config.model.name();
    report.alpha = config.model.alpha;
    report.seed = config.seed;
    report.params = {
        {"generations", std::to_string(config.generations)},
        {"pop_size", std::to_string(config.pop_size)},
        {"mutation_rate", std::to_string(config.mutation_rate)},
        {"ls_count", std::to_string(config.ls_count)},
        {"l3_threshold", std::to_string(config.l3_threshold)},
        {"pop_step", std::to_string(config.pop_step)},
    };
    report.trace.reserve(config.generations);

    for (std::uint32_t g = 1; g <= config.generations; ++g) {
        std::vector<genotype> mutated;
        mutated.reserve(pop.size());
        for (const auto& ind : pop) {
            mutated.push_back(bitflip_mutation(ind.geno, config.mutation_rate, rng, ev));
        }
        population offspring = evaluate_genotypes(std::move(mutated), ev, config.model);
        evals += offspring.size();

        population ls = memorable_local_search(pop, offspring, memory, config.ls_count, ev,
                                               config.model, hooks);
        evals += ls.size();

        // The pool can run short of mu right after a growth step; keep
        // everyone in that case.
        const std::size_t pool_total = pop.size() + offspring.size() + ls.size();
        pop = mu_plus_lambda_survival({&pop, &offspring, &ls}, std::min(mu, pool_total));

        const double l3 = l3_value(pop, memory.all_neighbor_inds);

        trace_entry entry;
        entry.generation = g;
        entry.best_objective = pop.front().objective;
        entry.mean_objective = mean_objective(pop);
        entry.population_size = mu;
        entry.evaluations = evals;
        entry.l3 = l3;
        entry.elapsed_ms = now_ms();
        report.trace.push_back(entry);

        if (l3 > config.l3_threshold) mu += config.pop_step;
        for (const auto& ind : ls) memory.all_neighbor_inds.insert(ind.geno);
    }

    const individual& best = pop.front();
    report.best_genotype = best.geno;
    report.best_objective = best.objective;
    report.levels_used = config.model.levels_for(best.geno.popcount());
    report.evaluations = evals;
    report.total_ms = now_ms();
    return report;
}

} // namespace rflp
