#include "rflp/evolve.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <stdexcept>

namespace rflp {

void ga_config::validate() const {
    if (generations < 1) throw std::invalid_argument("ga: generations must be at least 1");
    if (pop_size < 2) throw std::invalid_argument("ga: population size must be at least 2");
    if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) {
        throw std::invalid_argument("ga: crossover rate must lie in [0, 1]");
    }
    if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) {
        throw std::invalid_argument("ga: mutation rate must lie in [0, 1]");
    }
    model.validate();
}

std::vector<genotype> init_population(std::size_t mu, std::size_t length, xoshiro256pp& rng) {
    if (mu < 1) throw std::invalid_argument("init_population: mu must be at least 1");
    if (length < 2) throw std::invalid_argument("init_population: length must be at least 2");
    std::vector<genotype> pop;
    pop.reserve(mu);
    for (std::size_t k = 0; k < mu; ++k) {
        genotype g(length);
        for (std::size_t bit = 0; bit < length; bit += 64) {
            const std::uint64_t word = rng.next();
            const std::size_t upto = std::min<std::size_t>(64, length - bit);
            for (std::size_t b = 0; b < upto; ++b) {
                if ((word >> b) & 1u) g.set(bit + b);
            }
        }
        pop.push_back(std::move(g));
    }
    return pop;
}

genotype bitflip_mutation(const genotype& g, double rate, xoshiro256pp& rng, const evaluator& ev) {
    if (!(rate >= 0.0 && rate <= 1.0)) {
        throw std::invalid_argument("mutation: rate must lie in [0, 1]");
    }
    genotype out = g;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (rng.next_double() < rate) out.flip(i);
    }
    ev.repair_in_place(out);
    return out;
}

std::pair<genotype, genotype> one_point_crossover(const genotype& a, const genotype& b,
                                                  std::size_t cut) {
    if (a.size() != b.size()) throw std::invalid_argument("crossover: length mismatch");
    if (a.size() < 2) throw std::invalid_argument("crossover: genotypes shorter than two genes");
    if (cut < 1 || cut >= a.size()) throw std::invalid_argument("crossover: cut out of range");
    genotype c1 = a;
    genotype c2 = b;
    for (std::size_t i = cut; i < a.size(); ++i) {
        c1.set(i, b.test(i));
        c2.set(i, a.test(i));
    }
    return {std::move(c1), std::move(c2)};
}

std::pair<genotype, genotype> one_point_crossover(const genotype& a, const genotype& b,
                                                  double rate, xoshiro256pp& rng) {
    if (a.size() != b.size()) throw std::invalid_argument("crossover: length mismatch");
    if (rng.next_double() >= rate) return {a, b};
    const std::size_t cut = 1 + static_cast<std::size_t>(rng.next_below(a.size() - 1));
    return one_point_crossover(a, b, cut);
}

const individual& roulette_select(const population& pop, xoshiro256pp& rng) {
    if (pop.empty()) throw std::invalid_argument("roulette: empty population");
    double total = 0.0;
    for (const auto& ind : pop) total += ind.fitness;
    const double target = rng.next_double() * total;
    double acc = 0.0;
    for (const auto& ind : pop) {
        acc += ind.fitness;
        if (acc > target) return ind;
    }
    return pop.back(); // floating-point slack
}

population mu_plus_lambda_survival(const std::vector<const population*>& pools, std::size_t mu) {
    struct ref {
        double objective;
        std::uint32_t pool;
        std::uint32_t index;
    };
    std::vector<ref> refs;
    std::size_t total = 0;
    for (const auto* pool : pools) total += pool->size();
    if (total < mu) throw std::invalid_argument("survival: pools hold fewer than mu individuals");
    refs.reserve(total);
    for (std::uint32_t p = 0; p < pools.size(); ++p) {
        for (std::uint32_t k = 0; k < pools[p]->size(); ++k) {
            refs.push_back({(*pools[p])[k].objective, p, k});
        }
    }
    std::sort(refs.begin(), refs.end(), [](const ref& a, const ref& b) {
        if (a.objective != b.objective) return a.objective < b.objective;
        if (a.pool != b.pool) return a.pool < b.pool;
        return a.index < b.index;
    });
    population next;
    next.reserve(mu);
    for (std::size_t k = 0; k < mu; ++k) {
        next.push_back((*pools[refs[k].pool])[refs[k].index]);
    }
    return next;
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

run_report run_ga(const instance& inst, const ga_config& config) {
    config.validate();
    const evaluator ev(inst);
    xoshiro256pp rng(config.seed);
    const auto start = std::chrono::steady_clock::now();
    auto now_ms = [&] {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    };

    const std::size_t mu = config.pop_size;
    const std::size_t lambda = mu;

    auto genos = init_population(mu, inst.n, rng);
    for (auto& g : genos) ev.repair_in_place(g);
    population pop = evaluate_genotypes(std::move(genos), ev, config.model);
    std::uint64_t evals = mu;

    run_report report;
    report.solver = "ga";
    report.model = config.model.name();
    report.alpha = config.model.alpha;
    report.seed = config.seed;
    report.params = {
        {"generations", std::to_string(config.generations)},
        {"pop_size", std::to_string(config.pop_size)},
        {"crossover_rate", std::to_string(config.crossover_rate)},
        {"mutation_rate", std::to_string(config.mutation_rate)},
    };
    report.trace.reserve(config.generations);

    for (std::uint32_t g = 1; g <= config.generations; ++g) {
        std::vector<genotype> off;
        off.reserve(lambda + 1);
        while (off.size() < lambda) {
            const individual& p1 = roulette_select(pop, rng);
            const individual& p2 = roulette_select(pop, rng);
            auto [c1, c2] = one_point_crossover(p1.geno, p2.geno, config.crossover_rate, rng);
            off.push_back(bitflip_mutation(c1, config.mutation_rate, rng, ev));
            off.push_back(bitflip_mutation(c2, config.mutation_rate, rng, ev));
        }
        off.resize(lambda);
        population offspring = evaluate_genotypes(std::move(off), ev, config.model);
        evals += lambda;
        pop = mu_plus_lambda_survival({&pop, &offspring}, mu);

        trace_entry entry;
        entry.generation = g;
        entry.best_objective = pop.front().objective;
        entry.mean_objective = mean_objective(pop);
        entry.population_size = mu;
        entry.evaluations = evals;
        entry.elapsed_ms = now_ms();
        report.trace.push_back(entry);
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
