#ifndef RFLP_EVOLVE_HPP
#define RFLP_EVOLVE_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "rflp/core.hpp"
#include "rflp/report.hpp"
#include "rflp/rng.hpp"

namespace rflp {

struct individual {
    genotype geno;
    double objective = 0.0;
    double fitness = 0.0; // 1 / objective
};

using population = std::vector<individual>;

struct ga_config {
    std::uint32_t generations = 60;
    std::size_t pop_size = 30;
    double crossover_rate = 0.9;
    double mutation_rate = 0.1;
    std::uint64_t seed = 0;
    model_config model;

    void validate() const;
};

// mu random genotypes, every gene an independent fair coin flip. Callers
// repair before evaluating. Consumes ceil(length/64) raw words per genotype.
std::vector<genotype> init_population(std::size_t mu, std::size_t length, xoshiro256pp& rng);

// Flips every bit independently with probability `rate`, then repairs.
// Always consumes exactly `length` uniform draws so downstream draws stay
// aligned whatever the outcome.
genotype bitflip_mutation(const genotype& g, double rate, xoshiro256pp& rng, const evaluator& ev);

// Deterministic splice at `cut` in [1, length-1]: children are
// prefix(a,cut)+suffix(b) and prefix(b,cut)+suffix(a).
std::pair<genotype, genotype> one_point_crossover(const genotype& a, const genotype& b,
                                                  std::size_t cut);

// Draws whether to cross (probability `rate`) and, if so, a uniform cut
// point; otherwise returns copies of the parents.
std::pair<genotype, genotype> one_point_crossover(const genotype& a, const genotype& b,
                                                  double rate, xoshiro256pp& rng);

// Fitness-proportional parent selection. One uniform draw per call.
const individual& roulette_select(const population& pop, xoshiro256pp& rng);

// Keeps the mu smallest-objective individuals over all pools, ties broken by
// earlier pool then earlier index. The result is sorted best-first. Throws
// when the pools hold fewer than mu individuals.
population mu_plus_lambda_survival(const std::vector<const population*>& pools, std::size_t mu);

// Generational GA baseline: roulette parents, one-point crossover, bit-flip
// mutation, repair, (mu+lambda) survival with lambda = mu. Fully determined
// by the config seed.
run_report run_ga(const instance& inst, const ga_config& config);

} // namespace rflp

#endif
