#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "rflp/evolve.hpp"
#include "rflp/oracle.hpp"
#include "test_util.hpp"

using namespace rflp;

TEST_SUITE_BEGIN("evolve");

namespace {

population make_population(const std::vector<double>& objectives) {
    population pop;
    for (double obj : objectives) {
        pop.push_back({genotype::from_string("11"), obj, 1.0 / obj});
    }
    return pop;
}

} // namespace

TEST_CASE("init_population: size, fair coin, determinism") {
    xoshiro256pp rng(1);
    auto pop = init_population(20, 10, rng);
    CHECK(pop.size() == 20);
    for (const auto& g : pop) CHECK(g.size() == 10);

    // empirical mean bit value before repair
    xoshiro256pp rng2(2);
    auto big = init_population(100, 1000, rng2);
    std::size_t ones = 0;
    for (const auto& g : big) ones += g.popcount();
    const double mean_bit = static_cast<double>(ones) / (100.0 * 1000.0);
    CHECK(mean_bit == doctest::Approx(0.5).epsilon(0.02));

    xoshiro256pp a(77);
    xoshiro256pp b(77);
    CHECK(init_population(5, 64, a) == init_population(5, 64, b));
}

TEST_CASE("init_population feasible after repair") {
    const instance inst = rflp_test::random_instance(10, 3);
    const evaluator ev(inst);
    xoshiro256pp rng(4);
    auto pop = init_population(20, inst.n, rng);
    for (auto& g : pop) {
        ev.repair_in_place(g);
        CHECK(is_feasible(g));
    }
}

TEST_CASE("bitflip_mutation edge rates") {
    const instance inst = rflp_test::random_instance(12, 9);
    const evaluator ev(inst);
    xoshiro256pp rng(5);
    const genotype g = rflp_test::genotype_with_popcount(inst.n, 5, rng);

    CHECK(bitflip_mutation(g, 0.0, rng, ev) == g);

    // full flip complements; popcount 12-5=7, no repair kicks in
    const genotype flipped = bitflip_mutation(g, 1.0, rng, ev);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(flipped.test(i) == !g.test(i));
}

TEST_CASE("bitflip_mutation flips a binomial number of genes") {
    const std::size_t length = 1000;
    instance big;
    big.n = length;
    big.coords.assign(length, {0.5, 0.5});
    big.demands.assign(length, 1);
    big.fixed_costs.assign(length, 500);
    big.failure_prob = 0.0;
    const evaluator ev(big);

    genotype all_ones(length);
    for (std::size_t i = 0; i < length; ++i) all_ones.set(i);

    xoshiro256pp rng(6);
    double total_flips = 0.0;
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
        const genotype mutated = bitflip_mutation(all_ones, 0.1, rng, ev);
        total_flips += static_cast<double>(hamming_distance(all_ones, mutated));
    }
    CHECK(total_flips / trials == doctest::Approx(100.0).epsilon(0.1));
}

TEST_CASE("one_point_crossover splices at the cut") {
    const genotype a = genotype::from_string("0000");
    const genotype b = genotype::from_string("1111");
    const auto [c1, c2] = one_point_crossover(a, b, 2);
    CHECK(c1 == genotype::from_string("0011"));
    CHECK(c2 == genotype::from_string("1100"));

    CHECK_THROWS_AS(one_point_crossover(a, genotype::from_string("11"), 1),
                    std::invalid_argument);
}

TEST_CASE("one_point_crossover conserves bits and fixes identical parents") {
    xoshiro256pp rng(7);
    for (int round = 0; round < 30; ++round) {
        const genotype a = rflp_test::random_feasible_genotype(16, rng);
        const genotype b = rflp_test::random_feasible_genotype(16, rng);
        const auto [c1, c2] = one_point_crossover(a, b, 0.9, rng);
        CHECK(c1.popcount() + c2.popcount() == a.popcount() + b.popcount());

        const auto [s1, s2] = one_point_crossover(a, a, 1.0, rng);
        CHECK(s1 == a);
        CHECK(s2 == a);
    }
}

TEST_CASE("roulette_select is fitness-proportional") {
    xoshiro256pp rng(8);

    SUBCASE("singleton") {
        const population pop = make_population({4.0});
        for (int i = 0; i < 10; ++i) CHECK(&roulette_select(pop, rng) == &pop[0]);
    }
    SUBCASE("equal fitness splits evenly") {
        const population pop = make_population({2.0, 2.0});
        int first = 0;
        const int draws = 10000;
        for (int i = 0; i < draws; ++i) {
            if (&roulette_select(pop, rng) == &pop[0]) ++first;
        }
        CHECK(std::fabs(first / static_cast<double>(draws) - 0.5) < 0.03);
    }
    SUBCASE("3:1 fitness ratio") {
        population pop = make_population({1.0, 1.0});
        pop[0].fitness = 3.0;
        pop[1].fitness = 1.0;
        int first = 0;
        const int draws = 10000;
        for (int i = 0; i < draws; ++i) {
            if (&roulette_select(pop, rng) == &pop[0]) ++first;
        }
        CHECK(std::fabs(first / static_cast<double>(draws) - 0.75) < 0.03);
    }
    SUBCASE("empty population is a usage error") {
        const population pop;
        CHECK_THROWS_AS(roulette_select(pop, rng), std::invalid_argument);
    }
}

TEST_CASE("mu_plus_lambda_survival keeps the best and breaks ties by pool") {
    const population a = make_population({5.0, 3.0});
    const population b = make_population({9.0, 1.0});

    SUBCASE("top-k across pools") {
        const population next = mu_plus_lambda_survival({&a, &b}, 2);
        CHECK(next[0].objective == 1.0);
        CHECK(next[1].objective == 3.0);
    }
    SUBCASE("mu equal to pool size keeps everyone") {
        const population next = mu_plus_lambda_survival({&a, &b}, 4);
        CHECK(next.size() == 4);
        CHECK(next.front().objective == 1.0);
        CHECK(next.back().objective == 9.0);
    }
    SUBCASE("ties prefer the earlier pool, then the earlier index") {
        population x = make_population({2.0, 2.0});
        x[0].geno = genotype::from_string("1100");
        x[1].geno = genotype::from_string("0011");
        population y = make_population({2.0});
        y[0].geno = genotype::from_string("1010");
        const population next = mu_plus_lambda_survival({&x, &y}, 2);
        CHECK(next[0].geno == x[0].geno);
        CHECK(next[1].geno == x[1].geno);
    }
    SUBCASE("insufficient pool is a usage error") {
        CHECK_THROWS_AS(mu_plus_lambda_survival({&a}, 3), std::invalid_argument);
    }
}

TEST_CASE("run_ga: determinism, budget accounting, elitism") {
    const instance inst = rflp_test::random_instance(10, 21);
    ga_config cfg;
    cfg.generations = 15;
    cfg.pop_size = 12;
    cfg.seed = 3;
    cfg.model = model_config::msum();

    const run_report r1 = run_ga(inst, cfg);
    const run_report r2 = run_ga(inst, cfg);

    CHECK(r1.best_genotype == r2.best_genotype);
    CHECK(r1.best_objective == r2.best_objective);
    REQUIRE(r1.trace.size() == cfg.generations);
    REQUIRE(r2.trace.size() == cfg.generations);
    for (std::size_t g = 0; g < r1.trace.size(); ++g) {
        CHECK(r1.trace[g].best_objective == r2.trace[g].best_objective);
        CHECK(r1.trace[g].mean_objective == r2.trace[g].mean_objective);
        CHECK(r1.trace[g].evaluations == r2.trace[g].evaluations);
    }

    CHECK(r1.evaluations == cfg.pop_size + cfg.generations * cfg.pop_size);
    for (std::size_t g = 1; g < r1.trace.size(); ++g) {
        CHECK(r1.trace[g].best_objective <= r1.trace[g - 1].best_objective);
    }
    CHECK(is_feasible(r1.best_genotype));
}

TEST_CASE("run_ga: one generation with two individuals stays above the optimum") {
    const instance inst = rflp_test::random_instance(8, 31);
    ga_config cfg;
    cfg.generations = 1;
    cfg.pop_size = 2;
    cfg.seed = 1;
    cfg.model = model_config::msum();
    const run_report report = run_ga(inst, cfg);
    CHECK(report.trace.size() == 1);

    const exact_result exact = brute_force_optimum(inst, cfg.model);
    CHECK(report.best_objective >= exact.objective - 1e-9 * exact.objective);
}

TEST_SUITE_END();
