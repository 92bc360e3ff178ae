#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "rflp/core.hpp"
#include "rflp/errors.hpp"
#include "test_util.hpp"

using namespace rflp;
using rflp_test::tiny3;

TEST_SUITE_BEGIN("core");

TEST_CASE("distance: axis, identity, diagonal") {
    const instance inst = tiny3();
    CHECK(distance(inst, 0, 1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(distance(inst, 0, 0) == 0.0);
    CHECK(distance(inst, 2, 2) == 0.0);
    CHECK(distance(inst, 1, 2) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(distance(inst, 1, 2) == distance(inst, 2, 1));
    CHECK_THROWS_AS(distance(inst, 0, 3), std::out_of_range);
}

TEST_CASE("nearest_order on the hand fixture") {
    const instance inst = tiny3();
    const auto order = nearest_order(inst);
    // customer 0: distances 0, 1, 1 -> tie broken by index
    CHECK(std::vector<std::uint32_t>(order.row(0).begin(), order.row(0).end()) ==
          std::vector<std::uint32_t>{0, 1, 2});
    // customer 2: distances 1, sqrt2, 0
    CHECK(std::vector<std::uint32_t>(order.row(2).begin(), order.row(2).end()) ==
          std::vector<std::uint32_t>{2, 0, 1});
}

TEST_CASE("nearest_order on a single node") {
    instance inst;
    inst.n = 1;
    inst.coords = {{0.5, 0.5}};
    inst.demands = {10};
    inst.fixed_costs = {600};
    inst.failure_prob = 0.0;
    const auto order = nearest_order(inst);
    CHECK(order.row(0).size() == 1);
    CHECK(order.row(0)[0] == 0);
}

TEST_CASE("nearest_order rows are sorted by distance with index tie-break") {
    xoshiro256pp rng(11);
    for (int round = 0; round < 10; ++round) {
        const instance inst = rflp_test::random_instance(12, rng.next());
        const auto order = nearest_order(inst);
        for (std::size_t i = 0; i < inst.n; ++i) {
            const auto row = order.row(i);
            // a permutation
            std::vector<std::uint32_t> sorted(row.begin(), row.end());
            std::sort(sorted.begin(), sorted.end());
            for (std::size_t j = 0; j < inst.n; ++j) CHECK(sorted[j] == j);
            for (std::size_t a = 0; a + 1 < inst.n; ++a) {
                const double da = distance(inst, i, row[a]);
                const double db = distance(inst, i, row[a + 1]);
                CHECK(da <= db);
                if (da == db) CHECK(row[a] < row[a + 1]);
            }
        }
    }
}

TEST_CASE("decode_allocation picks selected sites in preference order") {
    const instance inst = tiny3();
    const auto order = nearest_order(inst);

    SUBCASE("selected-count rule") {
        const auto table = decode_allocation(genotype::from_string("110"), order,
                                             model_config::msum());
        CHECK(table.levels == 2);
        CHECK(table.assign[0] == std::vector<std::uint32_t>{0, 1});
        CHECK(table.assign[2] == std::vector<std::uint32_t>{0, 1});
    }
    SUBCASE("fixed-m rule keeps two nearest of three selected") {
        const auto table = decode_allocation(genotype::from_string("111"), order,
                                             model_config::m2());
        CHECK(table.levels == 2);
        CHECK(table.assign[2] == std::vector<std::uint32_t>{2, 0});
    }
    SUBCASE("gap in the selection is skipped") {
        const auto table = decode_allocation(genotype::from_string("101"), order,
                                             model_config::msum());
        CHECK(table.assign[0] == std::vector<std::uint32_t>{0, 2});
    }
    SUBCASE("infeasible input is rejected") {
        CHECK_THROWS_AS(decode_allocation(genotype::from_string("100"), order,
                                          model_config::msum()),
                        feasibility_error);
        CHECK_THROWS_AS(decode_allocation(genotype::from_string("110"), order,
                                          model_config{1.0, 3}),
                        feasibility_error);
    }
}

TEST_CASE("evaluate matches the hand-computed fixture values") {
    const instance inst = tiny3();
    const model_config msum = model_config::msum();

    // 1100 + 100*(0*0.95 + 1*0.0475) + 200*(1*0.95 + sqrt2*0.0475)
    const double expected_110 =
        1100.0 + 100.0 * 0.0475 + 200.0 * (0.95 + std::sqrt(2.0) * 0.0475);
    CHECK(evaluate(genotype::from_string("110"), inst, msum).objective ==
          doctest::Approx(expected_110).epsilon(1e-12));

    // 1200 + 100*0.0475 + 200*0.0475
    CHECK(evaluate(genotype::from_string("101"), inst, msum).objective ==
          doctest::Approx(1214.25).epsilon(1e-12));

    SUBCASE("p = 0 leaves only the nearest-site term") {
        instance no_fail = inst;
        no_fail.failure_prob = 0.0;
        CHECK(evaluate(genotype::from_string("110"), no_fail, msum).objective ==
              doctest::Approx(1300.0).epsilon(1e-12));
    }
}

TEST_CASE("evaluate: p = 0 reduces to nearest selected site") {
    xoshiro256pp rng(23);
    for (int round = 0; round < 20; ++round) {
        instance inst = rflp_test::random_instance(10, rng.next());
        inst.failure_prob = 0.0;
        const genotype g = rflp_test::random_feasible_genotype(inst.n, rng);
        double expected = 0.0;
        for (std::size_t j = 0; j < inst.n; ++j) {
            if (g.test(j)) expected += static_cast<double>(inst.fixed_costs[j]);
        }
        for (std::size_t i = 0; i < inst.n; ++i) {
            double best = 1e300;
            for (std::size_t j = 0; j < inst.n; ++j) {
                if (g.test(j)) best = std::min(best, distance(inst, i, j));
            }
            expected += static_cast<double>(inst.demands[i]) * best;
        }
        CHECK(evaluate(g, inst, model_config::msum()).objective ==
              doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("evaluate: objective is non-decreasing in alpha") {
    xoshiro256pp rng(31);
    const instance inst = rflp_test::random_instance(12, 77);
    const evaluator ev(inst);
    for (int round = 0; round < 20; ++round) {
        const genotype g = rflp_test::random_feasible_genotype(inst.n, rng);
        double prev = -1.0;
        for (double alpha : {0.0, 0.25, 1.0, 3.0, 10.0}) {
            const double obj = ev.objective(g, model_config::msum(alpha));
            CHECK(obj >= prev);
            prev = obj;
        }
    }
}

TEST_CASE("evaluate: fixed-m equals selected-count when popcount matches k") {
    xoshiro256pp rng(41);
    const instance inst = rflp_test::random_instance(12, 99);
    const evaluator ev(inst);
    for (std::size_t k = 2; k <= 6; ++k) {
        const genotype g = rflp_test::genotype_with_popcount(inst.n, k, rng);
        const double fixed = ev.objective(g, model_config{1.0, static_cast<std::uint32_t>(k)});
        const double flexible = ev.objective(g, model_config::msum());
        CHECK(fixed == flexible); // identical arithmetic path
    }
}

TEST_CASE("evaluate is pure: repeated and reordered calls agree bit for bit") {
    const instance inst = rflp_test::random_instance(15, 123);
    const evaluator ev(inst);
    xoshiro256pp rng(5);
    std::vector<genotype> batch;
    for (int i = 0; i < 40; ++i) batch.push_back(rflp_test::random_feasible_genotype(inst.n, rng));

    const model_config model = model_config::msum();
    std::vector<double> first(batch.size());
    std::vector<double> second(batch.size());
    ev.evaluate_batch_serial(batch, model, first);
    ev.evaluate_batch_serial(batch, model, second);
    CHECK(first == second);

    // evaluating in reverse order changes nothing
    std::vector<genotype> reversed(batch.rbegin(), batch.rend());
    std::vector<double> rev_out(batch.size());
    ev.evaluate_batch_serial(reversed, model, rev_out);
    std::reverse(rev_out.begin(), rev_out.end());
    CHECK(rev_out == first);
}

TEST_CASE("evaluate_batch parallel kernel equals the serial reference") {
    const instance inst = rflp_test::random_instance(30, 7);
    const evaluator ev(inst);
    xoshiro256pp rng(9);
    std::vector<genotype> batch;
    for (int i = 0; i < 200; ++i) batch.push_back(rflp_test::random_feasible_genotype(inst.n, rng));
    std::vector<double> serial(batch.size());
    std::vector<double> parallel(batch.size());
    ev.evaluate_batch_serial(batch, model_config::msum(), serial);
    ev.evaluate_batch(batch, model_config::msum(), parallel);
    CHECK(serial == parallel);
}

TEST_CASE("zero-demand customers contribute nothing") {
    instance inst = rflp_test::random_instance(10, 55);
    std::fill(inst.demands.begin(), inst.demands.end(), 0);
    xoshiro256pp rng(3);
    const genotype g = rflp_test::random_feasible_genotype(inst.n, rng);
    double fixed = 0.0;
    for (std::size_t j = 0; j < inst.n; ++j) {
        if (g.test(j)) fixed += static_cast<double>(inst.fixed_costs[j]);
    }
    CHECK(evaluate(g, inst, model_config::msum()).objective == fixed);
}

TEST_CASE("sorted-distance allocation beats every per-customer permutation") {
    // brute-force check of the ascending-distance rule on small selections
    xoshiro256pp rng(61);
    for (int round = 0; round < 20; ++round) {
        const instance inst = rflp_test::random_instance(8, rng.next());
        const std::size_t k = 2 + static_cast<std::size_t>(rng.next_below(3)); // 2..4
        const genotype g = rflp_test::genotype_with_popcount(inst.n, k, rng);
        const auto table = decode_allocation(g, nearest_order(inst), model_config::msum());
        const double p = inst.failure_prob;

        std::vector<std::uint32_t> selected;
        for (std::size_t j = 0; j < inst.n; ++j) {
            if (g.test(j)) selected.push_back(static_cast<std::uint32_t>(j));
        }
        auto level_cost = [&](std::size_t i, const std::vector<std::uint32_t>& sites) {
            double cost = 0.0;
            double weight = 1.0 - p;
            for (std::uint32_t j : sites) {
                cost += distance(inst, i, j) * weight;
                weight *= p;
            }
            return cost;
        };
        for (std::size_t i = 0; i < inst.n; ++i) {
            const double chosen = level_cost(i, table.assign[i]);
            std::vector<std::uint32_t> perm = selected;
            std::sort(perm.begin(), perm.end());
            do {
                CHECK(chosen <= level_cost(i, perm) + 1e-12 * std::fabs(level_cost(i, perm)));
            } while (std::next_permutation(perm.begin(), perm.end()));
        }
    }
}

TEST_CASE("is_feasible needs two selected sites") {
    CHECK(is_feasible(genotype::from_string("110")));
    CHECK_FALSE(is_feasible(genotype::from_string("001")));
    CHECK_FALSE(is_feasible(genotype::from_string("000")));
}

TEST_CASE("repair flips the cheapest zero genes first") {
    instance inst = tiny3();
    inst.fixed_costs = {700, 500, 900};

    CHECK(repair(genotype::from_string("000"), inst) == genotype::from_string("110"));
    CHECK(repair(genotype::from_string("001"), inst) == genotype::from_string("011"));
    CHECK(repair(genotype::from_string("110"), inst) == genotype::from_string("110"));
}

TEST_CASE("repair is idempotent and never deselects") {
    xoshiro256pp rng(71);
    const instance inst = rflp_test::random_instance(16, 5);
    for (int round = 0; round < 50; ++round) {
        genotype g(inst.n);
        // sparse random genotype, frequently infeasible
        for (std::size_t j = 0; j < inst.n; ++j) {
            if (rng.next_double() < 0.08) g.set(j);
        }
        const genotype fixed = repair(g, inst);
        CHECK(is_feasible(fixed));
        CHECK(repair(fixed, inst) == fixed);
        for (std::size_t j = 0; j < inst.n; ++j) {
            if (g.test(j)) CHECK(fixed.test(j));
        }
    }
}

TEST_CASE("verify_allocation accepts decoded tables and rejects tampering") {
    const instance inst = tiny3();
    const auto order = nearest_order(inst);
    const genotype g = genotype::from_string("110");
    auto table = decode_allocation(g, order, model_config::msum());
    CHECK(verify_allocation(table, g, inst));

    SUBCASE("unselected site") {
        table.assign[0][1] = 2;
        CHECK_FALSE(verify_allocation(table, g, inst));
    }
    SUBCASE("repeated site for one customer") {
        table.assign[0][1] = table.assign[0][0];
        CHECK_FALSE(verify_allocation(table, g, inst));
    }
    SUBCASE("distance order violated") {
        std::swap(table.assign[2][0], table.assign[2][1]);
        CHECK_FALSE(verify_allocation(table, g, inst));
    }
    SUBCASE("wrong row length") {
        table.assign[1].pop_back();
        CHECK_FALSE(verify_allocation(table, g, inst));
    }
}

TEST_CASE("decoded allocations verify on random feasible genotypes") {
    xoshiro256pp rng(81);
    for (int round = 0; round < 25; ++round) {
        const instance inst = rflp_test::random_instance(10, rng.next());
        const auto order = nearest_order(inst);
        const genotype g = rflp_test::random_feasible_genotype(inst.n, rng);
        CHECK(verify_allocation(decode_allocation(g, order, model_config::msum()), g, inst));
        CHECK(verify_allocation(decode_allocation(g, order, model_config::m2()), g, inst));
    }
}

TEST_CASE("instance validation catches bad fields") {
    instance inst = tiny3();
    inst.coords[1] = {1.5, 0.0};
    CHECK_THROWS_AS(inst.validate(), std::invalid_argument);

    inst = tiny3();
    inst.demands[0] = -1;
    CHECK_THROWS_AS(inst.validate(), std::invalid_argument);

    inst = tiny3();
    inst.fixed_costs[2] = 0;
    CHECK_THROWS_AS(inst.validate(), std::invalid_argument);

    inst = tiny3();
    inst.failure_prob = 1.0;
    CHECK_THROWS_AS(inst.validate(), std::invalid_argument);
}

TEST_SUITE_END();
