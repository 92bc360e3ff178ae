// Compares the OpenMP kernels against their serial reference implementations:
// batch objective evaluation and exhaustive enumeration. Verifies that both
// paths produce identical results before reporting timings.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>

#include "rflp/core.hpp"
#include "rflp/evolve.hpp"
#include "rflp/instgen.hpp"
#include "rflp/oracle.hpp"
#include "rflp/rng.hpp"

namespace {

using clock_type = std::chrono::steady_clock;

template <typename F>
double best_of_ms(int reps, F&& body) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = clock_type::now();
        body();
        const double ms =
            std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
        if (ms < best) best = ms;
    }
    return best;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Serial vs parallel kernel benchmark"};
    std::size_t n = 200;
    std::size_t batch = 512;
    std::size_t oracle_n = 16;
    int reps = 5;
    std::uint64_t seed = 1;
    app.add_option("--n", n, "Instance size for the batch kernel");
    app.add_option("--batch", batch, "Genotypes per batch");
    app.add_option("--oracle-n", oracle_n, "Instance size for the enumeration kernel");
    app.add_option("--reps", reps, "Repetitions (best time kept)");
    app.add_option("--seed", seed, "Seed");
    CLI11_PARSE(app, argc, argv);

    int threads = 1;
#ifdef _OPENMP
#pragma omp parallel
#pragma omp master
    threads = omp_get_num_threads();
#endif
    std::printf("threads: %d\n", threads);
    std::printf("%-22s %12s %12s %9s\n", "kernel", "serial_ms", "parallel_ms", "speedup");

    {
        rflp::gen_params params;
        params.n = n;
        params.seed = seed;
        const rflp::instance inst = rflp::generate_instance(params);
        const rflp::evaluator ev(inst);
        const rflp::model_config model = rflp::model_config::msum();

        rflp::xoshiro256pp rng(seed);
        std::vector<rflp::genotype> genos = rflp::init_population(batch, n, rng);
        for (auto& g : genos) ev.repair_in_place(g);

        std::vector<double> serial(batch);
        std::vector<double> parallel(batch);
        const double t_serial =
            best_of_ms(reps, [&] { ev.evaluate_batch_serial(genos, model, serial); });
        const double t_parallel =
            best_of_ms(reps, [&] { ev.evaluate_batch(genos, model, parallel); });
        if (serial != parallel) {
            std::fprintf(stderr, "evaluate_batch: parallel result differs from serial\n");
            return 2;
        }
        std::printf("%-22s %12.3f %12.3f %8.2fx\n", "evaluate_batch", t_serial, t_parallel,
                    t_serial / t_parallel);
    }

    {
        rflp::gen_params params;
        params.n = oracle_n;
        params.seed = seed + 1;
        const rflp::instance inst = rflp::generate_instance(params);
        const rflp::model_config model = rflp::model_config::msum();

        rflp::exact_result serial;
        rflp::exact_result parallel;
        const double t_serial = best_of_ms(
            reps, [&] { serial = rflp::brute_force_optimum_serial(inst, model, oracle_n); });
        const double t_parallel =
            best_of_ms(reps, [&] { parallel = rflp::brute_force_optimum(inst, model, oracle_n); });
        if (!(serial.optimum == parallel.optimum) || serial.objective != parallel.objective ||
            serial.num_enumerated != parallel.num_enumerated) {
            std::fprintf(stderr, "brute_force_optimum: parallel result differs from serial\n");
            return 2;
        }
        std::printf("%-22s %12.3f %12.3f %8.2fx\n", "brute_force_optimum", t_serial, t_parallel,
                    t_serial / t_parallel);
    }
    return 0;
}
