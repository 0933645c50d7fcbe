#include <cstdio>
#include <random>

#include "gwdiff/forest.hpp"
#include "gwdiff/kernels.hpp"
#include "gwdiff/stochastic.hpp"

#ifdef _OPENMP
#include <omp.h>
#else
#include <chrono>
#endif

using namespace gwdiff;

namespace {

double now() {
#ifdef _OPENMP
    return omp_get_wtime();
#else
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
#endif
}

Matrix random_square(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = unif(rng);
    return m;
}

StochasticMatrix random_chain(std::mt19937_64& rng, int n) {
    Matrix m = random_square(rng, n);
    return normalize_rows(m);
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (compiled without OpenMP)\n");
#endif

    std::mt19937_64 rng(7);
    for (int n : {128, 256, 512, 1024}) {
        const Matrix a = random_square(rng, n);
        const Matrix b = random_square(rng, n);

        double t0 = now();
        const Matrix cs = kernels::matmul_serial(a, b);
        const double serial = now() - t0;

        t0 = now();
        const Matrix cp = kernels::matmul_parallel(a, b);
        const double parallel = now() - t0;

        const bool identical = cs == cp;
        std::printf("matmul %4d: serial %8.4fs  parallel %8.4fs  speedup %5.2fx  %s\n", n,
                    serial, parallel, serial / parallel,
                    identical ? "bit-identical" : "MISMATCH");
    }

    const StochasticMatrix p = random_chain(rng, 16);
    const SimConfig sim{5, 400000, 99, PureMutationMechanism{p, p}};

    double t0 = now();
    const EmpiricalLaw ls = estimate_law_serial(sim, 5);
    const double serial = now() - t0;

    t0 = now();
    const EmpiricalLaw lp = estimate_law(sim, 5);
    const double parallel = now() - t0;

    std::printf("sampler 16x400000: serial %8.4fs  parallel %8.4fs  speedup %5.2fx  %s\n", serial,
                parallel, serial / parallel,
                ls.counts == lp.counts ? "identical counts" : "MISMATCH");
    return 0;
}
