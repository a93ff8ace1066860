// Timing comparison of the OpenMP grid search against the serial reference.
// Usage: bench_parallel [resolution] [repeats]

#include <cstdio>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#else
#include <chrono>
static double omp_get_wtime() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}
static int omp_get_max_threads() { return 1; }
#endif

#include "quadineq/constants.hpp"
#include "quadineq/transforms.hpp"

using namespace quadineq;

int main(int argc, char** argv) {
    int resolution = argc > 1 ? std::atoi(argv[1]) : 17;
    int repeats = argc > 2 ? std::atoi(argv[2]) : 3;
    if (resolution < 2 || repeats < 1) {
        std::fprintf(stderr, "usage: %s [resolution >= 2] [repeats >= 1]\n",
                     argv[0]);
        return 2;
    }

    RatioSpec spec = RatioSpec::power(RatioKind::L, 1.5);
    GridSpec grid;
    grid.resolution = resolution;

    std::printf("grid search, resolution %d (%lld raw cells), %d threads\n",
                resolution,
                static_cast<long long>(resolution) * resolution * resolution *
                    resolution * resolution * resolution,
                omp_get_max_threads());

    double best_serial = 1e300, best_parallel = 1e300;
    SearchReport serial_rep, parallel_rep;
    for (int rep = 0; rep < repeats; ++rep) {
        double t0 = omp_get_wtime();
        serial_rep = grid_search_serial(spec, grid, 42);
        double t1 = omp_get_wtime();
        parallel_rep = grid_search(spec, grid, 42);
        double t2 = omp_get_wtime();
        if (t1 - t0 < best_serial) best_serial = t1 - t0;
        if (t2 - t1 < best_parallel) best_parallel = t2 - t1;
        std::printf("  run %d: serial %.3fs  parallel %.3fs\n", rep + 1,
                    t1 - t0, t2 - t1);
    }

    std::printf("best: serial %.3fs  parallel %.3fs  speedup %.2fx\n",
                best_serial, best_parallel, best_serial / best_parallel);
    std::printf("serial best_ratio   %.17g\n", serial_rep.best_ratio);
    std::printf("parallel best_ratio %.17g\n", parallel_rep.best_ratio);
    if (serial_rep.best_ratio != parallel_rep.best_ratio) {
        std::printf("MISMATCH between serial and parallel results\n");
        return 1;
    }
    std::printf("results identical\n");
    return 0;
}
