// Timing comparison of the OpenMP quadrature kernels against the serial
// reference. Also asserts that the two paths agree bitwise, since the
// reductions are order-fixed.

#include <omp.h>

#include <chrono>
#include <cstdio>

#include "dms/nonlinearity.hpp"
#include "dms/optimizer.hpp"
#include "dms/spectral.hpp"

using namespace dms;

namespace {

template <typename F>
double time_best_of(int reps, F&& fn) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const double dt =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        best = std::min(best, dt);
    }
    return best;
}

}  // namespace

int main() {
    std::printf("threads available: %d\n\n", omp_get_max_threads());
    std::printf("%-28s %10s %10s %10s %8s\n", "kernel", "serial[ms]", "openmp[ms]", "speedup",
                "bitwise");

    const Potential kerr = Potential::kerr();
    for (std::size_t n : {1024u, 4096u}) {
        const GridSpec grid = GridSpec::make(n, 40.0);
        const Field f = random_smooth_field(grid, 99);
        for (std::size_t nodes : {64u, 256u}) {
            const RMeasure mu = RMeasure::uniform01(nodes);

            volatile double sink = 0.0;
            const double ts = time_best_of(3, [&] { sink = evaluate_N_serial(f, mu, kerr); });
            const double tp = time_best_of(3, [&] { sink = evaluate_N(f, mu, kerr); });
            const bool same = evaluate_N_serial(f, mu, kerr) == evaluate_N(f, mu, kerr);
            std::printf("evaluate_N  n=%-5zu m=%-4zu %10.2f %10.2f %9.2fx %8s\n", n, nodes,
                        1e3 * ts, 1e3 * tp, ts / tp, same ? "yes" : "NO");

            const double gs = time_best_of(3, [&] { (void)grad_N_serial(f, mu, kerr); });
            const double gp = time_best_of(3, [&] { (void)grad_N(f, mu, kerr); });
            const Field a = grad_N_serial(f, mu, kerr);
            const Field b = grad_N(f, mu, kerr);
            bool gsame = true;
            for (std::size_t j = 0; j < a.size(); ++j)
                gsame = gsame && a.values[j] == b.values[j];
            std::printf("grad_N      n=%-5zu m=%-4zu %10.2f %10.2f %9.2fx %8s\n", n, nodes,
                        1e3 * gs, 1e3 * gp, gs / gp, gsame ? "yes" : "NO");
            (void)sink;
        }
    }
    return 0;
}
