// Timing comparison of the OpenMP kernels against the serial direct-DFT
// reference and against single-threaded execution of the same kernels.

#include <omp.h>

#include <cstdio>
#include <vector>

#include "sbfd/modulator.hpp"
#include "sbfd/reference.hpp"
#include "sbfd/rng.hpp"
#include "sbfd/sensing.hpp"

using namespace sbfd;

namespace {

SymbolGrid random_grid(const OfdmNumerology& num, std::size_t symbols, std::uint64_t seed) {
    SymbolGrid g(num, symbols);
    Rng rng(seed);
    for (auto& v : g.m.v) v = rng.gaussian_c();
    return g;
}

template <typename F> double time_s(F&& f, int reps = 3) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const double t0 = omp_get_wtime();
        f();
        best = std::min(best, omp_get_wtime() - t0);
    }
    return best;
}

} // namespace

int main() {
    OfdmNumerology num; // paper defaults

    std::printf("threads available: %d\n\n", omp_get_max_threads());

    {
        const std::size_t ref_symbols = 4; // direct DFT is O(N^2) per symbol
        const auto gref = random_grid(num, ref_symbols, 7);
        const double t_ref = time_s([&] { (void)ref::modulate(gref); }, 1);

        const std::size_t symbols = 2048;
        const auto g = random_grid(num, symbols, 7);
        const double t1 = time_s([&] { (void)modulate(g, Exec::Serial); });
        const double tn = time_s([&] { (void)modulate(g, Exec::Parallel); });
        std::printf("modulate        reference %8.2f us/sym   fft(1t) %8.2f us/sym   "
                    "fft(%dt) %8.2f us/sym   speedup %.2fx\n",
                    1e6 * t_ref / static_cast<double>(ref_symbols),
                    1e6 * t1 / static_cast<double>(symbols), omp_get_max_threads(),
                    1e6 * tn / static_cast<double>(symbols), t1 / tn);

        const auto buf = modulate(g);
        const double d1 = time_s([&] { (void)ofdm_demodulate(buf, Exec::Serial); });
        const double dn = time_s([&] { (void)ofdm_demodulate(buf, Exec::Parallel); });
        std::printf("demodulate      fft(1t) %8.2f us/sym   fft(%dt) %8.2f us/sym   speedup %.2fx\n",
                    1e6 * d1 / static_cast<double>(symbols), omp_get_max_threads(),
                    1e6 * dn / static_cast<double>(symbols), d1 / dn);
    }

    {
        // one sensing window on the paper subband width
        const std::size_t bins = 598;
        SensingConfig cfg;
        cfg.window = 1216;
        cfg.keep_maps = false;
        WindowProcessor proc(bins, num, cfg);
        CMat d(bins, cfg.window);
        Rng rng(11);
        for (auto& v : d.v) v = rng.gaussian_c();

        CMat scratch = d;
        const double tn = time_s([&] {
            scratch.v = d.v;
            (void)proc.process(scratch, 0);
        });
        omp_set_num_threads(1);
        const double t1 = time_s([&] {
            scratch.v = d.v;
            (void)proc.process(scratch, 0);
        });
        omp_set_num_threads(omp_get_num_procs());
        std::printf("sensing window  1 thread %8.1f ms        parallel %8.1f ms        speedup %.2fx\n",
                    1e3 * t1, 1e3 * tn, t1 / tn);
    }
    return 0;
}
