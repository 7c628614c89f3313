// Benchmark comparing the serial reference kernels against their OpenMP
// variants: dense complex matvec (the RK4 inner loop), ensemble spectral
// densities, and the error sweep.

#include <chrono>
#include <cstdio>

#include "qlsync/dynamics.hpp"
#include "qlsync/emergent.hpp"
#include "qlsync/spectra.hpp"

using namespace qlsync;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <typename F>
double time_run(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return seconds_since(t0);
}

void report(const char* name, double serial, double parallel) {
    std::printf("%-28s serial %8.3f s   openmp %8.3f s   speedup %.2fx\n", name, serial,
                parallel, parallel > 0.0 ? serial / parallel : 0.0);
}

}  // namespace

int main() {
    std::printf("qlsync kernel benchmark (%d threads in openmp runs)\n",
                active_thread_count());

    {  // complex matvec, 1024-dim resource
        ResourceSpec spec{16, 2, {8, 8}, {4, 4}, 7};
        const Matrix r = cartesian_product(sample_single_resources(spec));
        RngStream rng(3);
        CVec x = sample_initial_state(spec, rng), y;
        const int reps = 200;
        const double ts = time_run([&] {
            for (int i = 0; i < reps; ++i) matvec(r, x, y, Exec::serial);
        });
        const double tp = time_run([&] {
            for (int i = 0; i < reps; ++i) matvec(r, x, y, Exec::openmp);
        });
        report("matvec 1024 x200", ts, tp);
    }

    {  // ensemble spectral density, direct diagonalization per sample
        ResourceSpec spec{12, 2, {6, 6}, {3, 3}, 11};
        const int n_samp = 24;
        const double ts =
            time_run([&] { ensemble_spectra(spec, n_samp, Exec::serial); });
        const double tp =
            time_run([&] { ensemble_spectra(spec, n_samp, Exec::openmp); });
        report("ensemble_spectra 24x576", ts, tp);
    }

    {  // error sweep, factorized propagation per sample
        ResourceSpec spec{16, 2, {4, 4}, {8, 8}, 5};
        ModelParams params;
        SweepOptions opts;
        opts.l_values = {8};
        opts.t_values = {5, 10, 15, 20};
        opts.n_samp = 8;
        opts.exec = Exec::serial;
        const double ts = time_run([&] { error_sweep(spec, params, opts); });
        opts.exec = Exec::openmp;
        const double tp = time_run([&] { error_sweep(spec, params, opts); });
        report("error_sweep 8 samples", ts, tp);
    }

    return 0;
}
