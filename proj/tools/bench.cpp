// Kernel benchmark: the OpenMP lattice-sum kernel against the naive serial
// reference, and the row-parallel integer matrix product against its serial
// twin. Prints one line per case with the speedup.

#include "schottkykit/schottky.hpp"
#include "schottkykit/theta.hpp"
#include "schottkykit/weilmat.hpp"

#include "schottkykit/rng.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>

using namespace skt;
using Clock = std::chrono::steady_clock;

namespace {

double time_of(const std::function<void()>& fn, int reps = 1) {
    auto t0 = Clock::now();
    for (int i = 0; i < reps; ++i) fn();
    return std::chrono::duration<double>(Clock::now() - t0).count() / reps;
}

}  // namespace

int main() {
    std::printf("threads available: %d\n\n", omp_get_max_threads());

    std::printf("%-34s %10s %10s %10s %8s\n", "case", "reference", "fast(1t)", "fast(Nt)", "speedup");
    for (auto [g, P] : {std::pair{3, 40}, {4, 40}, {4, 120}, {5, 120}}) {
        auto tau = theta::random_period_matrix(g, 11, 0.4, P);
        charalg::Characteristic m(g, 0, 1);
        theta::EvalOptions ref;
        ref.mode = theta::EvalMode::Reference;

        double tr = (g <= 4) ? time_of([&] { theta::theta_constant(m, tau, P, ref); }) : 0.0;
        omp_set_num_threads(1);
        double t1 = time_of([&] { theta::theta_constant(m, tau, P); });
        omp_set_num_threads(omp_get_num_procs());
        double tn = time_of([&] { theta::theta_constant(m, tau, P); });

        char name[64];
        std::snprintf(name, sizeof name, "theta g=%d P=%d", g, P);
        if (g <= 4)
            std::printf("%-34s %9.4fs %9.4fs %9.4fs %7.1fx\n", name, tr, t1, tn, tr / tn);
        else
            std::printf("%-34s %10s %9.4fs %9.4fs %7s\n", name, "-", t1, tn, "-");
    }

    std::printf("\n");
    for (int n : {256, 512}) {
        IntMat A(n, n), B(n, n);
        Rng rng(3);
        for (auto& v : A.a) v = static_cast<long long>(rng.next_below(3)) - 1;
        for (auto& v : B.a) v = static_cast<long long>(rng.next_below(3)) - 1;
        double ts = time_of([&] { mul_serial(A, B); });
        double tp = time_of([&] { mul(A, B); });
        char name[64];
        std::snprintf(name, sizeof name, "intmat %dx%d product", n, n);
        std::printf("%-34s %9.4fs %20.4fs %7.1fx\n", name, ts, tp, ts / tp);
    }

    // near-diagonal S_34 evaluation, the dominant cost of the deep runs
    {
        auto s = schottky::build_S(4, 3, 4);
        auto tau = theta::random_period_matrix(4, 5, 0.4, 40);
        double t = time_of([&] { schottky::evaluate_SJ(s, tau, 40, 1); }, 3);
        std::printf("\nS_34 evaluation (g=4, P=40):        %9.4fs\n", t);
    }
    return 0;
}
