// Timing comparison of the OpenMP kernels against their serial reference
// implementations on representative workloads.  Results are checked for
// entrywise equality before timings are reported.

#include "extpow/forms.hpp"
#include "extpow/parallel.hpp"

#include <chrono>
#include <functional>
#include <cstdio>
#include <random>

using namespace extpow;

namespace {

double time_best(const std::function<void()>& body, int reps = 3) {
    double best = 0;
    for (int r = 0; r < reps; ++r) {
        auto t0 = std::chrono::steady_clock::now();
        body();
        double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (r == 0 || t < best) best = t;
    }
    return best;
}

void report(const char* name, double serial, double parallel, bool equal) {
    std::printf("%-36s serial %8.3fs   omp %8.3fs   speedup %5.2fx   %s\n", name, serial, parallel,
                parallel > 0 ? serial / parallel : 0.0, equal ? "outputs equal" : "OUTPUTS DIFFER");
}

void bench_cauchy_binet(const Ring& R, int n, int m, std::mt19937_64& rng, const char* label) {
    Mat g = random_invertible(R, n, rng);
    RepMatrix a = RepMatrix::identity(R, n, m);
    RepMatrix b = RepMatrix::identity(R, n, m);
    double ts = time_best([&] { a = cauchy_binet_serial(g, m); });
    double tp = time_best([&] { b = cauchy_binet_omp(g, m); });
    report(label, ts, tp, a.equals_entrywise(b));
}

void bench_transform(const Ring& R, int n, int m, std::mt19937_64& rng, const char* label) {
    MultilinearForm f = form_polarized(R, n, m);
    Mat h = random_invertible(R, n, rng);
    RepMatrix g = cauchy_binet(h, m);
    MultilinearForm a = f, b = f;
    double ts = time_best([&] { a = act_on_form_serial(g, f); });
    double tp = time_best([&] { b = act_on_form_omp(g, f); });
    report(label, ts, tp, a == b);
}

}  // namespace

int main() {
    std::printf("threads available to the omp kernels: %d\n", par::max_threads());
    std::mt19937_64 rng(12345);
    const Ring& f5 = Ring::modular(5);
    const Ring& q = Ring::rationals();

    bench_cauchy_binet(q, 8, 4, rng, "cauchy_binet (8,4) over Q");
    bench_cauchy_binet(f5, 9, 4, rng, "cauchy_binet (9,4) over Z/5");
    bench_cauchy_binet(q, 10, 3, rng, "cauchy_binet (10,3) over Q");
    bench_transform(f5, 9, 3, rng, "act_on_form (9,3) over Z/5");
    bench_transform(q, 9, 3, rng, "act_on_form (9,3) over Q");
    return 0;
}
