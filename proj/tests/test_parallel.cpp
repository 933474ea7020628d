#include "doctest.h"

#include "extpow/forms.hpp"
#include "extpow/parallel.hpp"

#include <random>

using namespace extpow;

// The OpenMP kernels must agree with their serial reference implementations
// entry for entry, independent of the allowed thread count.

TEST_CASE("cauchy_binet: omp kernel equals serial reference") {
    std::mt19937_64 rng(211);
    for (const Ring* R : {&Ring::modular(7), &Ring::rationals()}) {
        for (int trial = 0; trial < 3; ++trial) {
            Mat g = random_invertible(*R, 6, rng);
            for (int m : {2, 3}) {
                RepMatrix a = cauchy_binet_serial(g, m);
                RepMatrix b = cauchy_binet_omp(g, m);
                CHECK(a.equals_entrywise(b));
            }
        }
    }
}

TEST_CASE("tensor transform: omp kernel equals serial reference") {
    std::mt19937_64 rng(223);
    const Ring& f5 = Ring::modular(5);
    MultilinearForm f = form_polarized(f5, 6, 2);
    for (int trial = 0; trial < 3; ++trial) {
        Mat r(f5, 15, 15);
        for (int i = 0; i < 15; ++i)
            for (int j = 0; j < 15; ++j) r.at(i, j) = f5.from_int(static_cast<long long>(rng() % 5));
        RepMatrix g = RepMatrix::from_dense(f5, 6, 2, std::move(r));
        CHECK(act_on_form_serial(g, f) == act_on_form_omp(g, f));
    }
}

TEST_CASE("thread cap plumbing") {
    int before = par::max_threads();
    par::set_max_threads(1);
    CHECK(par::max_threads() == 1);
    CHECK_FALSE(par::parallel_enabled());
    par::set_max_threads(0);  // back to environment / hardware default
    CHECK(par::max_threads() == before);
}
