#include "doctest.h"

#include "extpow/extrep.hpp"
#include "extpow/ring.hpp"

#include <random>

using namespace extpow;

TEST_CASE("unit predicates and inverses per ring kind") {
    const Ring& z6 = Ring::modular(6);
    CHECK(z6.is_unit(z6.from_int(5)));
    CHECK_FALSE(z6.is_unit(z6.from_int(3)));
    CHECK_THROWS_AS((void)z6.inv(z6.from_int(3)), NonInvertibleError);
    CHECK(z6.mul(z6.inv(z6.from_int(5)), z6.from_int(5)) == z6.one());

    const Ring& f5d = Ring::dual_numbers(5);
    Elem a = f5d.dual_from_parts(1, 2);
    Elem b = f5d.dual_from_parts(1, 3);
    CHECK(f5d.mul(a, b) == f5d.one());  // delta^2 = 0 kills the cross term
    CHECK(f5d.is_unit(a));
    CHECK_FALSE(f5d.is_unit(f5d.dual_from_parts(0, 3)));
    CHECK(f5d.mul(a, f5d.inv(a)) == f5d.one());

    const Ring& q = Ring::rationals();
    Elem twothirds = q.parse_elem("2/3");
    CHECK(q.print(q.inv(twothirds)) == "3/2");

    const Ring& z = Ring::integers();
    CHECK(z.is_unit(z.from_int(-1)));
    CHECK_FALSE(z.is_unit(z.from_int(2)));
}

TEST_CASE("ring descriptor tokens parse and round-trip") {
    for (const char* tok : {"Z", "Q", "Z/6", "Z/97", "F5[d]", "poly(Q; a,b)", "poly(Z/7; x12,x13)"}) {
        const Ring& r = Ring::parse(tok);
        CHECK(&Ring::parse(r.token()) == &r);
    }
    CHECK(&Ring::parse("F5") == &Ring::modular(5));
    CHECK_THROWS_AS((void)Ring::parse("F6"), UnsupportedRingError);
    CHECK_THROWS_AS((void)Ring::parse("Z/1"), UnsupportedRingError);
}

TEST_CASE("canonical-form round trip: parse(print(a)) == a for every kind") {
    std::mt19937_64 rng(42);
    auto roundtrip = [&](const Ring& R, const Elem& e) {
        CHECK(R.parse_elem(R.print(e)) == e);
    };
    const Ring& z = Ring::integers();
    const Ring& q = Ring::rationals();
    const Ring& z6 = Ring::modular(6);
    const Ring& f7 = Ring::modular(7);
    const Ring& f5d = Ring::dual_numbers(5);
    const Ring& pq = Ring::parse("poly(Q; x,y)");
    const Ring& pz6 = Ring::parse("poly(Z/6; u,v)");
    for (int t = 0; t < 50; ++t) {
        long long a = static_cast<long long>(rng() % 2001) - 1000;
        long long b = static_cast<long long>(rng() % 999) + 1;
        roundtrip(z, z.from_int(a));
        roundtrip(q, Elem(&q, Rat(Rat(a) / b)));
        roundtrip(z6, z6.from_int(a));
        roundtrip(f7, f7.from_int(a));
        roundtrip(f5d, f5d.dual_from_parts(rng() % 5, rng() % 5));
        Elem p = pq.zero();
        for (int i = 0; i < 4; ++i) {
            Elem mono = pq.lift(Elem(&q, Rat(Rat(static_cast<long long>(rng() % 7) - 3) / (1 + rng() % 4))));
            mono = pq.mul(mono, pq.pow(pq.var(0), rng() % 3));
            mono = pq.mul(mono, pq.pow(pq.var(1), rng() % 3));
            p = pq.add(p, mono);
        }
        roundtrip(pq, p);
        Elem p2 = pz6.zero();
        for (int i = 0; i < 3; ++i) {
            Elem mono = pz6.from_int(static_cast<long long>(rng() % 6));
            mono = pz6.mul(mono, pz6.pow(pz6.var(0), rng() % 3));
            mono = pz6.mul(mono, pz6.pow(pz6.var(1), rng() % 2));
            p2 = pz6.add(p2, mono);
        }
        roundtrip(pz6, p2);
    }
}

TEST_CASE("polynomial units over a non-domain base") {
    const Ring& pz6 = Ring::parse("poly(Z/6; t)");
    // 1 + 3t is not a unit mod 6 (3 is not nilpotent), but 1 + 2t... 2 is not
    // nilpotent either; over Z/4, 1 + 2t is a unit.
    const Ring& pz4 = Ring::parse("poly(Z/4; t)");
    Elem u = pz4.add(pz4.one(), pz4.mul(pz4.from_int(2), pz4.var(0)));
    CHECK(pz4.is_unit(u));
    CHECK(pz4.mul(u, pz4.inv(u)) == pz4.one());
    Elem v = pz6.add(pz6.one(), pz6.mul(pz6.from_int(2), pz6.var(0)));
    CHECK_FALSE(pz6.is_unit(v));
}

TEST_CASE("exact division and derivatives in polynomial rings") {
    const Ring& p = Ring::parse("poly(Q; x,y)");
    Elem x = p.var(0), y = p.var(1);
    Elem f = p.mul(p.add(x, y), p.sub(x, y));  // x^2 - y^2
    CHECK(p.exact_div(f, p.add(x, y)) == p.sub(x, y));
    CHECK_THROWS_AS((void)p.exact_div(f, x), RingError);
    CHECK(poly_derivative(f, 0) == p.mul(p.from_int(2), x));
    CHECK(poly_derivative(f, 1) == p.mul(p.from_int(-2), y));
}

TEST_CASE("substitute_linear: torus and transvection examples") {
    // poly = x_{12} over n=4, m=2; g = /\^2 d_1(xi): x_{12} -> xi*x_{12}.
    const Ring& base = Ring::parse("poly(Q; xi)");
    const Ring& P = grassmann_poly_ring(base, 4, 2);
    Elem xi = base.var(0);
    RepMatrix torus = exterior_torus(4, 2, 1, xi);
    Elem x12 = P.var(0);
    Elem image = substitute_linear(x12, torus);
    CHECK(image == P.mul(P.lift(xi), x12));

    // identity leaves polynomials unchanged
    RepMatrix id = RepMatrix::identity(base, 4, 2);
    CHECK(substitute_linear(x12, id) == x12);

    // the Gr(2,4) quadric is invariant under /\^2 t_{1,2}(xi)
    const SubsetIndexer& idx = subset_indexer(4, 2);
    auto var_of = [&](std::initializer_list<int> elems) {
        return P.var(idx.index_of(Subset(4, elems)));
    };
    Elem quadric = P.sub(P.mul(var_of({1, 2}), var_of({3, 4})), P.mul(var_of({1, 3}), var_of({2, 4})));
    quadric = P.add(quadric, P.mul(var_of({1, 4}), var_of({2, 3})));
    RepMatrix t12 = exterior_transvection(4, 2, 1, 2, xi);
    CHECK(substitute_linear(quadric, t12) == quadric);
}

TEST_CASE("substitution composes contravariantly") {
    // S_g(p)(x) = p(gx) gives S_{gh} = S_h o S_g; the tests pin this
    // direction exactly.
    const Ring& f7 = Ring::modular(7);
    const Ring& P = grassmann_poly_ring(f7, 4, 2);
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        Mat a = random_invertible(f7, 4, rng);
        Mat b = random_invertible(f7, 4, rng);
        RepMatrix ga = cauchy_binet_serial(a, 2);
        RepMatrix gb = cauchy_binet_serial(b, 2);
        RepMatrix gab = cauchy_binet_serial(a * b, 2);
        Elem p = P.zero();
        for (std::size_t v = 0; v < P.nvars(); ++v)
            p = P.add(p, P.mul(P.from_int(static_cast<long long>(rng() % 7)),
                               P.mul(P.var(v), P.var(rng() % P.nvars()))));
        CHECK(substitute_linear(p, gab) == substitute_linear(substitute_linear(p, ga), gb));
    }
}
