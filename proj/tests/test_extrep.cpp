#include "doctest.h"

#include "extpow/extrep.hpp"

#include <random>

using namespace extpow;

namespace {

Mat random_matrix(const Ring& R, int n, std::mt19937_64& rng, int spread = 7) {
    Mat g(R, n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            g.at(r, c) = R.from_int(static_cast<long long>(rng() % spread) - spread / 2);
    return g;
}

}  // namespace

TEST_CASE("cauchy_binet basics: identity, diagonal images") {
    const Ring& q = Ring::rationals();
    RepMatrix id = cauchy_binet(Mat::identity(q, 5), 2);
    CHECK(id.equals_entrywise(RepMatrix::identity(q, 5, 2)));

    // /\^4 d_2(xi) = diag(xi, xi, xi, 1, xi) over Q[xi]
    const Ring& p = Ring::parse("poly(Q; xi)");
    Elem xi = p.var(0);
    RepMatrix img = cauchy_binet(torus_gl(p, 5, 2, xi), 4);
    Mat d = img.to_dense();
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            if (i != j) CHECK(p.is_zero(d.at(i, j)));
    CHECK(d.at(0, 0) == xi);
    CHECK(d.at(1, 1) == xi);
    CHECK(d.at(2, 2) == xi);
    CHECK(d.at(3, 3) == p.one());
    CHECK(d.at(4, 4) == xi);
}

TEST_CASE("det(/\\^2 g) = det(g)^3 for n=4 (both sides brute force)") {
    const Ring& f7 = Ring::modular(7);
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 20; ++trial) {
        Mat g = random_invertible(f7, 4, rng);
        Elem lhs = det_gauss(cauchy_binet(g, 2).to_dense());
        Elem rhs = f7.pow(det_gauss(g), 3);  // C(n-1, m-1) = 3
        CHECK(lhs == rhs);
    }
}

TEST_CASE("worked example: /\\^3 t_{1,3}(xi) factors in closed form") {
    const Ring& p = Ring::parse("poly(Z; xi)");
    Elem xi = p.var(0);
    auto factors = exterior_transvection_factors(5, 3, 1, 3, xi);
    REQUIRE(factors.size() == 3);  // C(n-2, m-1) = C(3,2)
    CHECK(factors[0].row.str() == "124");
    CHECK(factors[0].col.str() == "234");
    CHECK(factors[0].coeff == p.neg(xi));
    CHECK(factors[1].row.str() == "125");
    CHECK(factors[1].col.str() == "235");
    CHECK(factors[1].coeff == p.neg(xi));
    CHECK(factors[2].row.str() == "145");
    CHECK(factors[2].col.str() == "345");
    CHECK(factors[2].coeff == xi);
}

TEST_CASE("exterior transvection: m=1 identity functor, minor agreement") {
    const Ring& q = Ring::rationals();
    Elem c = q.from_int(5);
    RepMatrix t = exterior_transvection(4, 1, 2, 3, c);
    CHECK(t.to_dense() == transvection_gl(q, 4, 2, 3, c));

    RepMatrix viaformula = exterior_transvection(4, 2, 1, 2, c);
    RepMatrix viaminors = cauchy_binet(transvection_gl(q, 4, 1, 2, c), 2);
    CHECK(viaformula.equals_entrywise(viaminors));

    CHECK_THROWS_AS((void)exterior_transvection(4, 2, 1, 1, c), std::invalid_argument);
}

TEST_CASE("formula-vs-minor agreement over sampled parameters (subset of the acceptance sweep)") {
    const Ring& f5 = Ring::modular(5);
    for (int n = 3; n <= 5; ++n) {
        for (int m = 1; m <= 3 && m <= n; ++m) {
            for (const Elem& xi : sample_elements(f5)) {
                RepMatrix a = exterior_transvection(n, m, 1, n, xi);
                RepMatrix b = cauchy_binet(transvection_gl(f5, n, 1, n, xi), m);
                CHECK(a.equals_entrywise(b));
            }
            RepMatrix ta = exterior_torus(n, m, 2, f5.from_int(3));
            RepMatrix tb = cauchy_binet(torus_gl(f5, n, 2, f5.from_int(3)), m);
            CHECK(ta.equals_entrywise(tb));
        }
    }
}

TEST_CASE("exterior torus: diagonal pattern and counts") {
    const Ring& q = Ring::rationals();
    CHECK(exterior_torus(5, 4, 2, q.one()).equals_entrywise(RepMatrix::identity(q, 5, 4)));
    RepMatrix t = exterior_torus(6, 2, 1, q.from_int(7));
    Mat d = t.to_dense();
    int hits = 0;
    for (int i = 0; i < t.N(); ++i)
        if (d.at(i, i) == q.from_int(7)) ++hits;
    CHECK(hits == 5);  // C(5,1)
}

TEST_CASE("factors commute: product order does not matter") {
    const Ring& f7 = Ring::modular(7);
    int n = 6, m = 3;
    auto factors = exterior_transvection_factors(n, m, 2, 5, f7.from_int(3));
    CHECK(factors.size() == binomial(n - 2, m - 1));
    const SubsetIndexer& idx = subset_indexer(n, m);
    RepMatrix fwd = RepMatrix::identity(f7, n, m);
    RepMatrix bwd = RepMatrix::identity(f7, n, m);
    for (std::size_t i = 0; i < factors.size(); ++i) {
        const auto& ff = factors[i];
        const auto& fb = factors[factors.size() - 1 - i];
        std::vector<RepMatrix::Triplet> tf, tb;
        for (int d = 0; d < idx.count(); ++d) {
            tf.push_back({d, d, f7.one()});
            tb.push_back({d, d, f7.one()});
        }
        tf.push_back({idx.index_of(ff.row), idx.index_of(ff.col), ff.coeff});
        tb.push_back({idx.index_of(fb.row), idx.index_of(fb.col), fb.coeff});
        fwd = fwd * RepMatrix::from_triplets(f7, n, m, tf);
        bwd = bwd * RepMatrix::from_triplets(f7, n, m, tb);
    }
    CHECK(fwd.equals_entrywise(bwd));
    CHECK(fwd.equals_entrywise(exterior_transvection(n, m, 2, 5, f7.from_int(3))));
}

TEST_CASE("residue examples") {
    const Ring& q = Ring::rationals();
    const Ring& f5 = Ring::modular(5);
    CHECK(residue(RepMatrix::identity(q, 5, 2)) == 0);
    for (const Ring* R : {&q, &f5}) {
        RepMatrix t = exterior_transvection(6, 2, 1, 4, R->from_int(2));
        CHECK(residue(t) == binomial(4, 1));
        RepMatrix t2 = exterior_transvection(7, 3, 2, 5, R->from_int(1));
        CHECK(residue(t2) == binomial(5, 2));
    }
    RepMatrix d = cauchy_binet(torus_gl(q, 4, 1, q.from_int(3)), 2);
    CHECK(residue(d) == 3);
}

TEST_CASE("words: identity, cancellation, and the homomorphism cross-check") {
    const Ring& f5 = Ring::modular(5);
    CHECK(evaluate_word(ElementaryWord{}, 5, 2, f5).equals_entrywise(RepMatrix::identity(f5, 5, 2)));
    Elem c = f5.from_int(3);
    ElementaryWord cancel{{{1, 2, c}, {1, 2, f5.neg(c)}}};
    CHECK(evaluate_word(cancel, 5, 2).equals_entrywise(RepMatrix::identity(f5, 5, 2)));

    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 10; ++trial) {
        ElementaryWord w = random_word(5, 8, f5, rng);
        RepMatrix lhs = evaluate_word(w, 5, 2);
        RepMatrix rhs = cauchy_binet(evaluate_word_gl(w, f5, 5), 2);
        CHECK(lhs.equals_entrywise(rhs));
        CHECK(f5.is_one(det_gauss(lhs.to_dense())));  // transvections have det 1
    }
}

TEST_CASE("random_word: determinism and length") {
    const Ring& f5 = Ring::modular(5);
    ElementaryWord a = random_word(5, 8, f5, std::uint64_t{99});
    ElementaryWord b = random_word(5, 8, f5, std::uint64_t{99});
    REQUIRE(a.factors.size() == 8);
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(a.factors[i].i == b.factors[i].i);
        CHECK(a.factors[i].j == b.factors[i].j);
        CHECK(a.factors[i].xi == b.factors[i].xi);
        CHECK(a.factors[i].i != a.factors[i].j);
    }
    CHECK(random_word(5, 0, f5, std::uint64_t{1}).factors.empty());
}

TEST_CASE("homomorphism: cauchy_binet(gh) = cauchy_binet(g) cauchy_binet(h)") {
    std::mt19937_64 rng(47);
    const Ring& f7 = Ring::modular(7);
    const Ring& q = Ring::rationals();
    struct Case { int n, m; };
    for (Case c : {Case{4, 2}, Case{5, 2}, Case{6, 2}, Case{6, 3}}) {
        for (const Ring* R : {&f7, &q}) {
            for (int trial = 0; trial < 5; ++trial) {
                Mat g = random_matrix(*R, c.n, rng, 5);
                Mat h = random_matrix(*R, c.n, rng, 5);
                RepMatrix lhs = cauchy_binet(g * h, c.m);
                RepMatrix rhs = cauchy_binet(g, c.m) * cauchy_binet(h, c.m);
                CHECK(lhs.equals_entrywise(rhs));
            }
        }
    }
}

TEST_CASE("Sylvester-Franke: det of the minor matrix is a det power") {
    std::mt19937_64 rng(53);
    const Ring& f7 = Ring::modular(7);
    for (int trial = 0; trial < 10; ++trial) {
        Mat g = random_invertible(f7, 5, rng);
        Elem lhs = det_gauss(cauchy_binet(g, 2).to_dense());
        Elem rhs = f7.pow(det_gauss(g), binomial(4, 1));
        CHECK(lhs == rhs);
    }
}

TEST_CASE("representation matrix JSON-facing storage invariants") {
    const Ring& q = Ring::rationals();
    RepMatrix sparse = exterior_transvection(5, 2, 1, 3, q.from_int(2));
    RepMatrix dense = RepMatrix::from_dense(q, 5, 2, sparse.to_dense());
    CHECK(sparse.equals_entrywise(dense));
    CHECK_FALSE(sparse.is_dense());
    CHECK(dense.is_dense());
}
