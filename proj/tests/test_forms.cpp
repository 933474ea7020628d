#include "doctest.h"

#include "extpow/forms.hpp"

#include <random>

using namespace extpow;

namespace {

TupleKey key_of(const SubsetIndexer& idx, std::initializer_list<std::initializer_list<int>> blocks) {
    std::vector<int> ids;
    for (auto b : blocks) ids.push_back(idx.index_of(Subset(idx.n(), b)));
    return tuple_encode(ids);
}

}  // namespace

TEST_CASE("plucker_poly: the Gr(2,4) relation with exact signs") {
    const Ring& q = Ring::rationals();
    Elem f = plucker_poly(q, 4, 2, Subset(4, {1}), Subset(4, {2, 3, 4}));
    const Ring& P = f.ring();
    const SubsetIndexer& idx = subset_indexer(4, 2);
    auto var_of = [&](std::initializer_list<int> e) { return P.var(idx.index_of(Subset(4, e))); };
    Elem expect = P.mul(P.from_int(-1), P.mul(var_of({1, 2}), var_of({3, 4})));
    expect = P.add(expect, P.mul(var_of({1, 3}), var_of({2, 4})));
    expect = P.sub(expect, P.mul(var_of({1, 4}), var_of({2, 3})));
    CHECK(f == expect);

    // Forced repeats throughout give the zero polynomial.
    Elem z = plucker_poly(q, 4, 2, Subset(4, {1}), Subset(4, {1, 2, 3}));
    CHECK(P.is_zero(z));
}

TEST_CASE("plucker_set: counts, normalization, duplicates removed") {
    const Ring& q = Ring::rationals();
    CHECK(plucker_set(q, 4, 2).polys.size() == 1);
    CHECK(plucker_set(q, 5, 2).polys.size() == 5);
    CHECK(plucker_set(q, 6, 2).polys.size() == 15);
    CHECK(plucker_set(q, 5, 1).polys.empty());
    for (const Elem& f : plucker_set(q, 5, 2).polys) {
        CHECK(poly_terms(f).front().coeff == q.one());
        CHECK(poly_total_degree(f) == 2);
    }
}

TEST_CASE("independent_mod_p") {
    const Ring& z = Ring::integers();
    CHECK(independent_mod_p(plucker_set(z, 5, 2), 3));
    auto gens = ideal_F_generators(z, 7, 2);
    CHECK(independent_mod_p(gens, 2));
    auto dup = gens;
    dup.push_back(gens.front());
    CHECK_FALSE(independent_mod_p(dup, 2));
}

TEST_CASE("form_polarized: signs and support counts") {
    const Ring& q = Ring::rationals();
    MultilinearForm f = form_polarized(q, 6, 2);
    CHECK(f.k() == 3);
    CHECK(f.coeffs().size() == 90);
    const SubsetIndexer& idx = subset_indexer(6, 2);
    const Elem* c1 = f.find(key_of(idx, {{1, 2}, {3, 4}, {5, 6}}));
    REQUIRE(c1 != nullptr);
    CHECK(*c1 == q.one());
    const Elem* c2 = f.find(key_of(idx, {{1, 3}, {2, 4}, {5, 6}}));
    REQUIRE(c2 != nullptr);
    CHECK(*c2 == q.from_int(-1));
    // Every coefficient is +-1 and every key partitions [6].
    for (const auto& [key, c] : f.coeffs()) {
        CHECK((c == q.one() || c == q.from_int(-1)));
        auto blocks = f.blocks_of(key);
        std::uint64_t u = 0;
        for (const auto& b : blocks) {
            CHECK((u & b.mask()) == 0);
            u |= b.mask();
        }
        CHECK(u == Subset(6, {1, 2, 3, 4, 5, 6}).mask());
    }
}

TEST_CASE("sign identity from the invariance proof") {
    // For disjoint partitions i L1 | j L2 | rest, in the convention-free
    // product form that the transvection formula induces:
    // sign(L1,i)sign(L1,j) a_{iL1, jL2, ...} + sign(L2,i)sign(L2,j) a_{jL1, iL2, ...} = 0.
    const Ring& q = Ring::rationals();
    for (int m : {2, 3}) {
        int n = 3 * m;
        MultilinearForm f = form_polarized(q, n, m);
        const SubsetIndexer& idx = subset_indexer(n, m);
        std::mt19937_64 rng(61);
        int checked = 0;
        for (const auto& [key, c] : f.coeffs()) {
            auto blocks = f.blocks_of(key);
            int i = blocks[0].elems[rng() % m];
            int j = blocks[1].elems[rng() % m];
            std::vector<int> L1, L2;
            for (int e : blocks[0].elems)
                if (e != i) L1.push_back(e);
            for (int e : blocks[1].elems)
                if (e != j) L2.push_back(e);
            auto insert_sorted = [](std::vector<int> base, int v) {
                base.push_back(v);
                std::sort(base.begin(), base.end());
                return base;
            };
            std::vector<int> jl1 = insert_sorted(L1, j), il2 = insert_sorted(L2, i);
            std::vector<int> ids1, ids2;
            ids1.push_back(idx.index_of(Subset(n, blocks[0].elems)));
            ids2.push_back(idx.index_of(Subset(n, jl1)));
            ids1.push_back(idx.index_of(Subset(n, blocks[1].elems)));
            ids2.push_back(idx.index_of(Subset(n, il2)));
            for (int t = 2; t < f.k(); ++t) {
                ids1.push_back(idx.index_of(blocks[t]));
                ids2.push_back(idx.index_of(blocks[t]));
            }
            const Elem* a1 = f.find(tuple_encode(ids1));
            const Elem* a2 = f.find(tuple_encode(ids2));
            REQUIRE(a1 != nullptr);
            REQUIRE(a2 != nullptr);
            int s1 = sign_adjoin(Subset(n, L1), i) * sign_adjoin(Subset(n, L1), j);
            int s2 = sign_adjoin(Subset(n, L2), i) * sign_adjoin(Subset(n, L2), j);
            Elem lhs = q.add(q.mul(q.from_int(s1), *a1), q.mul(q.from_int(s2), *a2));
            CHECK(q.is_zero(lhs));
            if (++checked > 40) break;
        }
    }
}

TEST_CASE("evaluate_form: partitions, overlaps, multilinearity") {
    const Ring& f7 = Ring::modular(7);
    MultilinearForm f = form_polarized(f7, 6, 2);
    const SubsetIndexer& idx = subset_indexer(6, 2);
    auto basis_vec = [&](std::initializer_list<int> elems) {
        std::vector<Elem> v(idx.count(), f7.zero());
        v[idx.index_of(Subset(6, elems))] = f7.one();
        return v;
    };
    CHECK(evaluate_form(f, {basis_vec({1, 2}), basis_vec({3, 4}), basis_vec({5, 6})}) == f7.one());
    CHECK(f7.is_zero(evaluate_form(f, {basis_vec({1, 2}), basis_vec({2, 3}), basis_vec({5, 6})})));

    std::mt19937_64 rng(67);
    auto random_vec = [&] {
        std::vector<Elem> v(idx.count(), f7.zero());
        for (auto& e : v) e = f7.from_int(static_cast<long long>(rng() % 7));
        return v;
    };
    for (int t = 0; t < 10; ++t) {
        auto x1 = random_vec(), x2 = random_vec(), x3 = random_vec();
        Elem c = f7.from_int(static_cast<long long>(rng() % 7));
        auto cx1 = x1;
        for (auto& e : cx1) e = f7.mul(c, e);
        CHECK(evaluate_form(f, {cx1, x2, x3}) == f7.mul(c, evaluate_form(f, {x1, x2, x3})));
    }
}

TEST_CASE("act_on_form: identity, torus scaling, transvection invariance") {
    const Ring& f7 = Ring::modular(7);
    MultilinearForm f = form_polarized(f7, 6, 2);
    CHECK(act_on_form(RepMatrix::identity(f7, 6, 2), f) == f);

    Elem xi = f7.from_int(3);
    MultilinearForm scaled = act_on_form(exterior_torus(6, 2, 4, xi), f);
    REQUIRE(scaled.coeffs().size() == f.coeffs().size());
    for (std::size_t i = 0; i < f.coeffs().size(); ++i) {
        CHECK(scaled.coeffs()[i].first == f.coeffs()[i].first);
        CHECK(scaled.coeffs()[i].second == f7.mul(xi, f.coeffs()[i].second));
    }

    CHECK(act_on_form(exterior_transvection(6, 2, 2, 5, xi), f) == f);
}

TEST_CASE("act_on_form kernels agree and satisfy the evaluation identity") {
    const Ring& f5 = Ring::modular(5);
    MultilinearForm f = form_polarized(f5, 6, 2);
    std::mt19937_64 rng(71);
    Mat h = random_invertible(f5, 6, rng);
    RepMatrix g = cauchy_binet(h, 2);
    MultilinearForm a = act_on_form_serial(g, f);
    MultilinearForm b = act_on_form_omp(g, f);
    CHECK(a == b);
    // evaluate(act(g,f), xs) = evaluate(f, g*xs)
    const SubsetIndexer& idx = subset_indexer(6, 2);
    Mat gd = g.to_dense();
    for (int t = 0; t < 5; ++t) {
        std::vector<std::vector<Elem>> xs(3, std::vector<Elem>(idx.count(), f5.zero()));
        for (auto& v : xs)
            for (auto& e : v) e = f5.from_int(static_cast<long long>(rng() % 5));
        std::vector<std::vector<Elem>> gxs = xs;
        for (int l = 0; l < 3; ++l)
            for (int r = 0; r < idx.count(); ++r) {
                Elem acc = f5.zero();
                for (int c = 0; c < idx.count(); ++c) acc = f5.add(acc, f5.mul(gd.at(r, c), xs[l][c]));
                gxs[l][r] = acc;
            }
        CHECK(evaluate_form(a, xs) == evaluate_form(f, gxs));
    }
}

TEST_CASE("act_on_form composes contravariantly") {
    const Ring& f7 = Ring::modular(7);
    MultilinearForm f = form_polarized(f7, 6, 2);
    std::mt19937_64 rng(73);
    for (int t = 0; t < 5; ++t) {
        Mat a = random_invertible(f7, 6, rng);
        Mat b = random_invertible(f7, 6, rng);
        RepMatrix ga = cauchy_binet(a, 2);
        RepMatrix gb = cauchy_binet(b, 2);
        RepMatrix gab = cauchy_binet(a * b, 2);
        CHECK(act_on_form(gab, f) == act_on_form(gb, act_on_form(ga, f)));
    }
}

TEST_CASE("semi_invariance_scalar: det law, identity, and failure modes") {
    std::mt19937_64 rng(79);
    for (const Ring* R : {&Ring::modular(7), &Ring::rationals()}) {
        MultilinearForm f = form_polarized(*R, 6, 2);
        CHECK(*semi_invariance_scalar(RepMatrix::identity(*R, 6, 2), f) == R->one());
        for (int t = 0; t < 10; ++t) {
            Mat h = random_invertible(*R, 6, rng);
            auto lambda = semi_invariance_scalar(cauchy_binet(h, 2), f);
            REQUIRE(lambda.has_value());
            CHECK(*lambda == det_gauss(h));
        }
        // One diagonal entry off scales one partition coefficient only.
        Mat d = Mat::identity(*R, 15);
        d.at(0, 0) = R->from_int(2);
        CHECK_FALSE(semi_invariance_scalar(RepMatrix::from_dense(*R, 6, 2, std::move(d)), f).has_value());
    }
}

TEST_CASE("semi-invariance scalar is multiplicative") {
    const Ring& f7 = Ring::modular(7);
    MultilinearForm f = form_polarized(f7, 6, 2);
    std::mt19937_64 rng(83);
    for (int t = 0; t < 5; ++t) {
        Mat h1 = random_invertible(f7, 6, rng);
        Mat h2 = random_invertible(f7, 6, rng);
        RepMatrix g1 = cauchy_binet(h1, 2), g2 = cauchy_binet(h2, 2);
        Elem l1 = *semi_invariance_scalar(g1, f);
        Elem l2 = *semi_invariance_scalar(g2, f);
        Elem l12 = *semi_invariance_scalar(g1 * g2, f);
        CHECK(l12 == f7.mul(l1, l2));
    }
}

TEST_CASE("stabilizes_plucker: elementary images pass, planted non-member fails") {
    const Ring& q = Ring::rationals();
    const Ring& f7 = Ring::modular(7);
    std::mt19937_64 rng(89);
    for (const Ring* R : {&q, &f7}) {
        for (int t = 0; t < 5; ++t) {
            ElementaryWord w = random_word(5, 6, *R, rng);
            RepMatrix g = evaluate_word(w, 5, 2);
            CHECK(stabilizes_plucker(g) == Verdict::True);
        }
        CHECK(stabilizes_plucker(RepMatrix::identity(*R, 5, 2)) == Verdict::True);
    }
    // identity + e_{{1,2},{3,4}} in GL_10 is not in the image.
    Mat bad = Mat::identity(q, 10);
    const SubsetIndexer& idx = subset_indexer(5, 2);
    bad.at(idx.index_of(Subset(5, {1, 2})), idx.index_of(Subset(5, {3, 4}))) = q.one();
    CHECK(stabilizes_plucker(RepMatrix::from_dense(q, 5, 2, std::move(bad))) == Verdict::False);

    CHECK_THROWS_AS((void)stabilizes_plucker(RepMatrix::identity(Ring::modular(6), 5, 2)),
                    UnsupportedRingError);
}

TEST_CASE("stabilizes_plucker closed under product and inverse on samples") {
    const Ring& f7 = Ring::modular(7);
    std::mt19937_64 rng(97);
    ElementaryWord w1 = random_word(5, 5, f7, rng);
    ElementaryWord w2 = random_word(5, 5, f7, rng);
    RepMatrix g1 = evaluate_word(w1, 5, 2), g2 = evaluate_word(w2, 5, 2);
    CHECK(stabilizes_plucker(g1 * g2) == Verdict::True);
    Mat inv = *inverse_field(g1.to_dense());
    CHECK(stabilizes_plucker(RepMatrix::from_dense(f7, 5, 2, std::move(inv))) == Verdict::True);
}

TEST_CASE("ideal F generators: counts") {
    const Ring& q = Ring::rationals();
    CHECK(ideal_F_generators(q, 7, 2).size() == 7);   // C(7,6)
    CHECK(ideal_F_generators(q, 8, 3).size() == 28);  // C(8,6)
    CHECK(ideal_F_generators(q, 5, 2).size() == 5);   // C(5,4)
    CHECK_THROWS_AS((void)ideal_F_generators(q, 6, 2), std::invalid_argument);
    for (const auto& f : ideal_F_generators(q, 5, 2)) CHECK(f.k() == 2);
}

TEST_CASE("stabilizes_ideal_F: images carry witnesses, random elements fail") {
    const Ring& f5 = Ring::modular(5);
    auto gens = ideal_F_generators(f5, 5, 2);
    std::mt19937_64 rng(101);
    for (int t = 0; t < 8; ++t) {
        Mat h = random_invertible(f5, 5, rng);
        RepMatrix g = cauchy_binet(h, 2);
        IdealStabResult res = stabilizes_ideal_F(g, gens);
        REQUIRE(res.verdict == Verdict::True);
        REQUIRE(res.witness.has_value());
        CHECK(verify_ideal_witness(g, gens, *res.witness));
    }
    // Images of permutation matrices permute the generator subspaces: the
    // witness matrix is invertible with zero diagonal entries.
    {
        Mat perm(f5, 5, 5);
        int sigma[5] = {2, 3, 4, 5, 1};
        for (int c = 0; c < 5; ++c) perm.at(sigma[c] - 1, c) = f5.one();
        RepMatrix g = cauchy_binet(perm, 2);
        IdealStabResult res = stabilizes_ideal_F(g, gens);
        REQUIRE(res.verdict == Verdict::True);
        bool some_zero_diag = false;
        for (const Elem& l : res.witness->lambdas) some_zero_diag = some_zero_diag || f5.is_zero(l);
        CHECK(some_zero_diag);
        CHECK(verify_ideal_witness(g, gens, *res.witness));
    }
    IdealStabResult id_res = stabilizes_ideal_F(RepMatrix::identity(f5, 5, 2), gens);
    REQUIRE(id_res.verdict == Verdict::True);
    for (const Elem& l : id_res.witness->lambdas) CHECK(l == f5.one());
    for (const auto& row : id_res.witness->cross)
        for (const Elem& c : row) CHECK(f5.is_zero(c));

    Mat r = random_invertible(f5, 10, rng);
    CHECK(stabilizes_ideal_F(RepMatrix::from_dense(f5, 5, 2, std::move(r)), gens).verdict ==
          Verdict::False);
}

TEST_CASE("divisible case: the witness degenerates to the single scalar") {
    const Ring& f5 = Ring::modular(5);
    std::vector<MultilinearForm> single{form_polarized(f5, 6, 2)};
    std::mt19937_64 rng(103);
    Mat h = random_invertible(f5, 6, rng);
    RepMatrix g = cauchy_binet(h, 2);
    IdealStabResult res = stabilizes_ideal_F(g, single);
    REQUIRE(res.verdict == Verdict::True);
    CHECK(res.witness->lambdas[0] == *semi_invariance_scalar(g, single[0]));
}

TEST_CASE("semi_invariant_space: dimension one, basis proportional to f") {
    // Smallest instance n/m = 3 with m = 1: trilinear forms on R^3.
    for (const Ring* F : {&Ring::rationals(), &Ring::modular(3)}) {
        SolutionSpace s = semi_invariant_space(3, 1, *F);
        REQUIRE(s.dimension() == 1);
        MultilinearForm found = form_from_coefficient_vector(*F, 3, 1, s.basis[0]);
        MultilinearForm f = form_polarized(*F, 3, 1);
        REQUIRE(found.coeffs().size() == f.coeffs().size());
        Elem ratio = F->mul(found.coeffs().front().second, F->inv(f.coeffs().front().second));
        for (std::size_t i = 0; i < f.coeffs().size(); ++i) {
            CHECK(found.coeffs()[i].first == f.coeffs()[i].first);
            CHECK(found.coeffs()[i].second == F->mul(ratio, f.coeffs()[i].second));
        }
    }
    CHECK_THROWS_AS((void)semi_invariant_space(4, 2, Ring::rationals()), std::invalid_argument);
}

TEST_CASE("semi_invariant_space at (9,3) over F2: the runtime-bounded instance") {
    const Ring& f2 = Ring::modular(2);
    SolutionSpace s = semi_invariant_space(9, 3, f2);
    REQUIRE(s.dimension() == 1);
    MultilinearForm found = form_from_coefficient_vector(f2, 9, 3, s.basis[0]);
    MultilinearForm f = form_polarized(f2, 9, 3);
    CHECK(found == f);  // all polarization coefficients are 1 mod 2
}

TEST_CASE("stabilizes_ideal_F rejects a recorded random GL_21(F5) element") {
    const Ring& f5 = Ring::modular(5);
    auto gens = ideal_F_generators(f5, 7, 2);
    std::mt19937_64 rng(424242);
    Mat r = random_invertible(f5, 21, rng);
    CHECK(stabilizes_ideal_F(RepMatrix::from_dense(f5, 7, 2, std::move(r)), gens).verdict ==
          Verdict::False);
}
