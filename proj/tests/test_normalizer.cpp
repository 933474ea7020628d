#include "doctest.h"

#include "extpow/normalizer.hpp"

#include <random>

using namespace extpow;

TEST_CASE("in_G_f / in_Gbar_f: word images, torus scalars, degenerate inputs") {
    const Ring& f5 = Ring::modular(5);
    MultilinearForm f = form_polarized(f5, 6, 2);
    std::mt19937_64 rng(107);

    RepMatrix word = evaluate_word(random_word(6, 6, f5, rng), 6, 2);
    CHECK(in_G_f(word, f).result == Verdict::True);
    CHECK(in_G_f(RepMatrix::identity(f5, 6, 2), f).result == Verdict::True);

    Elem xi = f5.from_int(2);
    MembershipVerdict torus = in_G_f(exterior_torus(6, 2, 1, xi), f);
    CHECK(torus.result == Verdict::False);
    MembershipVerdict torus_bar = in_Gbar_f(exterior_torus(6, 2, 1, xi), f);
    CHECK(torus_bar.result == Verdict::True);
    CHECK(*torus_bar.lambda == xi);

    Mat h = random_invertible(f5, 6, rng);
    MembershipVerdict img = in_Gbar_f(cauchy_binet(h, 2), f);
    CHECK(img.result == Verdict::True);
    CHECK(*img.lambda == det_gauss(h));

    // zeta * identity scales by zeta^k
    Elem zeta = f5.from_int(3);
    Mat scal = Mat::identity(f5, 15).scaled(zeta);
    MembershipVerdict sv = in_Gbar_f(RepMatrix::from_dense(f5, 6, 2, std::move(scal)), f);
    CHECK(sv.result == Verdict::True);
    CHECK(*sv.lambda == f5.pow(zeta, 3));

    // one row zeroed: not even invertible, no scalar exists
    Mat broken = cauchy_binet(h, 2).to_dense();
    for (int c = 0; c < 15; ++c) broken.at(3, c) = f5.zero();
    CHECK(in_Gbar_f(RepMatrix::from_dense(f5, 6, 2, std::move(broken)), f).result == Verdict::False);
}

TEST_CASE("in_Gbar_F wraps the ideal predicate with a witness") {
    const Ring& f5 = Ring::modular(5);
    auto gens = ideal_F_generators(f5, 5, 2);
    std::mt19937_64 rng(109);
    Mat h = random_invertible(f5, 5, rng);
    MembershipVerdict v = in_Gbar_F(cauchy_binet(h, 2), gens);
    CHECK(v.result == Verdict::True);
    REQUIRE(v.ideal_witness.has_value());
    CHECK(verify_ideal_witness(cauchy_binet(h, 2), gens, *v.ideal_witness));
}

TEST_CASE("transports_elementary: images pass, random elements fail with a witness") {
    const Ring& f5 = Ring::modular(5);
    MultilinearForm f = form_polarized(f5, 6, 2);
    std::mt19937_64 rng(113);

    CHECK(transports_elementary(RepMatrix::identity(f5, 6, 2), f, TargetGroup::SL).result ==
          Verdict::True);
    Mat h = random_invertible(f5, 6, rng);
    RepMatrix g = cauchy_binet(h, 2);
    CHECK(transports_elementary(g, f, TargetGroup::SL).result == Verdict::True);
    CHECK(transports_elementary(g, f, TargetGroup::GL).result == Verdict::True);

    Mat r = random_invertible(f5, 15, rng);
    MembershipVerdict bad = transports_elementary(RepMatrix::from_dense(f5, 6, 2, std::move(r)), f,
                                                  TargetGroup::SL);
    CHECK(bad.result == Verdict::False);
    CHECK(bad.failing_generator.has_value());
}

TEST_CASE("transport check agrees with direct conjugation") {
    // The production path transforms the acted form by the sparse factor;
    // the direct path builds g t g^-1 over R[xi] and tests semi-invariance.
    const Ring& f5 = Ring::modular(5);
    MultilinearForm f = form_polarized(f5, 6, 2);
    std::mt19937_64 rng(127);
    const Ring& P = Ring::polynomial(f5, {"xi"});
    MultilinearForm fP = [&] {
        std::vector<std::pair<TupleKey, Elem>> coeffs;
        for (const auto& [key, c] : f.coeffs()) coeffs.emplace_back(key, P.lift(c));
        return MultilinearForm(P, 6, 2, f.support(), std::move(coeffs));
    }();

    for (int trial = 0; trial < 2; ++trial) {
        Mat h = random_invertible(f5, 6, rng);
        RepMatrix g = cauchy_binet(h, 2);
        for (auto [i, j] : {std::pair<int, int>{1, 2}, {3, 5}, {6, 1}}) {
            RepMatrix conj = conjugated_generator(g, i, j);
            auto direct = semi_invariance_scalar(conj, fP);
            REQUIRE(direct.has_value());
            CHECK(P.is_one(*direct));  // conjugates of transvections preserve f
            CHECK(P.is_one(det(conj.to_dense())));
        }
    }

    // A deliberate non-member disagrees in the same way on both paths.
    Mat bad = Mat::identity(f5, 15);
    const SubsetIndexer& idx = subset_indexer(6, 2);
    bad.at(idx.index_of(Subset(6, {1, 2})), idx.index_of(Subset(6, {3, 4}))) = f5.one();
    RepMatrix gb = RepMatrix::from_dense(f5, 6, 2, std::move(bad));
    MembershipVerdict fast = transports_elementary(gb, f, TargetGroup::SL);
    REQUIRE(fast.result == Verdict::False);
    auto [fi, fj] = *fast.failing_generator;
    RepMatrix conj = conjugated_generator(gb, fi, fj);
    CHECK_FALSE(semi_invariance_scalar(conj, fP).has_value());
}

TEST_CASE("transporter membership is closed under product and inverse on samples") {
    const Ring& f5 = Ring::modular(5);
    MultilinearForm f = form_polarized(f5, 6, 2);
    std::mt19937_64 rng(131);
    Mat h1 = random_invertible(f5, 6, rng);
    Mat h2 = random_invertible(f5, 6, rng);
    RepMatrix g1 = cauchy_binet(h1, 2), g2 = cauchy_binet(h2, 2);
    CHECK(transports_elementary(g1 * g2, f, TargetGroup::SL).result == Verdict::True);
    RepMatrix g1inv = RepMatrix::from_dense(f5, 6, 2, *inverse_field(g1.to_dense()));
    CHECK(transports_elementary(g1inv, f, TargetGroup::SL).result == Verdict::True);
}

TEST_CASE("normalizer_equalities_demo: small deterministic run") {
    const Ring& f5 = Ring::modular(5);
    NormalizerReport rep = normalizer_equalities_demo(6, 2, f5, 3, 2024);
    CHECK(rep.pass);
    CHECK(rep.consistent);
    CHECK(rep.entries.size() == 9);  // 3 positive + 3 negative + 3 planted
    for (const auto& e : rep.entries) {
        if (e.kind == "positive") {
            CHECK(e.gbar == Verdict::True);
            CHECK(e.det_conj_ok);
        } else {
            CHECK(e.gbar == Verdict::False);
        }
        CHECK(e.consistent);
    }

    NormalizerReport empty = normalizer_equalities_demo(6, 2, f5, 0, 1);
    CHECK(empty.pass);
    CHECK(empty.entries.empty());
}
