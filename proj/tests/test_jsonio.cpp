#include "doctest.h"

#include "extpow/jsonio.hpp"

#include <random>

using namespace extpow;

TEST_CASE("representation matrices round-trip through JSON bit-exactly") {
    std::mt19937_64 rng(311);
    for (const char* tok : {"Q", "Z/7", "Z/6", "poly(Z; xi)"}) {
        const Ring& R = Ring::parse(tok);
        RepMatrix t = exterior_transvection(5, 2, 1, 3, R.kind() == RingKind::Polynomial
                                                            ? R.var(0)
                                                            : R.from_int(3));
        Json j1 = repmatrix_to_json(t);
        RepMatrix back = repmatrix_from_json(j1);
        CHECK(repmatrix_to_json(back).dump() == j1.dump());
        CHECK(back.equals_entrywise(t));

        Mat d(R, 6, 6);
        for (int r = 0; r < 6; ++r)
            for (int c = 0; c < 6; ++c) d.at(r, c) = R.from_int(static_cast<long long>(rng() % 9) - 4);
        RepMatrix dense = RepMatrix::from_dense(R, 4, 2, std::move(d));
        Json j2 = repmatrix_to_json(dense);
        CHECK(repmatrix_to_json(repmatrix_from_json(j2)).dump() == j2.dump());
    }
}

TEST_CASE("form serialization carries blocks and values") {
    const Ring& q = Ring::rationals();
    MultilinearForm f = form_polarized(q, 4, 2, {1, 2, 3, 4});
    Json j = form_to_json(f);
    CHECK(j["k"] == 2);
    CHECK(j["coeffs"].size() == 3 * 2);  // ordered partitions of a 4-set into 2-blocks
    CHECK(j["coeffs"][0]["blocks"].size() == 2);
}
