#include "extpow/jsonio.hpp"

#include <stdexcept>

namespace extpow {

const char* verdict_str(Verdict v) {
    switch (v) {
        case Verdict::True: return "true";
        case Verdict::False: return "false";
        case Verdict::Indeterminate: return "indeterminate";
    }
    return "?";
}

Json repmatrix_to_json(const RepMatrix& g) {
    const Ring& R = g.ring();
    Json out;
    out["ring"] = R.token();
    out["n"] = g.n();
    out["m"] = g.m();
    out["index_order"] = "lex";
    if (g.is_dense()) {
        Json rows = Json::array();
        Mat d = g.to_dense();
        for (int r = 0; r < g.N(); ++r) {
            Json row = Json::array();
            for (int c = 0; c < g.N(); ++c) row.push_back(R.print(d.at(r, c)));
            rows.push_back(std::move(row));
        }
        out["entries"] = Json{{"dense", std::move(rows)}};
    } else {
        Json trips = Json::array();
        for (const auto& t : g.triplets()) trips.push_back(Json::array({t.row, t.col, R.print(t.val)}));
        out["entries"] = Json{{"triplets", std::move(trips)}};
    }
    return out;
}

RepMatrix repmatrix_from_json(const Json& j) {
    const Ring& R = Ring::parse(j.at("ring").get<std::string>());
    int n = j.at("n").get<int>();
    int m = j.at("m").get<int>();
    if (j.at("index_order").get<std::string>() != "lex")
        throw std::invalid_argument("only lexicographic index order is supported");
    const Json& entries = j.at("entries");
    if (entries.contains("dense")) {
        const Json& rows = entries.at("dense");
        std::size_t N = binomial(n, m);
        Mat d(R, N, N);
        for (std::size_t r = 0; r < N; ++r)
            for (std::size_t c = 0; c < N; ++c)
                d.at(r, c) = R.parse_elem(rows.at(r).at(c).get<std::string>());
        return RepMatrix::from_dense(R, n, m, std::move(d));
    }
    std::vector<RepMatrix::Triplet> trips;
    for (const Json& t : entries.at("triplets"))
        trips.push_back({t.at(0).get<int>(), t.at(1).get<int>(),
                         R.parse_elem(t.at(2).get<std::string>())});
    return RepMatrix::from_triplets(R, n, m, std::move(trips));
}

Json form_to_json(const MultilinearForm& f) {
    const Ring& R = f.ring();
    Json out;
    out["ring"] = R.token();
    out["n"] = f.n();
    out["m"] = f.m();
    out["k"] = f.k();
    Json v = Json::array();
    for (int e : f.support()) v.push_back(e);
    out["V"] = std::move(v);
    Json coeffs = Json::array();
    for (const auto& [key, c] : f.coeffs()) {
        Json blocks = Json::array();
        for (const Subset& b : f.blocks_of(key)) blocks.push_back(b.str());
        coeffs.push_back(Json{{"blocks", std::move(blocks)}, {"value", R.print(c)}});
    }
    out["coeffs"] = std::move(coeffs);
    return out;
}

Json plucker_to_json(const PluckerSet& set) {
    Json out;
    out["n"] = set.n;
    out["m"] = set.m;
    out["ring"] = set.poly_ring->token();
    Json gens = Json::array();
    for (const Elem& f : set.polys) gens.push_back(set.poly_ring->print(f));
    out["generators"] = std::move(gens);
    return out;
}

Json ideal_witness_to_json(const Ring& ring, const IdealStabWitness& w) {
    Json out;
    Json lambdas = Json::array();
    for (const Elem& l : w.lambdas) lambdas.push_back(ring.print(l));
    out["lambdas"] = std::move(lambdas);
    Json cross = Json::array();
    for (std::size_t j = 0; j < w.cross.size(); ++j) {
        Json row = Json::array();
        for (std::size_t l = 0; l < w.cross[j].size(); ++l)
            row.push_back(l == j ? "" : ring.print(w.cross[j][l]));
        cross.push_back(std::move(row));
    }
    out["cross"] = std::move(cross);
    return out;
}

Json normalizer_report_to_json(const NormalizerReport& rep) {
    const Ring& R = Ring::parse(rep.ring);
    Json out;
    out["params"] = Json{{"n", rep.n}, {"m", rep.m}, {"ring", rep.ring},
                         {"samples", rep.samples}, {"seed", rep.seed}};
    Json samples = Json::array();
    for (const auto& e : rep.entries) {
        Json s;
        s["kind"] = e.kind;
        s["verdicts"] = Json{{"gbar_f", verdict_str(e.gbar)},
                             {"tran_e_sl", verdict_str(e.trans_sl)},
                             {"tran_e_gl", verdict_str(e.trans_gl)}};
        Json w;
        if (e.lambda) w["lambda"] = R.print(*e.lambda);
        if (e.det_h) w["det_h"] = R.print(*e.det_h);
        if (e.kind == "positive") w["det_conjugates_one"] = e.det_conj_ok;
        if (e.failing) w["failing_generator"] = Json::array({e.failing->first, e.failing->second});
        s["witnesses"] = std::move(w);
        s["consistent"] = e.consistent;
        samples.push_back(std::move(s));
    }
    out["samples"] = std::move(samples);
    out["consistent"] = rep.consistent;
    out["pass"] = rep.pass;
    return out;
}

}  // namespace extpow
