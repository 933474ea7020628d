// Command-line front door: every verification the library offers, emitted as
// machine-readable JSON with deterministic content for fixed seeds.

#include "CLI11.hpp"

#include "extpow/jsonio.hpp"
#include "extpow/liealg.hpp"
#include "extpow/parallel.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>

using namespace extpow;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIndeterminate = 3;

struct Out {
    bool pretty = false;
    std::string path;  // empty = stdout

    int emit(const Json& j, int code) const {
        std::string text = pretty ? j.dump(2) : j.dump();
        text += "\n";
        if (path.empty()) {
            std::fputs(text.c_str(), stdout);
        } else {
            std::ofstream f(path, std::ios::binary);
            if (!f) {
                std::fprintf(stderr, "cannot open output file: %s\n", path.c_str());
                return kExitUsage;
            }
            f << text;
        }
        return code;
    }
};

Json params_json(int n, int m, const std::string& ring) {
    return Json{{"n", n}, {"m", m}, {"ring", ring}};
}

// ---------------------------------------------------------------------------
// rep
// ---------------------------------------------------------------------------

int cmd_rep(const Out& out, int n, int m, const std::string& ring_tok,
            const std::string& transvection, int torus, const std::string& word,
            const std::string& matrix, const std::string& xi_text) {
    const Ring& base = Ring::parse(ring_tok);
    Json result;
    Json j;
    j["schema"] = 1;
    j["command"] = "rep";
    j["params"] = params_json(n, m, ring_tok);

    if (!transvection.empty()) {
        auto comma = transvection.find(',');
        if (comma == std::string::npos) throw std::invalid_argument("--transvection wants i,j");
        int i = std::stoi(transvection.substr(0, comma));
        int jj = std::stoi(transvection.substr(comma + 1));
        const Ring& R = xi_text.empty() ? Ring::polynomial(base, {"xi"}) : base;
        Elem xi = xi_text.empty() ? R.var(0) : base.parse_elem(xi_text);
        auto factors = exterior_transvection_factors(n, m, i, jj, xi);
        Json fl = Json::array();
        for (const auto& f : factors)
            fl.push_back(Json{{"row", f.row.str()}, {"col", f.col.str()}, {"coeff", R.print(f.coeff)}});
        result["kind"] = "transvection";
        result["i"] = i;
        result["j"] = jj;
        result["factors"] = std::move(fl);
        result["matrix"] = repmatrix_to_json(exterior_transvection(n, m, i, jj, xi));
    } else if (torus > 0) {
        const Ring& R = xi_text.empty() ? Ring::polynomial(base, {"xi"}) : base;
        Elem xi = xi_text.empty() ? R.var(0) : base.parse_elem(xi_text);
        RepMatrix t = exterior_torus(n, m, torus, xi);
        Json diag = Json::array();
        Mat d = t.to_dense();
        for (int idx = 0; idx < t.N(); ++idx) diag.push_back(R.print(d.at(idx, idx)));
        result["kind"] = "torus";
        result["i"] = torus;
        result["diag"] = std::move(diag);
        result["matrix"] = repmatrix_to_json(t);
    } else if (!word.empty()) {
        ElementaryWord w;
        std::size_t start = 0;
        while (start < word.size()) {
            auto semi = word.find(';', start);
            std::string part = word.substr(start, semi == std::string::npos ? semi : semi - start);
            auto c1 = part.find(',');
            auto c2 = part.find(',', c1 + 1);
            if (c1 == std::string::npos || c2 == std::string::npos)
                throw std::invalid_argument("--word wants i,j,xi;i,j,xi;...");
            w.factors.push_back({std::stoi(part.substr(0, c1)),
                                 std::stoi(part.substr(c1 + 1, c2 - c1 - 1)),
                                 base.parse_elem(part.substr(c2 + 1))});
            if (semi == std::string::npos) break;
            start = semi + 1;
        }
        result["kind"] = "word";
        result["length"] = w.factors.size();
        result["matrix"] = repmatrix_to_json(evaluate_word(w, n, m));
    } else if (!matrix.empty()) {
        result["kind"] = "matrix";
        if (matrix == "identity") {
            result["matrix"] = repmatrix_to_json(RepMatrix::identity(base, n, m));
        } else {
            std::ifstream f(matrix);
            if (!f) throw std::invalid_argument("cannot read matrix file: " + matrix);
            Json mj = Json::parse(f);
            result["matrix"] = repmatrix_to_json(repmatrix_from_json(mj));
        }
    } else {
        throw std::invalid_argument("rep wants one of --transvection/--torus/--word/--matrix");
    }
    j["result"] = std::move(result);
    return out.emit(j, kExitPass);
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct VerifyOutcome {
    Json report;
    bool pass = true;
    bool indeterminate = false;
};

VerifyOutcome run_verify(const std::string& kind, int n, int m, const Ring& ring, int samples,
                         std::uint64_t seed) {
    VerifyOutcome out;
    std::mt19937_64 rng(seed);
    Json list = Json::array();
    if (kind == "plucker") {
        for (int s = 0; s < samples; ++s) {
            ElementaryWord w = random_word(n, 8, ring, rng);
            Verdict v;
            try {
                v = stabilizes_plucker(evaluate_word(w, n, m));
            } catch (const UnsupportedRingError&) {
                v = Verdict::Indeterminate;
            }
            list.push_back(Json{{"index", s}, {"kind", "word"}, {"verdict", verdict_str(v)}});
            out.pass = out.pass && v == Verdict::True;
            out.indeterminate = out.indeterminate || v == Verdict::Indeterminate;
        }
        // One planted non-member: a unit entry between distant weights.
        const SubsetIndexer& idx = subset_indexer(n, m);
        int a = -1, b = -1;
        for (int i = 0; i < idx.count() && a < 0; ++i)
            for (int jj = 0; jj < idx.count() && a < 0; ++jj)
                if (i != jj && distance(idx.at(i), idx.at(jj)) <= m - 2) {
                    a = i;
                    b = jj;
                }
        if (a >= 0) {
            Mat bad = Mat::identity(ring, idx.count());
            bad.at(a, b) = ring.one();
            Verdict v;
            try {
                v = stabilizes_plucker(RepMatrix::from_dense(ring, n, m, std::move(bad)));
            } catch (const UnsupportedRingError&) {
                v = Verdict::Indeterminate;
            }
            list.push_back(Json{{"index", samples}, {"kind", "planted"}, {"verdict", verdict_str(v)}});
            out.pass = out.pass && v == Verdict::False;
            out.indeterminate = out.indeterminate || v == Verdict::Indeterminate;
        }
    } else if (kind == "form") {
        if (m < 1 || n % m != 0 || n / m < 3)
            throw std::invalid_argument("verify --kind form needs n/m an integer >= 3");
        MultilinearForm f = form_polarized(ring, n, m);
        for (int s = 0; s < samples; ++s) {
            Mat h = random_invertible(ring, n, rng);
            Elem dh = det(h);
            auto lambda = semi_invariance_scalar(cauchy_binet(h, m), f);
            bool ok = lambda.has_value() && *lambda == dh;
            list.push_back(Json{{"index", s},
                                {"lambda", lambda ? ring.print(*lambda) : "absent"},
                                {"det", ring.print(dh)},
                                {"verdict", ok ? "true" : "false"}});
            out.pass = out.pass && ok;
        }
    } else if (kind == "ideal") {
        if (m < 1 || n % m == 0 || n / m < 2)
            throw std::invalid_argument("verify --kind ideal needs n not divisible by m, floor(n/m) >= 2");
        auto gens = ideal_F_generators(ring, n, m);
        for (int s = 0; s < samples; ++s) {
            Mat h = random_invertible(ring, n, rng);
            RepMatrix g = cauchy_binet(h, m);
            IdealStabResult res = stabilizes_ideal_F(g, gens);
            bool ok = res.verdict == Verdict::True && res.witness &&
                      verify_ideal_witness(g, gens, *res.witness);
            Json entry{{"index", s}, {"verdict", verdict_str(res.verdict)}};
            if (res.witness) entry["witness"] = ideal_witness_to_json(ring, *res.witness);
            list.push_back(std::move(entry));
            out.pass = out.pass && ok;
            out.indeterminate = out.indeterminate || res.verdict == Verdict::Indeterminate;
        }
    } else {
        throw std::invalid_argument("unknown verify kind: " + kind);
    }
    out.report = std::move(list);
    return out;
}

int cmd_verify(const Out& out, const std::string& kind, int n, int m, const std::string& ring_tok,
               int samples, std::uint64_t seed, bool crt) {
    const Ring& ring = Ring::parse(ring_tok);
    Json j;
    j["schema"] = 1;
    j["command"] = "verify";
    j["kind"] = kind;
    j["params"] = params_json(n, m, ring_tok);
    j["samples"] = samples;
    j["seed"] = seed;
    VerifyOutcome main = run_verify(kind, n, m, ring, samples, seed);
    j["results"] = std::move(main.report);
    if (crt && ring.kind() == RingKind::Modular && !ring.is_field()) {
        // Composite modulus: report per-prime-factor verdicts as well.
        Json per_prime = Json::array();
        Int k = ring.modulus();
        for (Int p = 2; k > 1; ++p) {
            if (k % p != 0) continue;
            while (k % p == 0) k /= p;
            const Ring& fp = Ring::modular(p);
            VerifyOutcome sub = run_verify(kind, n, m, fp, samples, seed);
            per_prime.push_back(Json{{"prime", p.str()},
                                     {"results", std::move(sub.report)},
                                     {"pass", sub.pass}});
            main.pass = main.pass && sub.pass;
            main.indeterminate = main.indeterminate && sub.indeterminate;
        }
        j["per_prime_factor"] = std::move(per_prime);
    }
    j["pass"] = main.pass && !main.indeterminate;
    if (main.indeterminate) {
        j["indeterminate"] = true;
        return out.emit(j, kExitIndeterminate);
    }
    return out.emit(j, main.pass ? kExitPass : kExitFail);
}

// ---------------------------------------------------------------------------
// liedim
// ---------------------------------------------------------------------------

int cmd_liedim(const Out& out, int n, int m, const std::string& field_tok,
               const std::string& mode) {
    const Ring& field = Ring::parse(field_tok);
    Json j;
    j["schema"] = 1;
    j["command"] = "liedim";
    j["n"] = n;
    j["m"] = m;
    j["field"] = field_tok;
    j["mode"] = mode;
    std::size_t dim = 0;
    long long bound = 0;
    std::size_t relations_checked = 0;
    bool relations_pass = true;
    if (mode == "plain" || mode == "extended") {
        bool extended = mode == "extended";
        dim = lie_dim_form_stabilizer(n, m, field, extended).dimension();
        bound = extended ? static_cast<long long>(n) * n : static_cast<long long>(n) * n - 1;
        RelationsReport rel = structural_relations_check(n, m, field, extended);
        relations_checked = rel.vanishing_checked + rel.offdiag_checked + rel.diagonal_checked;
        relations_pass = rel.pass;
        if (!extended) relations_pass = relations_pass && verify_diagonal_relation(n, m, field);
    } else if (mode == "ideal") {
        dim = lie_dim_ideal_stabilizer(n, m, field).dimension();
        bound = static_cast<long long>(n) * n;
    } else if (mode == "plucker") {
        PluckerSet ps = plucker_set(field, n, m);
        dim = lie_stabilizer_system(ps.polys, field).dimension();
        bound = static_cast<long long>(n) * n;
    } else {
        throw std::invalid_argument("unknown liedim mode: " + mode);
    }
    bool pass = static_cast<long long>(dim) <= bound && relations_pass;
    j["dimension"] = dim;
    j["bound"] = bound;
    j["relations_checked"] = relations_checked;
    j["pass"] = pass;
    return out.emit(j, pass ? kExitPass : kExitFail);
}

// ---------------------------------------------------------------------------
// normalizer
// ---------------------------------------------------------------------------

int cmd_normalizer(const Out& out, int n, int m, const std::string& ring_tok, int samples,
                   std::uint64_t seed) {
    const Ring& ring = Ring::parse(ring_tok);
    NormalizerReport rep = normalizer_equalities_demo(n, m, ring, samples, seed);
    Json j;
    j["schema"] = 1;
    j["command"] = "normalizer";
    Json body = normalizer_report_to_json(rep);
    for (auto& [key, val] : body.items()) j[key] = val;
    return out.emit(j, rep.pass ? kExitPass : kExitFail);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exterior-power representations of GL_n over exact rings"};
    app.require_subcommand(1);
    app.fallthrough();
    Out out;
    app.add_flag("--pretty", out.pretty, "indented JSON (content order unchanged)");
    app.add_option("--output", out.path, "write the JSON report to a file");

    int n = 0, m = 0, torus = 0, samples = 10;
    std::uint64_t seed = 0;
    std::string ring_tok = "Q", kind, mode = "plain";
    std::string transvection, word, matrix, xi_text;
    bool crt = false;

    CLI::App* rep = app.add_subcommand("rep", "construct representation matrices");
    rep->add_option("--n", n)->required();
    rep->add_option("--m", m)->required();
    rep->add_option("--ring", ring_tok);
    rep->add_option("--transvection", transvection, "i,j");
    rep->add_option("--torus", torus, "i");
    rep->add_option("--word", word, "i,j,xi;i,j,xi;...");
    rep->add_option("--matrix", matrix, "identity or a JSON file path");
    rep->add_option("--xi", xi_text, "transvection/torus parameter (default: indeterminate)");

    CLI::App* verify = app.add_subcommand("verify", "stabilizer verifications over samples");
    verify->add_option("--kind", kind, "plucker|form|ideal")->required();
    verify->add_option("--n", n)->required();
    verify->add_option("--m", m)->required();
    verify->add_option("--ring", ring_tok);
    verify->add_option("--samples", samples);
    verify->add_option("--seed", seed);
    verify->add_flag("--crt", crt, "composite moduli: also report per prime factor");

    CLI::App* liedim = app.add_subcommand("liedim", "Lie algebra dimensions");
    liedim->add_option("--n", n)->required();
    liedim->add_option("--m", m)->required();
    liedim->add_option("--field", ring_tok)->required();
    liedim->add_option("--mode", mode, "plain|extended|ideal|plucker");

    CLI::App* norm = app.add_subcommand("normalizer", "normalizer-theorem sample verification");
    norm->add_option("--n", n)->required();
    norm->add_option("--m", m)->required();
    norm->add_option("--ring", ring_tok);
    norm->add_option("--samples", samples);
    norm->add_option("--seed", seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (rep->parsed())
            return cmd_rep(out, n, m, ring_tok, transvection, torus, word, matrix, xi_text);
        if (verify->parsed()) return cmd_verify(out, kind, n, m, ring_tok, samples, seed, crt);
        if (liedim->parsed()) return cmd_liedim(out, n, m, ring_tok, mode);
        if (norm->parsed()) return cmd_normalizer(out, n, m, ring_tok, samples, seed);
    } catch (const UnsupportedRingError& e) {
        std::fprintf(stderr, "indeterminate/unsupported: %s\n", e.what());
        return kExitIndeterminate;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }
    return kExitUsage;
}
