#include "extpow/extrep.hpp"

#include "extpow/parallel.hpp"

#include <algorithm>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace extpow {

RepMatrix RepMatrix::from_dense(const Ring& ring, int n, int m, Mat mat) {
    std::size_t N = binomial(n, m);
    if (mat.rows() != N || mat.cols() != N || mat.ring_ptr() != &ring)
        throw std::invalid_argument("dense storage must be C(n,m) square over the given ring");
    RepMatrix r;
    r.ring_ = &ring;
    r.n_ = n;
    r.m_ = m;
    r.N_ = static_cast<int>(N);
    r.dense_ = true;
    r.mat_ = std::move(mat);
    return r;
}

RepMatrix RepMatrix::from_triplets(const Ring& ring, int n, int m, std::vector<Triplet> entries) {
    std::size_t N = binomial(n, m);
    for (const auto& t : entries) {
        if (t.row < 0 || t.col < 0 || t.row >= static_cast<int>(N) || t.col >= static_cast<int>(N))
            throw std::invalid_argument("triplet index out of range");
    }
    std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    RepMatrix r;
    r.ring_ = &ring;
    r.n_ = n;
    r.m_ = m;
    r.N_ = static_cast<int>(N);
    r.dense_ = false;
    r.sparse_ = std::move(entries);
    return r;
}

RepMatrix RepMatrix::identity(const Ring& ring, int n, int m) {
    std::size_t N = binomial(n, m);
    std::vector<Triplet> entries;
    entries.reserve(N);
    for (std::size_t i = 0; i < N; ++i)
        entries.push_back({static_cast<int>(i), static_cast<int>(i), ring.one()});
    return from_triplets(ring, n, m, std::move(entries));
}

Elem RepMatrix::entry(int i, int j) const {
    if (dense_) return mat_.at(i, j);
    auto it = std::lower_bound(sparse_.begin(), sparse_.end(), std::pair<int, int>(i, j),
                               [](const Triplet& t, const std::pair<int, int>& k) {
                                   return t.row != k.first ? t.row < k.first : t.col < k.second;
                               });
    if (it != sparse_.end() && it->row == i && it->col == j) return it->val;
    return ring_->zero();
}

Mat RepMatrix::to_dense() const {
    if (dense_) return mat_;
    Mat out(*ring_, N_, N_);
    for (const auto& t : sparse_) out.at(t.row, t.col) = ring_->add(out.at(t.row, t.col), t.val);
    return out;
}

RepMatrix RepMatrix::operator*(const RepMatrix& o) const {
    if (ring_ != o.ring_ || n_ != o.n_ || m_ != o.m_)
        throw std::invalid_argument("representation matrix product shape mismatch");
    const Ring& R = *ring_;
    Mat a = to_dense();
    if (!o.dense_) {
        // Right-multiply by a sparse factor: out col j accumulates col k * val.
        Mat out(R, N_, N_);
        for (const auto& t : o.sparse_) {
            for (int i = 0; i < N_; ++i) {
                const Elem& v = a.at(i, t.row);
                if (R.is_zero(v)) continue;
                out.at(i, t.col) = R.add(out.at(i, t.col), R.mul(v, t.val));
            }
        }
        return from_dense(R, n_, m_, std::move(out));
    }
    return from_dense(R, n_, m_, a * o.mat_);
}

bool RepMatrix::equals_entrywise(const RepMatrix& o) const {
    if (ring_ != o.ring_ || n_ != o.n_ || m_ != o.m_) return false;
    return to_dense() == o.to_dense();
}

// ---------------------------------------------------------------------------
// Minors and the Cauchy-Binet map
// ---------------------------------------------------------------------------

Elem minor_of(const Mat& g, const std::vector<int>& rows, const std::vector<int>& cols) {
    const Ring& R = g.ring();
    std::size_t m = rows.size();
    if (m != cols.size()) throw std::invalid_argument("minor needs equal row/column counts");
    auto a = [&](std::size_t r, std::size_t c) -> const Elem& {
        return g.at(rows[r] - 1, cols[c] - 1);
    };
    switch (m) {
        case 0: return R.one();
        case 1: return a(0, 0);
        case 2: return R.sub(R.mul(a(0, 0), a(1, 1)), R.mul(a(0, 1), a(1, 0)));
        case 3: {
            Elem s = R.mul(a(0, 0), R.sub(R.mul(a(1, 1), a(2, 2)), R.mul(a(1, 2), a(2, 1))));
            s = R.sub(s, R.mul(a(0, 1), R.sub(R.mul(a(1, 0), a(2, 2)), R.mul(a(1, 2), a(2, 0)))));
            s = R.add(s, R.mul(a(0, 2), R.sub(R.mul(a(1, 0), a(2, 1)), R.mul(a(1, 1), a(2, 0)))));
            return s;
        }
        default: {
            Mat sub(R, m, m);
            for (std::size_t r = 0; r < m; ++r)
                for (std::size_t c = 0; c < m; ++c) sub.at(r, c) = a(r, c);
            return det(sub);
        }
    }
}

namespace {

RepMatrix cauchy_binet_impl(const Mat& g, int m, bool parallel) {
    if (g.rows() != g.cols()) throw std::invalid_argument("cauchy_binet needs a square matrix");
    int n = static_cast<int>(g.rows());
    if (m < 1 || m > n) throw std::invalid_argument("cauchy_binet needs 1 <= m <= n");
    const Ring& R = g.ring();
    SubsetIndexer idx(n, m);
    const int N = idx.count();
    Mat out(R, N, N);
    const long long total = static_cast<long long>(N) * N;
#ifdef _OPENMP
    #pragma omp parallel for schedule(dynamic, 16) num_threads(par::max_threads()) if (parallel)
#endif
    for (long long t = 0; t < total; ++t) {
        int i = static_cast<int>(t / N);
        int j = static_cast<int>(t % N);
        out.at(i, j) = minor_of(g, idx.at(i).elems, idx.at(j).elems);
    }
    (void)parallel;
    return RepMatrix::from_dense(R, n, m, std::move(out));
}

}  // namespace

RepMatrix cauchy_binet_serial(const Mat& g, int m) { return cauchy_binet_impl(g, m, false); }
RepMatrix cauchy_binet_omp(const Mat& g, int m) { return cauchy_binet_impl(g, m, true); }
RepMatrix cauchy_binet(const Mat& g, int m) {
    return cauchy_binet_impl(g, m, par::parallel_enabled());
}

// ---------------------------------------------------------------------------
// Closed-form generators
// ---------------------------------------------------------------------------

std::vector<TransvectionFactor> exterior_transvection_factors(int n, int m, int i, int j,
                                                              const Elem& xi) {
    if (i == j) throw std::invalid_argument("transvection needs i != j");
    if (i < 1 || j < 1 || i > n || j > n) throw std::invalid_argument("transvection index out of range");
    if (m < 1 || m > n) throw std::invalid_argument("transvection needs 1 <= m <= n");
    const Ring& R = xi.ring();
    std::vector<TransvectionFactor> out;
    std::vector<int> rest;
    for (int e = 1; e <= n; ++e)
        if (e != i && e != j) rest.push_back(e);
    // L runs over (m-1)-subsets of [n] \ {i,j}; for m = 1 only L = {} occurs.
    std::vector<std::vector<int>> lsets;
    if (m == 1) {
        lsets.push_back({});
    } else if (m - 1 > static_cast<int>(rest.size())) {
        // No (m-1)-subsets avoid {i,j}: the exterior image is the identity.
    } else {
        for (const Subset& s : enumerate_subsets(static_cast<int>(rest.size()), m - 1)) {
            std::vector<int> elems;
            for (int pos : s.elems) elems.push_back(rest[pos - 1]);
            lsets.push_back(std::move(elems));
        }
    }
    for (const auto& L : lsets) {
        std::vector<int> li = L, lj = L;
        li.push_back(i);
        lj.push_back(j);
        std::sort(li.begin(), li.end());
        std::sort(lj.begin(), lj.end());
        Subset Ls(n, L);
        int sgn = sign_adjoin(Ls, i) * sign_adjoin(Ls, j);
        Elem coeff = sgn < 0 ? R.neg(xi) : xi;
        out.push_back({Subset(n, li), Subset(n, lj), std::move(coeff)});
    }
    return out;
}

RepMatrix exterior_transvection(int n, int m, int i, int j, const Elem& xi) {
    const Ring& R = xi.ring();
    SubsetIndexer idx(n, m);
    std::vector<RepMatrix::Triplet> entries;
    entries.reserve(idx.count() + binomial(n - 2, m - 1));
    for (int d = 0; d < idx.count(); ++d) entries.push_back({d, d, R.one()});
    for (auto& f : exterior_transvection_factors(n, m, i, j, xi)) {
        if (R.is_zero(f.coeff)) continue;
        entries.push_back({idx.index_of(f.row), idx.index_of(f.col), std::move(f.coeff)});
    }
    return RepMatrix::from_triplets(R, n, m, std::move(entries));
}

RepMatrix exterior_torus(int n, int m, int i, const Elem& xi) {
    if (i < 1 || i > n) throw std::invalid_argument("torus index out of range");
    const Ring& R = xi.ring();
    SubsetIndexer idx(n, m);
    std::vector<RepMatrix::Triplet> entries;
    entries.reserve(idx.count());
    for (int d = 0; d < idx.count(); ++d) {
        Elem v = idx.at(d).contains(i) ? xi : R.one();
        if (!R.is_zero(v)) entries.push_back({d, d, std::move(v)});
    }
    return RepMatrix::from_triplets(R, n, m, std::move(entries));
}

std::size_t residue(const RepMatrix& g) {
    const Ring& R = g.ring();
    if (!R.is_field()) throw UnsupportedRingError("residue needs a field, got " + R.token());
    Mat diff = g.to_dense() - Mat::identity(R, g.N());
    return rank_field(diff);
}

Mat transvection_gl(const Ring& ring, int n, int i, int j, const Elem& xi) {
    if (i == j || i < 1 || j < 1 || i > n || j > n)
        throw std::invalid_argument("transvection needs 1 <= i != j <= n");
    Mat out = Mat::identity(ring, n);
    out.at(i - 1, j - 1) = xi;
    return out;
}

Mat torus_gl(const Ring& ring, int n, int i, const Elem& xi) {
    if (i < 1 || i > n) throw std::invalid_argument("torus index out of range");
    Mat out = Mat::identity(ring, n);
    out.at(i - 1, i - 1) = xi;
    return out;
}

RepMatrix evaluate_word(const ElementaryWord& word, int n, int m) {
    if (word.factors.empty())
        throw std::invalid_argument("empty word needs an explicit ring argument");
    return evaluate_word(word, n, m, word.factors.front().xi.ring());
}

RepMatrix evaluate_word(const ElementaryWord& word, int n, int m, const Ring& ring) {
    RepMatrix acc = RepMatrix::identity(ring, n, m);
    for (const auto& f : word.factors) acc = acc * exterior_transvection(n, m, f.i, f.j, f.xi);
    return acc;
}

Mat evaluate_word_gl(const ElementaryWord& word, const Ring& ring, int n) {
    Mat acc = Mat::identity(ring, n);
    for (const auto& f : word.factors) acc = acc * transvection_gl(ring, n, f.i, f.j, f.xi);
    return acc;
}

std::vector<Elem> sample_elements(const Ring& ring) {
    std::vector<Elem> out = {ring.zero(), ring.one(), ring.from_int(-1)};
    if (ring.kind() == RingKind::Modular && ring.is_field() && ring.modulus() > 3 &&
        ring.modulus() < (Int(1) << 20)) {
        // Smallest generator of the (cyclic) unit group.
        std::uint64_t p = ring.modulus().convert_to<std::uint64_t>();
        for (std::uint64_t g = 2; g < p; ++g) {
            std::uint64_t x = g % p, seen = 1;
            std::uint64_t order = 1;
            while (x != 1) {
                x = (x * g) % p;
                ++order;
                ++seen;
                if (seen > p) break;
            }
            if (order == p - 1) {
                out.push_back(ring.from_Int(Int(g)));
                break;
            }
        }
    }
    if (ring.kind() == RingKind::Polynomial) out.push_back(ring.var(0));
    // Canonical form may collapse entries (e.g. -1 = 1 in F2); dedupe.
    std::vector<Elem> dedup;
    for (auto& e : out) {
        bool seen = false;
        for (const auto& d : dedup) seen = seen || d == e;
        if (!seen) dedup.push_back(std::move(e));
    }
    return dedup;
}

ElementaryWord random_word(int n, int length, const Ring& ring, std::mt19937_64& rng) {
    if (length < 0) throw std::invalid_argument("word length must be nonnegative");
    if (n < 2 && length > 0) throw std::invalid_argument("transvections need n >= 2");
    std::vector<Elem> samples = sample_elements(ring);
    ElementaryWord w;
    w.factors.reserve(length);
    for (int t = 0; t < length; ++t) {
        int i = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(n));
        int j = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(n - 1));
        if (j >= i) ++j;
        const Elem& xi = samples[rng() % samples.size()];
        w.factors.push_back({i, j, xi});
    }
    return w;
}

ElementaryWord random_word(int n, int length, const Ring& ring, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return random_word(n, length, ring, rng);
}

Mat random_invertible(const Ring& ring, int n, std::mt19937_64& rng) {
    if (ring.kind() != RingKind::Modular && !ring.is_field())
        throw UnsupportedRingError("random_invertible needs a field or Z/k, got " + ring.token());
    for (int attempt = 0; attempt < 1000; ++attempt) {
        Mat g(ring, n, n);
        if (ring.kind() == RingKind::Modular) {
            std::uint64_t p = ring.modulus().convert_to<std::uint64_t>();
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) g.at(r, c) = ring.from_Int(Int(rng() % p));
        } else {
            // Small integer entries keep exact arithmetic cheap.
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c)
                    g.at(r, c) = ring.from_int(static_cast<long long>(rng() % 5) - 2);
        }
        if (ring.is_unit(det(g))) return g;
    }
    throw RingError("failed to sample an invertible matrix");
}

Elem substitute_linear(const Elem& poly, const RepMatrix& g) {
    const Ring& pr = poly.ring();
    if (pr.kind() != RingKind::Polynomial)
        throw UnsupportedRingError("substitute_linear needs a polynomial element");
    if (static_cast<int>(pr.nvars()) != g.N() || pr.base().token() != g.ring().token())
        throw std::invalid_argument("polynomial variables do not match the matrix index set");
    Mat d = g.to_dense();
    std::vector<std::vector<Elem>> rows(g.N());
    for (int i = 0; i < g.N(); ++i) {
        rows[i].reserve(g.N());
        for (int j = 0; j < g.N(); ++j) rows[i].push_back(d.at(i, j));
    }
    return substitute_linear_forms(poly, rows);
}

const Ring& grassmann_poly_ring(const Ring& base, int n, int m) {
    std::vector<std::string> vars;
    for (const Subset& s : enumerate_subsets(n, m)) {
        std::string name = "x";
        for (std::size_t i = 0; i < s.elems.size(); ++i) {
            if (i > 0 && n > 9) name += "_";
            name += std::to_string(s.elems[i]);
        }
        vars.push_back(std::move(name));
    }
    return Ring::polynomial(base, std::move(vars));
}

}  // namespace extpow
