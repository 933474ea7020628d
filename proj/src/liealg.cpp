#include "extpow/liealg.hpp"

#include "extpow/sparse_solve.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace extpow {

namespace {

Elem to_field(const Ring& field, const Elem& c) {
    const Ring& src = c.ring();
    if (&src == &field) return c;
    if (src.kind() == RingKind::Integers) return field.from_Int(c.as_int());
    if (src.kind() == RingKind::Rationals && field.kind() == RingKind::Rationals) return c;
    throw UnsupportedRingError("cannot move coefficient from " + src.token() + " into " + field.token());
}

template <class Ops>
Elem ops_to_elem(const Ring& field, const typename Ops::value_type& v);

template <>
Elem ops_to_elem<FpOps>(const Ring& field, const std::uint64_t& v) {
    return field.from_Int(Int(v));
}
template <>
Elem ops_to_elem<RatOps>(const Ring& field, const Rat& v) {
    return Elem(&field, v);
}

}  // namespace

namespace {

// Shared assembly of the sum_{i,j} z_{ij} x_i d(phi_h)/dx_j conditions.  With
// modulo_span the sum may equal a combination of the generators (auxiliary
// unknowns c_{h,l} appended after the t^2 z-slots); the result is projected
// onto z.
SolutionSpace lie_system_impl(const Ring& P, const std::vector<Elem>& polys, const Ring& field,
                              bool modulo_span) {
    if (!field.is_field()) throw UnsupportedRingError("lie_fix_system needs a field");
    if (P.kind() != RingKind::Polynomial) throw std::invalid_argument("lie_fix_system needs polynomial inputs");
    const int t = static_cast<int>(P.nvars());
    const int s = static_cast<int>(polys.size());
    const int zcount = t * t;
    const int unknowns = zcount + (modulo_span ? s * s : 0);

    // One linear equation per (polynomial, monomial) pair.
    std::map<std::pair<std::size_t, std::vector<std::uint32_t>>, std::map<int, Elem>> eqs;
    for (std::size_t h = 0; h < polys.size(); ++h) {
        if (polys[h].ring_ptr() != &P) throw std::invalid_argument("polynomials must share one ring");
        for (int j = 0; j < t; ++j) {
            Elem d = poly_derivative(polys[h], static_cast<std::size_t>(j));
            if (P.is_zero(d)) continue;
            for (const auto& term : poly_terms(d)) {
                for (int i = 0; i < t; ++i) {
                    std::vector<std::uint32_t> mono = term.exp;
                    mono[i] += 1;
                    auto& row = eqs[{h, std::move(mono)}];
                    Elem c = to_field(field, term.coeff);
                    int z = i * t + j;
                    auto it = row.find(z);
                    if (it == row.end()) row.emplace(z, std::move(c));
                    else it->second = field.add(it->second, c);
                }
            }
        }
        if (modulo_span) {
            for (int l = 0; l < s; ++l) {
                for (const auto& term : poly_terms(polys[l])) {
                    auto& row = eqs[{h, term.exp}];
                    Elem c = field.neg(to_field(field, term.coeff));
                    int id = zcount + static_cast<int>(h) * s + l;
                    auto it = row.find(id);
                    if (it == row.end()) row.emplace(id, std::move(c));
                    else it->second = field.add(it->second, c);
                }
            }
        }
    }

    SparseEliminator<ElemOps> elim(unknowns, ElemOps{&field});
    for (auto& [key, row] : eqs) {
        SparseEliminator<ElemOps>::Row r;
        for (auto& [col, val] : row)
            if (!field.is_zero(val)) r.push_back({col, val});
        if (!r.empty()) elim.add_row(std::move(r));
    }
    SolutionSpace out;
    out.ambient_dim = zcount;
    out.field = &field;
    // Projection onto the z-block; with dependent generators the auxiliary
    // coordinates are not determined by z, so the projected rank is computed
    // rather than assumed.
    SparseEliminator<ElemOps> proj(zcount, ElemOps{&field});
    for (auto& vec : elim.kernel_basis()) {
        vec.resize(zcount, field.zero());
        SparseEliminator<ElemOps>::Row row;
        for (int c = 0; c < zcount; ++c)
            if (!field.is_zero(vec[c])) row.push_back({c, vec[c]});
        if (proj.add_row(std::move(row))) out.basis.push_back(std::move(vec));
    }
    return out;
}

}  // namespace

SolutionSpace lie_fix_system(const std::vector<Elem>& polys, const Ring& field) {
    if (polys.empty())
        throw std::invalid_argument("empty system needs an explicit polynomial ring overload");
    return lie_fix_system(polys.front().ring(), polys, field);
}

SolutionSpace lie_fix_system(const Ring& P, const std::vector<Elem>& polys, const Ring& field) {
    return lie_system_impl(P, polys, field, /*modulo_span=*/false);
}

SolutionSpace lie_stabilizer_system(const std::vector<Elem>& polys, const Ring& field) {
    if (polys.empty())
        throw std::invalid_argument("lie_stabilizer_system needs at least one generator");
    return lie_system_impl(polys.front().ring(), polys, field, /*modulo_span=*/true);
}

namespace {

struct TupleScan {
    const SubsetIndexer* idx;
    int n, m, k, N;
    std::vector<std::uint64_t> mask_of;
    std::uint64_t full_mask;

    TupleScan(int n_, int m_, int k_) : n(n_), m(m_), k(k_) {
        idx = &subset_indexer(n, m);
        N = idx->count();
        mask_of.resize(N);
        for (int i = 0; i < N; ++i) mask_of[i] = idx->at(i).mask();
        full_mask = (n == 64) ? ~0ull : ((1ull << n) - 1);
    }

    // Sign of the concatenation of the blocks (by index) in slot order.
    int concat_sign(const int* digits, int count) const {
        std::vector<int> seq;
        seq.reserve(static_cast<std::size_t>(count) * m);
        for (int l = 0; l < count; ++l) {
            const Subset& b = idx->at(digits[l]);
            seq.insert(seq.end(), b.elems.begin(), b.elems.end());
        }
        return sign_sequence(seq);
    }
};

// Row assembly shared by the form and ideal stabilizer systems.  For the
// tuple T and target support mask V: contributes, for every slot l whose
// other blocks are pairwise disjoint inside V, the y-term at (J, T_l) with
// J = V minus the union.
template <class AddTerm>
void assemble_y_terms(const TupleScan& scan, const int* digits, std::uint64_t vmask,
                      AddTerm&& add_term) {
    int k = scan.k;
    int work[8];
    for (int l = 0; l < k; ++l) {
        std::uint64_t uni = 0;
        bool disjoint = true;
        for (int t = 0; t < k && disjoint; ++t) {
            if (t == l) continue;
            std::uint64_t bm = scan.mask_of[digits[t]];
            if ((uni & bm) || (bm & ~vmask)) disjoint = false;
            uni |= bm;
        }
        if (!disjoint) continue;
        std::uint64_t jmask = vmask & ~uni;
        int jidx = scan.idx->index_of_mask(jmask);
        if (jidx < 0) continue;
        for (int t = 0; t < k; ++t) work[t] = digits[t];
        work[l] = jidx;
        int sgn = scan.concat_sign(work, k);
        if (sgn == 0) continue;
        add_term(jidx, digits[l], sgn, l);
    }
}

template <class Ops>
SolutionSpace lie_form_impl(int n, int m, const Ring& field, bool extended, Ops ops) {
    const int k = n / m;
    TupleScan scan(n, m, k);
    const int N = scan.N;
    const int y_count = N * N;
    const int unknowns = y_count + (extended ? 1 : 0);
    const std::size_t total = [&] {
        std::size_t t = 1;
        for (int i = 0; i < k; ++i) t *= static_cast<std::size_t>(N);
        return t;
    }();

    SparseEliminator<Ops> elim(unknowns, ops);
    using Row = typename SparseEliminator<Ops>::Row;
    int digits[8];
    std::map<int, int> row_acc;
    for (std::size_t T = 0; T < total; ++T) {
        std::size_t rest = T;
        for (int l = 0; l < k; ++l) {
            digits[l] = static_cast<int>(rest % N);
            rest /= static_cast<std::size_t>(N);
        }
        row_acc.clear();
        assemble_y_terms(scan, digits, scan.full_mask,
                         [&](int jidx, int tl, int sgn, int) { row_acc[jidx * N + tl] += sgn; });
        if (row_acc.empty()) continue;
        if (extended) {
            // mu-term: -sign(T) when T is a partition of [n].
            std::uint64_t uni = 0;
            bool disjoint = true;
            for (int l = 0; l < k && disjoint; ++l) {
                std::uint64_t bm = scan.mask_of[digits[l]];
                if (uni & bm) disjoint = false;
                uni |= bm;
            }
            if (disjoint && uni == scan.full_mask) {
                int sgn = scan.concat_sign(digits, k);
                row_acc[y_count] -= sgn;
            }
        }
        Row r;
        for (auto& [col, c] : row_acc)
            if (c != 0) r.push_back({col, ops.from_int(c)});
        if (!r.empty()) elim.add_row(std::move(r));
    }

    SolutionSpace out;
    out.ambient_dim = static_cast<std::size_t>(y_count);
    out.field = &field;
    for (auto& vec : elim.kernel_basis()) {
        std::vector<Elem> b;
        b.reserve(y_count);
        for (int i = 0; i < y_count; ++i) b.push_back(ops_to_elem<Ops>(field, vec[i]));
        out.basis.push_back(std::move(b));
    }
    return out;
}

template <class Ops>
SolutionSpace lie_ideal_impl(int n, int m, const Ring& field, Ops ops) {
    const int l_blocks = n / m;
    const int k = l_blocks;
    TupleScan scan(n, m, k);
    const int N = scan.N;
    const int y_count = N * N;
    std::vector<Subset> vsets = enumerate_subsets(n, m * l_blocks);
    const int p = static_cast<int>(vsets.size());
    // Unknown layout: y (N^2), mu_j (p), gamma_{j,l} packed without diagonal.
    const int unknowns = y_count + p + p * (p - 1);
    auto gamma_id = [&](int j, int l) { return y_count + p + j * (p - 1) + (l < j ? l : l - 1); };

    std::vector<std::uint64_t> vmask(p);
    std::map<std::uint64_t, int> v_of_mask;
    for (int j = 0; j < p; ++j) {
        vmask[j] = vsets[j].mask();
        v_of_mask[vmask[j]] = j;
    }

    const std::size_t total = [&] {
        std::size_t t = 1;
        for (int i = 0; i < k; ++i) t *= static_cast<std::size_t>(N);
        return t;
    }();

    SparseEliminator<Ops> elim(unknowns, ops);
    using Row = typename SparseEliminator<Ops>::Row;
    int digits[8];
    std::map<int, int> row_acc;
    for (int j = 0; j < p; ++j) {
        for (std::size_t T = 0; T < total; ++T) {
            std::size_t rest = T;
            for (int l = 0; l < k; ++l) {
                digits[l] = static_cast<int>(rest % N);
                rest /= static_cast<std::size_t>(N);
            }
            row_acc.clear();
            assemble_y_terms(scan, digits, vmask[j],
                             [&](int jidx, int tl, int sgn, int) { row_acc[jidx * N + tl] += sgn; });
            if (row_acc.empty()) continue;
            // Scalar terms: T may be a partition of V_j (mu) or of some V_l
            // with l != j (gamma).
            std::uint64_t uni = 0;
            bool disjoint = true;
            for (int t = 0; t < k && disjoint; ++t) {
                std::uint64_t bm = scan.mask_of[digits[t]];
                if (uni & bm) disjoint = false;
                uni |= bm;
            }
            if (disjoint) {
                auto it = v_of_mask.find(uni);
                if (it != v_of_mask.end()) {
                    int sgn = scan.concat_sign(digits, k);
                    int target = it->second == j ? y_count + j : gamma_id(j, it->second);
                    row_acc[target] -= sgn;
                }
            }
            Row r;
            for (auto& [col, c] : row_acc)
                if (c != 0) r.push_back({col, ops.from_int(c)});
            if (!r.empty()) elim.add_row(std::move(r));
        }
    }

    SolutionSpace out;
    out.ambient_dim = static_cast<std::size_t>(y_count);
    out.field = &field;
    for (auto& vec : elim.kernel_basis()) {
        std::vector<Elem> b;
        b.reserve(y_count);
        for (int i = 0; i < y_count; ++i) b.push_back(ops_to_elem<Ops>(field, vec[i]));
        out.basis.push_back(std::move(b));
    }
    return out;
}

}  // namespace

SolutionSpace lie_dim_form_stabilizer(int n, int m, const Ring& field, bool extended) {
    if (m < 1 || n % m != 0 || n / m < 3)
        throw std::invalid_argument("lie_dim_form_stabilizer needs n/m an integer >= 3");
    if (!field.is_field()) throw UnsupportedRingError("lie_dim_form_stabilizer needs a field");
    if (field.kind() == RingKind::Rationals) return lie_form_impl(n, m, field, extended, RatOps{});
    return lie_form_impl(n, m, field, extended, FpOps{field.modulus().convert_to<std::uint64_t>()});
}

SolutionSpace lie_dim_ideal_stabilizer(int n, int m, const Ring& field) {
    if (m < 1 || n % m == 0 || n / m < 2)
        throw std::invalid_argument("lie_dim_ideal_stabilizer needs n not divisible by m, floor(n/m) >= 2");
    if (!field.is_field()) throw UnsupportedRingError("lie_dim_ideal_stabilizer needs a field");
    if (field.kind() == RingKind::Rationals) return lie_ideal_impl(n, m, field, RatOps{});
    return lie_ideal_impl(n, m, field, FpOps{field.modulus().convert_to<std::uint64_t>()});
}

RelationsReport structural_relations_check(int n, int m, const Ring& field, bool extended) {
    RelationsReport rep;
    SolutionSpace space = lie_dim_form_stabilizer(n, m, field, extended);
    const SubsetIndexer& idx = subset_indexer(n, m);
    const int N = idx.count();
    const int k = n / m;
    auto coord = [&](const std::vector<Elem>& v, int I, int J) -> const Elem& {
        return v[static_cast<std::size_t>(I) * N + J];
    };
    bool ok = true;

    // Family 1: d(I,J) <= m-2 forces y_{I,J} = 0.
    for (int I = 0; I < N; ++I) {
        for (int J = 0; J < N; ++J) {
            if (I == J || distance(idx.at(I), idx.at(J)) > m - 2) continue;
            ++rep.vanishing_checked;
            for (const auto& v : space.basis) ok = ok && field.is_zero(coord(v, I, J));
        }
    }

    // Family 2: paired off-diagonal relations per root (a,b).
    for (int a = 1; a <= n && ok; ++a) {
        for (int b = 1; b <= n; ++b) {
            if (a == b) continue;
            ++rep.offdiag_classes;
            std::vector<int> restab;
            for (int e = 1; e <= n; ++e)
                if (e != a && e != b) restab.push_back(e);
            std::vector<Subset> tails;
            if (m == 1) {
                tails.push_back(Subset(n, {}));
            } else {
                for (const Subset& s : enumerate_subsets(static_cast<int>(restab.size()), m - 1)) {
                    std::vector<int> elems;
                    for (int pos : s.elems) elems.push_back(restab[pos - 1]);
                    std::sort(elems.begin(), elems.end());
                    tails.push_back(Subset(n, elems));
                }
            }
            for (const Subset& L1 : tails) {
                for (const Subset& L2 : tails) {
                    if (L1.mask() & L2.mask()) continue;
                    auto make = [&](int extra, const Subset& L) {
                        std::vector<int> e = L.elems;
                        e.push_back(extra);
                        std::sort(e.begin(), e.end());
                        return Subset(n, e);
                    };
                    Subset I = make(a, L1), J = make(b, L1), M = make(b, L2), H = make(a, L2);
                    std::uint64_t used = I.mask() | M.mask();
                    std::vector<int> rest;
                    for (int e = 1; e <= n; ++e)
                        if (!(used & (1ull << (e - 1)))) rest.push_back(e);
                    std::vector<PartitionSeq> splits = all_partitions(rest, m, false, n);
                    if (splits.empty() && k > 2) continue;
                    PartitionSeq fill = splits.empty() ? PartitionSeq{} : splits.front();
                    std::vector<int> seq1 = I.elems, seq2 = J.elems;
                    seq1.insert(seq1.end(), M.elems.begin(), M.elems.end());
                    seq2.insert(seq2.end(), H.elems.begin(), H.elems.end());
                    for (const Subset& blk : fill.blocks) {
                        seq1.insert(seq1.end(), blk.elems.begin(), blk.elems.end());
                        seq2.insert(seq2.end(), blk.elems.begin(), blk.elems.end());
                    }
                    int s1 = sign_sequence(seq1), s2 = sign_sequence(seq2);
                    ++rep.offdiag_checked;
                    int iI = idx.index_of(I), iJ = idx.index_of(J);
                    int iH = idx.index_of(H), iM = idx.index_of(M);
                    for (const auto& v : space.basis) {
                        Elem lhs = field.add(field.mul(field.from_int(s1), coord(v, iI, iJ)),
                                             field.mul(field.from_int(s2), coord(v, iH, iM)));
                        ok = ok && field.is_zero(lhs);
                    }
                }
            }
        }
    }

    // Family 3: diagonal sums agree across repartitions of I u J.
    for (int iI = 0; iI < N && ok; ++iI) {
        for (int iJ = iI + 1; iJ < N; ++iJ) {
            const Subset &I = idx.at(iI), &J = idx.at(iJ);
            if (I.mask() & J.mask()) continue;
            std::uint64_t U = I.mask() | J.mask();
            Subset Uset = Subset::from_mask(n, U);
            // Splits of U into two m-blocks, canonical by containing min(U).
            std::vector<int> rest_elems;
            for (int e : Uset.elems)
                if (e != Uset.elems[0]) rest_elems.push_back(e);
            for (const Subset& pick :
                 enumerate_subsets(static_cast<int>(rest_elems.size()), m - 1)) {
                std::vector<int> h = {Uset.elems[0]};
                for (int pos : pick.elems) h.push_back(rest_elems[pos - 1]);
                std::sort(h.begin(), h.end());
                Subset H(n, h);
                Subset M = Subset::from_mask(n, U & ~H.mask());
                int iH = idx.index_of(H), iM = idx.index_of(M);
                if ((iH == iI && iM == iJ) || (iH == iJ && iM == iI)) continue;
                ++rep.diagonal_checked;
                for (const auto& v : space.basis) {
                    Elem lhs = field.add(coord(v, iI, iI), coord(v, iJ, iJ));
                    Elem rhs = field.add(coord(v, iH, iH), coord(v, iM, iM));
                    ok = ok && field.is_zero(field.sub(lhs, rhs));
                }
            }
        }
    }

    rep.pass = ok;
    return rep;
}

DiagonalRelation diagonal_relation(int n, int m) {
    if (m < 1 || n % m != 0 || n / m < 3)
        throw std::invalid_argument("diagonal_relation needs n/m an integer >= 3");
    const SubsetIndexer& idx = subset_indexer(n, m);
    const long long k = n / m;
    DiagonalRelation rel;
    // Weights {1,...,m-1,p} for p = m..n, then {1,...,^i,...,m+1} for i < m.
    for (int p = m; p <= n; ++p) {
        std::vector<int> e;
        for (int t = 1; t < m; ++t) e.push_back(t);
        e.push_back(p);
        std::sort(e.begin(), e.end());
        rel.weight_index.push_back(idx.index_of(Subset(n, e)));
    }
    for (int t = 1; t < m; ++t) {
        int skip = m - t;
        std::vector<int> e;
        for (int v = 1; v <= m + 1; ++v)
            if (v != skip) e.push_back(v);
        rel.weight_index.push_back(idx.index_of(Subset(n, e)));
    }
    rel.coeff.resize(n);
    rel.coeff[0] = m * (k - 1) - k;
    rel.coeff[1] = (m - 1) * (k - 1) - 1;
    for (int j = 2; j <= n - m; ++j) rel.coeff[j] = -1;
    for (int j = n - m + 1; j < n; ++j) rel.coeff[j] = -(k - 1);
    return rel;
}

bool verify_diagonal_relation(int n, int m, const Ring& field) {
    DiagonalRelation rel = diagonal_relation(n, m);
    SolutionSpace space = lie_dim_form_stabilizer(n, m, field, /*extended=*/false);
    const int N = static_cast<int>(binomial(n, m));
    for (const auto& v : space.basis) {
        Elem acc = field.zero();
        for (int j = 0; j < n; ++j) {
            int K = rel.weight_index[j];
            acc = field.add(acc, field.mul(field.from_int(rel.coeff[j]),
                                           v[static_cast<std::size_t>(K) * N + K]));
        }
        if (!field.is_zero(acc)) return false;
    }
    return true;
}

std::vector<Elem> exterior_derivative_of_unit(const Ring& field, int n, int m, int i, int j) {
    const Ring& P = Ring::polynomial(field, {"eps"});
    Mat g = Mat::identity(P, n);
    g.at(i - 1, j - 1) = P.add(g.at(i - 1, j - 1), P.var(0));
    RepMatrix cb = cauchy_binet_serial(g, m);
    const int N = cb.N();
    std::vector<Elem> out;
    out.reserve(static_cast<std::size_t>(N) * N);
    std::vector<std::uint32_t> lin{1};
    Mat d = cb.to_dense();
    for (int r = 0; r < N; ++r)
        for (int c = 0; c < N; ++c) out.push_back(poly_coefficient(d.at(r, c), lin));
    return out;
}

bool in_span(const SolutionSpace& space, const std::vector<Elem>& v) {
    const Ring& field = *space.field;
    SparseEliminator<ElemOps> elim(static_cast<int>(space.ambient_dim), ElemOps{&field});
    for (const auto& b : space.basis) {
        SparseEliminator<ElemOps>::Row row;
        for (std::size_t c = 0; c < b.size(); ++c)
            if (!field.is_zero(b[c])) row.push_back({static_cast<int>(c), b[c]});
        elim.add_row(std::move(row));
    }
    int r = elim.rank();
    SparseEliminator<ElemOps>::Row row;
    for (std::size_t c = 0; c < v.size(); ++c)
        if (!field.is_zero(v[c])) row.push_back({static_cast<int>(c), v[c]});
    elim.add_row(std::move(row));
    return elim.rank() == r;
}

}  // namespace extpow
