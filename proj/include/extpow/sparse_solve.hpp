#pragma once

// Sparse exact elimination over a field, used for the large structured
// homogeneous systems (Lie-algebra conditions, semi-invariant coefficient
// spaces).  Rows are added incrementally; the eliminator keeps an echelon set
// of pivot rows with unit leading entries and can produce a kernel basis.

#include "extpow/ring.hpp"

#include <cstdint>
#include <vector>

namespace extpow {

// Prime field on machine words, p < 2^32 so products fit in uint64_t.
struct FpOps {
    using value_type = std::uint64_t;
    std::uint64_t p = 2;

    value_type zero() const { return 0; }
    value_type one() const { return 1 % p; }
    bool is_zero(value_type a) const { return a == 0; }
    value_type add(value_type a, value_type b) const { return (a + b) % p; }
    value_type sub(value_type a, value_type b) const { return (a + p - b) % p; }
    value_type neg(value_type a) const { return a ? p - a : 0; }
    value_type mul(value_type a, value_type b) const { return (a * b) % p; }
    value_type inv(value_type a) const {
        // Fermat; p prime by construction.
        value_type r = 1, x = a % p;
        std::uint64_t e = p - 2;
        while (e) {
            if (e & 1) r = mul(r, x);
            x = mul(x, x);
            e >>= 1;
        }
        return r;
    }
    value_type from_int(long long v) const {
        long long m = v % static_cast<long long>(p);
        if (m < 0) m += static_cast<long long>(p);
        return static_cast<value_type>(m);
    }
};

struct RatOps {
    using value_type = Rat;
    value_type zero() const { return Rat(0); }
    value_type one() const { return Rat(1); }
    bool is_zero(const value_type& a) const { return a == 0; }
    value_type add(const value_type& a, const value_type& b) const { return a + b; }
    value_type sub(const value_type& a, const value_type& b) const { return a - b; }
    value_type neg(const value_type& a) const { return -a; }
    value_type mul(const value_type& a, const value_type& b) const { return a * b; }
    value_type inv(const value_type& a) const { return Rat(1) / a; }
    value_type from_int(long long v) const { return Rat(v); }
};

// Generic field elements through the runtime Ring; the slow path for exotic
// fields (large prime moduli).
struct ElemOps {
    using value_type = Elem;
    const Ring* ring = nullptr;
    value_type zero() const { return ring->zero(); }
    value_type one() const { return ring->one(); }
    bool is_zero(const value_type& a) const { return ring->is_zero(a); }
    value_type add(const value_type& a, const value_type& b) const { return ring->add(a, b); }
    value_type sub(const value_type& a, const value_type& b) const { return ring->sub(a, b); }
    value_type neg(const value_type& a) const { return ring->neg(a); }
    value_type mul(const value_type& a, const value_type& b) const { return ring->mul(a, b); }
    value_type inv(const value_type& a) const { return ring->inv(a); }
    value_type from_int(long long v) const { return ring->from_int(v); }
};

template <class Ops>
class SparseEliminator {
public:
    using V = typename Ops::value_type;
    struct Entry {
        int col;
        V val;
    };
    using Row = std::vector<Entry>;  // sorted by column, values nonzero

    SparseEliminator(int ncols, Ops ops) : ncols_(ncols), ops_(ops), pivot_of_col_(ncols, -1) {}

    // Reduce against the current pivots and absorb; true iff rank grew.
    bool add_row(Row r) {
        std::erase_if(r, [&](const Entry& e) { return ops_.is_zero(e.val); });
        reduce_in_place(r);
        if (r.empty()) return false;
        // Normalize the leading entry to one.
        V lead_inv = ops_.inv(r.front().val);
        for (auto& e : r) e.val = ops_.mul(e.val, lead_inv);
        pivot_of_col_[r.front().col] = static_cast<int>(rows_.size());
        rows_.push_back(std::move(r));
        return true;
    }

    int rank() const { return static_cast<int>(rows_.size()); }
    int ncols() const { return ncols_; }
    int kernel_dim() const { return ncols_ - rank(); }

    std::vector<int> free_cols() const {
        std::vector<int> out;
        for (int c = 0; c < ncols_; ++c)
            if (pivot_of_col_[c] < 0) out.push_back(c);
        return out;
    }

    // Dense kernel basis, one vector per free column (ascending order).
    std::vector<std::vector<V>> kernel_basis() const {
        std::vector<int> pcols;
        for (int c = 0; c < ncols_; ++c)
            if (pivot_of_col_[c] >= 0) pcols.push_back(c);
        std::vector<std::vector<V>> basis;
        for (int f : free_cols()) {
            std::vector<V> x(ncols_, ops_.zero());
            x[f] = ops_.one();
            for (auto it = pcols.rbegin(); it != pcols.rend(); ++it) {
                const Row& row = rows_[pivot_of_col_[*it]];
                V acc = ops_.zero();
                for (std::size_t k = 1; k < row.size(); ++k)
                    acc = ops_.add(acc, ops_.mul(row[k].val, x[row[k].col]));
                x[*it] = ops_.neg(acc);
            }
            basis.push_back(std::move(x));
        }
        return basis;
    }

    // Residual of a dense vector against the absorbed rows (for verification).
    bool in_kernel(const std::vector<V>& x) const {
        for (const Row& row : rows_) {
            V acc = ops_.zero();
            for (const auto& e : row) acc = ops_.add(acc, ops_.mul(e.val, x[e.col]));
            if (!ops_.is_zero(acc)) return false;
        }
        return true;
    }

private:
    void reduce_in_place(Row& r) const {
        while (!r.empty()) {
            int p = pivot_of_col_[r.front().col];
            if (p < 0) return;
            axpy(r, rows_[p], ops_.neg(r.front().val));
        }
    }

    // r += c * other, keeping sorted sparse form; other has unit lead.
    void axpy(Row& r, const Row& other, const V& c) const {
        Row out;
        out.reserve(r.size() + other.size());
        std::size_t i = 0, j = 0;
        while (i < r.size() || j < other.size()) {
            if (j == other.size()) { out.push_back(r[i++]); continue; }
            if (i == r.size()) {
                V v = ops_.mul(c, other[j].val);
                if (!ops_.is_zero(v)) out.push_back(Entry{other[j].col, std::move(v)});
                ++j;
                continue;
            }
            if (r[i].col < other[j].col) { out.push_back(r[i++]); continue; }
            if (r[i].col > other[j].col) {
                V v = ops_.mul(c, other[j].val);
                if (!ops_.is_zero(v)) out.push_back(Entry{other[j].col, std::move(v)});
                ++j;
                continue;
            }
            V v = ops_.add(r[i].val, ops_.mul(c, other[j].val));
            if (!ops_.is_zero(v)) out.push_back(Entry{r[i].col, std::move(v)});
            ++i; ++j;
        }
        r = std::move(out);
    }

    int ncols_;
    Ops ops_;
    std::vector<Row> rows_;
    std::vector<int> pivot_of_col_;
};

}  // namespace extpow
