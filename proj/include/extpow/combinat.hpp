#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace extpow {

// An m-element subset of [n] = {1, ..., n}, elements strictly increasing.
struct Subset {
    int n = 0;
    std::vector<int> elems;

    Subset() = default;
    Subset(int n_, std::vector<int> elems_);

    int size() const { return static_cast<int>(elems.size()); }
    std::uint64_t mask() const;
    static Subset from_mask(int n, std::uint64_t mask);
    bool contains(int i) const;

    // Concatenated digits for n <= 9 ("124"), comma list otherwise.
    std::string str() const;

    bool operator==(const Subset&) const = default;
    bool operator<(const Subset& o) const { return elems < o.elems; }
};

// All C(n,m) subsets in lexicographic order; position in this list is the
// canonical row/column index of representation matrices.
std::vector<Subset> enumerate_subsets(int n, int m);

// Index lookups into the lexicographic enumeration.
class SubsetIndexer {
public:
    SubsetIndexer(int n, int m);
    int n() const { return n_; }
    int m() const { return m_; }
    int count() const { return static_cast<int>(subsets_.size()); }
    const Subset& at(int idx) const { return subsets_[idx]; }
    const std::vector<Subset>& all() const { return subsets_; }
    int index_of_mask(std::uint64_t mask) const;  // -1 when absent
    int index_of(const Subset& s) const { return index_of_mask(s.mask()); }

private:
    int n_, m_;
    std::vector<Subset> subsets_;
    std::vector<int> by_mask_;  // dense 2^n table (desk-scale n)
};

std::uint64_t binomial(int n, int m);

// Process-wide interned indexer for hot paths.
const SubsetIndexer& subset_indexer(int n, int m);

// Sign of the permutation sorting `seq` ascending (+1/-1), or 0 when the
// sequence has a repeated entry.
int sign_sequence(std::span<const int> seq);
int sign_sequence(const std::vector<int>& seq);

// Sign of inserting i in front of L: sign_sequence(i, L...); 0 iff i is in L.
int sign_adjoin(const Subset& L, int i);

// d(I,J) = |I n J|; requires same ambient n and size m.
int distance(const Subset& I, const Subset& J);

// Ordered list of pairwise disjoint m-subsets.
struct PartitionSeq {
    std::vector<Subset> blocks;

    // Elements of all blocks concatenated in block order.
    std::vector<int> concat() const;
    bool operator==(const PartitionSeq&) const = default;
};

// Streams partitions of the set V into |V|/m blocks of size m.  Ordered mode
// yields every ordered sequence of blocks (|V|! / (m!)^k of them), unordered
// mode only the canonical representative with ascending block minima.
class PartitionStream {
public:
    // `ambient` is the n carried by the emitted blocks; defaults to the
    // largest element of V.
    PartitionStream(std::vector<int> universe, int m, bool ordered, int ambient = -1);
    bool next(PartitionSeq& out);

private:
    bool descend();
    bool advance_level(std::size_t level);

    std::vector<int> universe_;
    int n_ambient_ = 0;
    int m_;
    bool ordered_;
    std::size_t k_;
    bool fresh_ = true;
    bool done_ = false;
    struct Level {
        std::vector<int> pool;      // remaining elements before this level
        std::vector<int> choice;    // indices into pool forming the block
    };
    std::vector<Level> levels_;
};

// Convenience: materialize all partitions (desk-scale helper).
std::vector<PartitionSeq> all_partitions(std::vector<int> universe, int m, bool ordered,
                                         int ambient = -1);

std::vector<int> range_1_to(int n);

}  // namespace extpow
