#include "extpow/combinat.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace extpow {

Subset::Subset(int n_, std::vector<int> elems_) : n(n_), elems(std::move(elems_)) {
    if (n < 0 || static_cast<int>(elems.size()) > n)
        throw std::invalid_argument("subset larger than ambient set");
    for (std::size_t i = 0; i < elems.size(); ++i) {
        if (elems[i] < 1 || elems[i] > n) throw std::invalid_argument("subset element out of [1,n]");
        if (i > 0 && elems[i - 1] >= elems[i])
            throw std::invalid_argument("subset elements must be strictly increasing");
    }
}

std::uint64_t Subset::mask() const {
    std::uint64_t m = 0;
    for (int e : elems) m |= (1ull << (e - 1));
    return m;
}

Subset Subset::from_mask(int n, std::uint64_t mask) {
    std::vector<int> elems;
    for (int e = 1; e <= n; ++e)
        if (mask & (1ull << (e - 1))) elems.push_back(e);
    return Subset(n, std::move(elems));
}

bool Subset::contains(int i) const {
    return std::binary_search(elems.begin(), elems.end(), i);
}

std::string Subset::str() const {
    std::string out;
    for (std::size_t i = 0; i < elems.size(); ++i) {
        if (n > 9 && i > 0) out += ",";
        out += std::to_string(elems[i]);
    }
    return out;
}

std::vector<Subset> enumerate_subsets(int n, int m) {
    if (m < 1 || m > n) throw std::invalid_argument("enumerate_subsets needs 1 <= m <= n");
    std::vector<Subset> out;
    std::vector<int> cur(m);
    for (int i = 0; i < m; ++i) cur[i] = i + 1;
    while (true) {
        out.emplace_back(n, cur);
        int i = m - 1;
        while (i >= 0 && cur[i] == n - (m - 1 - i)) --i;
        if (i < 0) break;
        ++cur[i];
        for (int j = i + 1; j < m; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

SubsetIndexer::SubsetIndexer(int n, int m) : n_(n), m_(m), subsets_(enumerate_subsets(n, m)) {
    if (n > 24) throw std::invalid_argument("SubsetIndexer limited to n <= 24");
    by_mask_.assign(std::size_t(1) << n, -1);
    for (std::size_t i = 0; i < subsets_.size(); ++i) by_mask_[subsets_[i].mask()] = static_cast<int>(i);
}

int SubsetIndexer::index_of_mask(std::uint64_t mask) const {
    if (mask >= by_mask_.size()) return -1;
    return by_mask_[mask];
}

const SubsetIndexer& subset_indexer(int n, int m) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::unique_ptr<SubsetIndexer>>* cache =
        new std::map<std::pair<int, int>, std::unique_ptr<SubsetIndexer>>();
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = (*cache)[{n, m}];
    if (!slot) slot = std::make_unique<SubsetIndexer>(n, m);
    return *slot;
}

std::uint64_t binomial(int n, int m) {
    if (m < 0 || m > n) return 0;
    std::uint64_t r = 1;
    for (int i = 0; i < m; ++i) {
        r = r * static_cast<std::uint64_t>(n - i) / static_cast<std::uint64_t>(i + 1);
    }
    return r;
}

int sign_sequence(std::span<const int> seq) {
    int inv = 0;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        for (std::size_t j = i + 1; j < seq.size(); ++j) {
            if (seq[i] == seq[j]) return 0;
            if (seq[i] > seq[j]) ++inv;
        }
    }
    return inv % 2 == 0 ? 1 : -1;
}

int sign_sequence(const std::vector<int>& seq) {
    return sign_sequence(std::span<const int>(seq.data(), seq.size()));
}

int sign_adjoin(const Subset& L, int i) {
    if (L.contains(i)) return 0;
    int below = 0;
    for (int e : L.elems)
        if (e < i) ++below;
    return below % 2 == 0 ? 1 : -1;
}

int distance(const Subset& I, const Subset& J) {
    if (I.n != J.n || I.size() != J.size())
        throw std::invalid_argument("distance needs subsets of equal ambient size and cardinality");
    return __builtin_popcountll(I.mask() & J.mask());
}

std::vector<int> PartitionSeq::concat() const {
    std::vector<int> out;
    for (const auto& b : blocks) out.insert(out.end(), b.elems.begin(), b.elems.end());
    return out;
}

std::vector<int> range_1_to(int n) {
    std::vector<int> out(n);
    for (int i = 0; i < n; ++i) out[i] = i + 1;
    return out;
}

PartitionStream::PartitionStream(std::vector<int> universe, int m, bool ordered, int ambient)
    : universe_(std::move(universe)), m_(m), ordered_(ordered) {
    std::sort(universe_.begin(), universe_.end());
    if (m_ < 1) throw std::invalid_argument("block size must be positive");
    if (universe_.size() % static_cast<std::size_t>(m_) != 0)
        throw std::invalid_argument("|V| must be divisible by m");
    k_ = universe_.size() / static_cast<std::size_t>(m_);
    n_ambient_ = ambient >= 0 ? ambient : (universe_.empty() ? 0 : universe_.back());
}

bool PartitionStream::advance_level(std::size_t level) {
    Level& L = levels_[level];
    const int pool_size = static_cast<int>(L.pool.size());
    // Next lexicographic combination; in unordered mode index 0 is pinned so
    // every block contains the minimum of its pool.
    int lo = ordered_ ? 0 : 1;
    int i = m_ - 1;
    while (i >= lo && L.choice[i] == pool_size - m_ + i) --i;
    if (i < lo) return false;
    ++L.choice[i];
    for (int j = i + 1; j < m_; ++j) L.choice[j] = L.choice[j - 1] + 1;
    return true;
}

bool PartitionStream::descend() {
    while (levels_.size() < k_) {
        std::vector<int> pool;
        if (levels_.empty()) {
            pool = universe_;
        } else {
            const Level& top = levels_.back();
            std::vector<bool> used(top.pool.size(), false);
            for (int c : top.choice) used[c] = true;
            for (std::size_t i = 0; i < top.pool.size(); ++i)
                if (!used[i]) pool.push_back(top.pool[i]);
        }
        Level next;
        next.pool = std::move(pool);
        next.choice.resize(m_);
        for (int i = 0; i < m_; ++i) next.choice[i] = i;
        levels_.push_back(std::move(next));
    }
    return true;
}

bool PartitionStream::next(PartitionSeq& out) {
    if (done_) return false;
    if (fresh_) {
        fresh_ = false;
        descend();
    } else {
        while (!levels_.empty() && !advance_level(levels_.size() - 1)) levels_.pop_back();
        if (levels_.empty()) {
            done_ = true;
            return false;
        }
        descend();
    }
    out.blocks.clear();
    out.blocks.reserve(k_);
    for (const Level& L : levels_) {
        std::vector<int> elems;
        elems.reserve(m_);
        for (int c : L.choice) elems.push_back(L.pool[c]);
        out.blocks.emplace_back(n_ambient_, std::move(elems));
    }
    if (k_ == 0) done_ = true;  // single empty partition
    return true;
}

std::vector<PartitionSeq> all_partitions(std::vector<int> universe, int m, bool ordered, int ambient) {
    PartitionStream stream(std::move(universe), m, ordered, ambient);
    std::vector<PartitionSeq> out;
    PartitionSeq p;
    while (stream.next(p)) out.push_back(p);
    return out;
}

}  // namespace extpow
