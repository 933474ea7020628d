#pragma once

#include "extpow/ring.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace extpow {

// Dense matrix over a runtime ring.  Row-major, immutable by convention once
// built (operations return fresh values).
class Mat {
public:
    Mat() = default;
    Mat(const Ring& ring, std::size_t rows, std::size_t cols)
        : ring_(&ring), rows_(rows), cols_(cols), a_(rows * cols, ring.zero()) {}

    static Mat identity(const Ring& ring, std::size_t n);

    const Ring& ring() const { return *ring_; }
    const Ring* ring_ptr() const { return ring_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Elem& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
    const Elem& at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

    bool operator==(const Mat& o) const {
        return ring_ == o.ring_ && rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }

    Mat operator*(const Mat& o) const;
    Mat operator+(const Mat& o) const;
    Mat operator-(const Mat& o) const;
    Mat scaled(const Elem& c) const;

private:
    const Ring* ring_ = nullptr;
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Elem> a_;
};

// Dimension plus an explicit basis of the solution set of a homogeneous
// system over a field.
struct SolutionSpace {
    std::size_t ambient_dim = 0;
    std::vector<std::vector<Elem>> basis;
    const Ring* field = nullptr;

    std::size_t dimension() const { return basis.size(); }
};

// Exact kernel of a matrix over a field (Rationals or Z/p, p prime).
// Throws UnsupportedRingError otherwise.
SolutionSpace solve_homogeneous(const Mat& system);

// True when every basis vector of `space` is annihilated by `system`.
bool solution_space_satisfies(const SolutionSpace& space, const Mat& system);

// Determinants.  det() dispatches: Gauss over fields, fraction-free Bareiss
// over other integral domains, Berkowitz over arbitrary commutative rings.
Elem det(const Mat& m);
Elem det_gauss(const Mat& m);      // field entries
Elem det_bareiss(const Mat& m);    // integral domain entries
Elem det_berkowitz(const Mat& m);  // any commutative ring

std::size_t rank_field(const Mat& m);
std::optional<Mat> inverse_field(const Mat& m);

}  // namespace extpow
