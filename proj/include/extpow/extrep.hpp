#pragma once

#include "extpow/combinat.hpp"
#include "extpow/matrix.hpp"
#include "extpow/ring.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace extpow {

// An N x N matrix over a ring with rows/columns indexed by the lexicographic
// enumeration of m-subsets of [n], N = C(n,m).  Storage is dense or a
// complete sparse triplet list; both compare equal entrywise.
class RepMatrix {
public:
    struct Triplet {
        int row = 0, col = 0;
        Elem val;
    };

    static RepMatrix from_dense(const Ring& ring, int n, int m, Mat mat);
    static RepMatrix from_triplets(const Ring& ring, int n, int m, std::vector<Triplet> entries);
    static RepMatrix identity(const Ring& ring, int n, int m);

    const Ring& ring() const { return *ring_; }
    const Ring* ring_ptr() const { return ring_; }
    int n() const { return n_; }
    int m() const { return m_; }
    int N() const { return N_; }
    bool is_dense() const { return dense_; }

    Elem entry(int i, int j) const;
    Mat to_dense() const;
    const std::vector<Triplet>& triplets() const { return sparse_; }

    // Entrywise product (dense result).
    RepMatrix operator*(const RepMatrix& o) const;
    bool equals_entrywise(const RepMatrix& o) const;

private:
    RepMatrix() = default;
    const Ring* ring_ = nullptr;
    int n_ = 0, m_ = 0, N_ = 0;
    bool dense_ = false;
    Mat mat_;                      // when dense_
    std::vector<Triplet> sparse_;  // complete nonzero entries otherwise
};

// Cauchy-Binet minor map: entry (I,J) is the m x m minor of g with rows I and
// columns J.  The public entry point dispatches to the OpenMP kernel when
// parallelism is enabled; the serial kernel is the reference implementation.
RepMatrix cauchy_binet(const Mat& g, int m);
RepMatrix cauchy_binet_serial(const Mat& g, int m);
RepMatrix cauchy_binet_omp(const Mat& g, int m);

// Minor with explicit row/column index lists (sorted).  Cofactor expansion
// for size <= 3, elimination-based determinants above; the two paths are
// cross-checked in the tests.
Elem minor_of(const Mat& g, const std::vector<int>& rows, const std::vector<int>& cols);

// Closed-form exterior transvection: identity plus C(n-2,m-1) off-diagonal
// entries sign(L,i)sign(L,j)*xi at positions (L u i, L u j).
RepMatrix exterior_transvection(int n, int m, int i, int j, const Elem& xi);

// The off-diagonal factors (row subset, column subset, coefficient).
struct TransvectionFactor {
    Subset row, col;
    Elem coeff;
};
std::vector<TransvectionFactor> exterior_transvection_factors(int n, int m, int i, int j,
                                                              const Elem& xi);

// Diagonal image of the torus generator d_i(xi): entry (I,I) = xi iff i in I.
RepMatrix exterior_torus(int n, int m, int i, const Elem& xi);

// rank(g - e) over a field.
std::size_t residue(const RepMatrix& g);

// The n x n transvection t_{i,j}(xi) = e + xi e_{i,j}.
Mat transvection_gl(const Ring& ring, int n, int i, int j, const Elem& xi);
// The n x n torus generator d_i(xi) = e + (xi - 1) e_{i,i}.
Mat torus_gl(const Ring& ring, int n, int i, const Elem& xi);

struct ElementaryWord {
    struct Factor {
        int i = 0, j = 0;
        Elem xi;
    };
    std::vector<Factor> factors;
};

// Ordered product of the exterior transvections of the word's factors; the
// empty word is the identity of the given ring.
RepMatrix evaluate_word(const ElementaryWord& word, int n, int m);
RepMatrix evaluate_word(const ElementaryWord& word, int n, int m, const Ring& ring);
// The underlying GL_n product (for the homomorphism cross-checks).
Mat evaluate_word_gl(const ElementaryWord& word, const Ring& ring, int n);

// Sampling set for transvection parameters: {0, 1, -1}, a generator of the
// unit group for prime moduli, the first indeterminate for polynomial rings.
std::vector<Elem> sample_elements(const Ring& ring);

// Deterministic word sampling; indices uniform over ordered pairs, parameter
// uniform over sample_elements(ring).
ElementaryWord random_word(int n, int length, const Ring& ring, std::uint64_t seed);
ElementaryWord random_word(int n, int length, const Ring& ring, std::mt19937_64& rng);

// Random invertible n x n matrix over a field: small entries, det != 0.
Mat random_invertible(const Ring& field, int n, std::mt19937_64& rng);

// Substitute the linear action of g into a polynomial over
// poly(R; x_I : I in /\^m[n]): x_I <- sum_J g_{I,J} x_J.
Elem substitute_linear(const Elem& poly, const RepMatrix& g);

// The canonical polynomial ring Z-coefficient variables x_I for (n,m), in
// subset enumeration order; `base` supplies the coefficients.
const Ring& grassmann_poly_ring(const Ring& base, int n, int m);

}  // namespace extpow
