#pragma once

#include "extpow/combinat.hpp"
#include "extpow/extrep.hpp"
#include "extpow/matrix.hpp"
#include "extpow/ring.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace extpow {

// A k-tuple of subset indices packed one byte per block slot.
using TupleKey = std::uint64_t;

TupleKey tuple_encode(std::span<const int> idxs);
void tuple_decode(TupleKey key, int k, int* out);

// A k-linear form on R^N given by a sparse coefficient map from k-tuples of
// subsets to ring elements.  Keys are sorted; coefficients nonzero.
class MultilinearForm {
public:
    MultilinearForm(const Ring& ring, int n, int m, std::vector<int> support,
                    std::vector<std::pair<TupleKey, Elem>> coeffs);

    const Ring& ring() const { return *ring_; }
    int n() const { return n_; }
    int m() const { return m_; }
    int k() const { return k_; }
    int N() const { return N_; }
    const std::vector<int>& support() const { return support_; }
    const std::vector<std::pair<TupleKey, Elem>>& coeffs() const { return coeffs_; }
    const Elem* find(TupleKey key) const;
    std::vector<Subset> blocks_of(TupleKey key) const;

    bool operator==(const MultilinearForm& o) const;

private:
    const Ring* ring_;
    int n_, m_, k_, N_;
    std::vector<int> support_;
    std::vector<std::pair<TupleKey, Elem>> coeffs_;
};

// Full polarization of q^m_V: coefficient sign(I_1,...,I_k) at every ordered
// partition of V into m-blocks.  V defaults to [n].
MultilinearForm form_polarized(const Ring& ring, int n, int m, std::vector<int> V = {});

// sum over coefficient keys of coeff * prod_l x^l[I_l].
Elem evaluate_form(const MultilinearForm& f, const std::vector<std::vector<Elem>>& vectors);

// (x^1,...,x^k) |-> f(g x^1, ..., g x^k).  Dispatches to the OpenMP kernel
// when enabled; the serial kernel is the reference.
MultilinearForm act_on_form(const RepMatrix& g, const MultilinearForm& f);
MultilinearForm act_on_form_serial(const RepMatrix& g, const MultilinearForm& f);
MultilinearForm act_on_form_omp(const RepMatrix& g, const MultilinearForm& f);

// lambda with act_on_form(g,f) = lambda*f coefficientwise and lambda a unit;
// absent otherwise.
std::optional<Elem> semi_invariance_scalar(const RepMatrix& g, const MultilinearForm& f);

// ---------------------------------------------------------------------------
// Plucker relations
// ---------------------------------------------------------------------------

struct PluckerSet {
    int n = 0, m = 0;
    const Ring* poly_ring = nullptr;  // poly(base; x_I)
    std::vector<Elem> polys;          // normalized degree-2 generators
};

// f_{I,J} = sum_h (-1)^h x_{i1..i(m-1) j_h} x_{j1..^j_h..j(m+1)} with the
// extended Grassmann-coordinate sign conventions; may be zero.
Elem plucker_poly(const Ring& base, int n, int m, const Subset& I, const Subset& J);

// All nonzero relations, normalized (leading coefficient +1 in the canonical
// term order) and duplicate-free.
PluckerSet plucker_set(const Ring& base, int n, int m);

// Linear independence of the generators' coefficient vectors over F_p.
bool independent_mod_p(const PluckerSet& set, std::uint64_t p);
bool independent_mod_p(const std::vector<MultilinearForm>& gens, std::uint64_t p);

enum class Verdict { True, False, Indeterminate };

// True iff every generator's image under x -> gx lies in the span of the
// generators (the degree-2 part of the ideal).  Over Z the solve is lifted to
// Q and the witness checked for integrality; composite moduli are rejected.
Verdict stabilizes_plucker(const RepMatrix& g);

// ---------------------------------------------------------------------------
// The ideal F (n not divisible by m)
// ---------------------------------------------------------------------------

// One polarized form per ml-element subset V of [n], l = floor(n/m).
std::vector<MultilinearForm> ideal_F_generators(const Ring& ring, int n, int m);

struct IdealStabWitness {
    std::vector<Elem> lambdas;              // diagonal coefficients, per generator
    std::vector<std::vector<Elem>> cross;   // cross[j][l], l != j; cross[j][j] unused
};

struct IdealStabResult {
    Verdict verdict = Verdict::False;
    std::optional<IdealStabWitness> witness;
};

// Solves act(g, f_{V_j}) = lambda_j f_{V_j} + sum_{l != j} c(j,l) f_{V_l} for
// every j.  Witness present iff every solution exists and the p x p
// coefficient matrix (lambdas on the diagonal) is invertible; that is the
// exact meaning of "g preserves the ideal F" inside GL_N.  Individual
// lambda_j may be zero (images of permutation matrices permute the
// generators).
IdealStabResult stabilizes_ideal_F(const RepMatrix& g,
                                   const std::vector<MultilinearForm>& generators);

// Verifies a witness by direct re-substitution.
bool verify_ideal_witness(const RepMatrix& g, const std::vector<MultilinearForm>& generators,
                          const IdealStabWitness& witness);

// ---------------------------------------------------------------------------
// Uniqueness of semi-invariant forms
// ---------------------------------------------------------------------------

// Kernel of the conditions act(t, F) = F over all generators t = /\^m
// t_{i,j}(1), inside the grading-(1,...,1) coefficient space of dimension
// N^k.  The transvection action pins the semi-invariance scalar to 1.
SolutionSpace semi_invariant_space(int n, int m, const Ring& field);

// Interprets a coefficient vector of the space above as a form.
MultilinearForm form_from_coefficient_vector(const Ring& ring, int n, int m,
                                             const std::vector<Elem>& coeffs);

}  // namespace extpow
