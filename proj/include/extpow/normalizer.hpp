#pragma once

#include "extpow/forms.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace extpow {

enum class TargetGroup { SL, GL };  // via the form characterizations G_f / Gbar_f

struct MembershipVerdict {
    std::string predicate;
    Verdict result = Verdict::False;
    std::optional<Elem> lambda;                        // semi-invariance witness
    std::optional<IdealStabWitness> ideal_witness;     // Gbar_F witness
    std::optional<std::pair<int, int>> failing_generator;
};

// g preserves f exactly (the /\^m SL_n characterization).
MembershipVerdict in_G_f(const RepMatrix& g, const MultilinearForm& f);
// g scales f by a unit (the /\^m GL_n characterization).
MembershipVerdict in_Gbar_f(const RepMatrix& g, const MultilinearForm& f);
// g preserves the ideal F (the characterization when m does not divide n).
MembershipVerdict in_Gbar_F(const RepMatrix& g, const std::vector<MultilinearForm>& generators);

// For every generating pair (i,j) with xi an indeterminate over the base
// ring, checks that g /\^m t_{i,j}(xi) g^{-1} lands in the target group.  The
// polynomial extension realizes the quantification over all R-algebras.
MembershipVerdict transports_elementary(const RepMatrix& g, const MultilinearForm& f,
                                        TargetGroup target);

// The conjugate g * /\^m t_{i,j}(xi) * g^{-1} over ring R[xi]; g must be
// invertible over its (field) ring.
RepMatrix conjugated_generator(const RepMatrix& g, int i, int j);

struct NormalizerSample {
    std::string kind;  // positive | negative | planted
    Verdict gbar = Verdict::False;
    Verdict trans_sl = Verdict::False;
    Verdict trans_gl = Verdict::False;
    bool consistent = false;  // the three verdicts coincide
    bool det_conj_ok = true;  // det of every conjugated generator equals 1
    std::optional<Elem> lambda;
    std::optional<Elem> det_h;
    std::optional<std::pair<int, int>> failing;
};

struct NormalizerReport {
    int n = 0, m = 0;
    std::string ring;
    int samples = 0;
    std::uint64_t seed = 0;
    std::vector<NormalizerSample> entries;
    bool consistent = false;
    bool pass = false;
};

// Sample-based verification of the normalizer equalities: `samples` images of
// random GL_n elements must satisfy every predicate, `samples` random GL_N
// elements plus three planted near-misses must be rejected by every
// predicate, and verdicts must agree across predicates on every sample.
NormalizerReport normalizer_equalities_demo(int n, int m, const Ring& ring, int samples,
                                            std::uint64_t seed);

}  // namespace extpow
