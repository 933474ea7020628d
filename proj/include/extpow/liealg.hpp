#pragma once

#include "extpow/forms.hpp"
#include "extpow/matrix.hpp"
#include "extpow/ring.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace extpow {

// Kernel of the conditions sum_{i,j} z_{ij} x_i d(phi_h)/dx_j = 0 over all h,
// in the t^2 unknowns z_{ij} (t = number of poly variables).  Polynomials may
// carry integer or field coefficients; the system is solved over `field`.
SolutionSpace lie_fix_system(const std::vector<Elem>& polys, const Ring& field);
SolutionSpace lie_fix_system(const Ring& polyring, const std::vector<Elem>& polys,
                             const Ring& field);

// Ideal-stabilizer variant: the displayed sum for phi_h may land back in the
// span of the generators (one auxiliary scalar per (h,l) pair); the result is
// projected onto the z-unknowns.  This is the Plucker-system computation.
SolutionSpace lie_stabilizer_system(const std::vector<Elem>& polys, const Ring& field);

// Lie algebra of the stabilizer of the polarized form f = f^m_[n].
// extended = true admits the scalar (the Gbar_f case); the returned space is
// projected onto the y-unknowns (dimension N^2) in both modes.
SolutionSpace lie_dim_form_stabilizer(int n, int m, const Ring& field, bool extended);

// Lie algebra of the stabilizer of the ideal F (n not divisible by m); one
// scalar unknown per generator plus cross-term unknowns, projected onto y.
SolutionSpace lie_dim_ideal_stabilizer(int n, int m, const Ring& field);

// The three relation families from the dimension-bound proof, verified on
// every basis vector of the computed solution space.
struct RelationsReport {
    std::size_t vanishing_checked = 0;   // d(I,J) <= m-2 entries
    std::size_t offdiag_checked = 0;     // paired +-y relations
    std::size_t offdiag_classes = 0;     // root pairs (a,b), expected n(n-1)
    std::size_t diagonal_checked = 0;    // four-term diagonal relations
    bool pass = false;
};
RelationsReport structural_relations_check(int n, int m, const Ring& field, bool extended = true);

// The explicit diagonal relation on the weights K_j evaluated on every basis
// vector of Lie(G_f) (plain mode).
struct DiagonalRelation {
    std::vector<int> weight_index;  // subset index of K_j, j = 1..n
    std::vector<long long> coeff;   // relation coefficients
};
DiagonalRelation diagonal_relation(int n, int m);
bool verify_diagonal_relation(int n, int m, const Ring& field);

// d(/\^m) image of the elementary matrix unit e_{i,j}: the derivative of
// cauchy_binet(e + eps*e_{i,j}, m) at eps = 0, flattened to length N^2.
std::vector<Elem> exterior_derivative_of_unit(const Ring& field, int n, int m, int i, int j);

// Membership of a flat vector in the span of a solution space's basis.
bool in_span(const SolutionSpace& space, const std::vector<Elem>& v);

}  // namespace extpow
