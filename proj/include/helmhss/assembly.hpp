#ifndef HELMHSS_ASSEMBLY_HPP
#define HELMHSS_ASSEMBLY_HPP

#include <array>

#include "helmhss/mesh.hpp"
#include "helmhss/sparse.hpp"
#include "helmhss/types.hpp"

namespace helmhss {

/// Closed-form P1 element integrals on a single cell / boundary edge.
/// All geometric integrals are real; complex scalar coefficients are
/// applied at the operator-combination stage.
struct ElementMatrices {
    std::array<std::array<double, 3>, 3> mass;      // (A/12)[[2,1,1],[1,2,1],[1,1,2]]
    std::array<std::array<double, 3>, 3> stiffness; // grad(lambda_i).grad(lambda_j)*A
    std::array<std::array<double, 3>, 2> grad;      // per component: A*(grad lambda_j)_c
    double area;
};

ElementMatrices element_matrices(const Mesh& mesh, int cell);

/// (l/6)[[2,1],[1,2]] on an edge of length l.
std::array<std::array<double, 2>, 2> edge_mass_matrix(double length);

/// The assembled geometric forms every operator is combined from:
///   M      interior mass            (CG1 x CG1)
///   K      stiffness                (CG1 x CG1)
///   MGamma boundary mass on dOmega  (CG1 x CG1)
///   Msigma (DG0)^2 mass, diagonal: the cell area per component
///   G      gradient coupling <tau, grad u>   ((DG0)^2 x CG1)
struct AssembledForms {
    ComplexSparseMatrix M, K, MGamma;
    std::vector<double> Msigma;
    ComplexSparseMatrix G;
    std::vector<double> cell_area; // per cell, for cellwise gradient recovery
};

AssembledForms assemble_core(const Mesh& mesh, const DofMap& cg1, const DofMap& dg0);

/// B_delta = (-delta+ik)^2 M + K - (-delta+ik) MGamma.
ComplexSparseMatrix assemble_primal_operator(const AssembledForms& forms, double k, double delta);

/// LHS and RHS operators of the gamma=k HSS iteration for the primal
/// delta-shifted system:
///   LHS = (-2*delta*k^2 i + delta^2 - k^2) M + (-k^2 i + delta) MGamma + K
///   RHS = (k-1)/(k+1) * [(-2*delta*k^2 i - delta^2 + k^2) M + (-k^2 i - delta) MGamma - K]
/// The iteration's fixed point solves B_delta u = R with load scale 2k/(k+1).
struct HssPrimalPair {
    ComplexSparseMatrix lhs, rhs_op;
};
HssPrimalPair assemble_hss_primal(const AssembledForms& forms, double k, double delta);

/// CG1 system obtained by eliminating sigma from the mixed HSS step:
///   k^2 (delta-i)^2 M + K + k^2 (delta-i) MGamma.
ComplexSparseMatrix assemble_mixed_eliminated_lhs(const AssembledForms& forms, double k,
                                                  double delta);

/// Block action of the mixed form a_delta on a stacked (sigma, u) vector:
///   row V: (delta-ik) Msigma sigma - G u
///   row Q: G^T sigma + (delta-ik) M u + MGamma u
struct MixedOperator {
    const AssembledForms* forms;
    double k, delta;
    int n_sigma, n_u;

    MixedOperator(const AssembledForms& f, double k_, double delta_);
    int size() const { return n_sigma + n_u; }
    void apply(std::span<const Complex> x, std::span<Complex> y) const;
};

enum class SourceType { uniform, box, zero };

/// CG1 load vector <v, f>. The box source uses a 3-point edge-midpoint
/// quadrature of the indicator of [0.4,0.6]^2 (exact for cells fully
/// inside or outside).
CVector assemble_load(const Mesh& mesh, const DofMap& cg1, SourceType source);

/// Cellwise gradient of a CG1 field as (DG0)^2 coefficients.
void cellwise_gradient(const AssembledForms& forms, std::span<const Complex> u,
                       std::span<Complex> grad);

} // namespace helmhss

#endif
