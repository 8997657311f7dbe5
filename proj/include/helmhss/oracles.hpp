#ifndef HELMHSS_ORACLES_HPP
#define HELMHSS_ORACLES_HPP

#include "helmhss/assembly.hpp"
#include "helmhss/mesh.hpp"
#include "helmhss/sparse.hpp"
#include "helmhss/types.hpp"

// Independent verification路 oracles: dense assembly by numerical
// quadrature with basis functions obtained from linear solves, and dense
// factorizations. Deliberately built on none of the production assembly
// or solver paths; used by the tests and the verify command only.

namespace helmhss::oracle {

struct DenseMatrix {
    int rows = 0, cols = 0;
    std::vector<Complex> a; // row-major

    DenseMatrix() = default;
    DenseMatrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c) {}
    Complex& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    const Complex& operator()(int i, int j) const
    {
        return a[static_cast<std::size_t>(i) * cols + j];
    }
};

DenseMatrix dense_from_csr(const ComplexSparseMatrix& A);
CVector dense_matvec(const DenseMatrix& A, const CVector& x);
DenseMatrix dense_matmul(const DenseMatrix& A, const DenseMatrix& B);
double max_abs_diff(const DenseMatrix& A, const DenseMatrix& B);

/// Dense LU with partial pivoting; solves A x = b.
CVector dense_lu_solve(DenseMatrix A, CVector b);

/// Dense forms assembled by quadrature (3-point edge-midpoint rule in
/// cells, 2-point Gauss on boundary edges) with P1 basis coefficients
/// obtained by solving small Vandermonde systems.
struct DenseForms {
    DenseMatrix M, K, MGamma, G, Msigma;
};
DenseForms quadrature_forms(const Mesh& mesh);

/// Dense block matrix of the mixed form a_delta acting on stacked
/// (sigma, u):  [ (d-ik) Msigma   -G ;  G^T   (d-ik) M + MGamma ].
DenseMatrix dense_mixed_operator(const DenseForms& forms, double k, double delta);

} // namespace helmhss::oracle

#endif
