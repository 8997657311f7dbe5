#ifndef HELMHSS_SPARSE_HPP
#define HELMHSS_SPARSE_HPP

#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "helmhss/types.hpp"

namespace helmhss {

/// Compressed sparse row storage of complex double entries. Column
/// indices are strictly increasing within every row.
struct ComplexSparseMatrix {
    int rows = 0, cols = 0;
    std::vector<int> row_ptr; // rows+1
    std::vector<int> col_idx;
    std::vector<Complex> values;

    std::size_t nnz() const { return values.size(); }
};

/// Assembles a CSR matrix from (row, col, value) triplets; duplicate
/// entries are summed. Triplet order does not affect the result.
ComplexSparseMatrix csr_from_triplets(int rows, int cols,
                                      std::vector<std::pair<std::pair<int, int>, Complex>> triplets);

/// y = A x (fixed traversal order).
void spmv(const ComplexSparseMatrix& A, std::span<const Complex> x, std::span<Complex> y);
CVector spmv(const ComplexSparseMatrix& A, const CVector& x);

/// y += a * A x
void spmv_add(const ComplexSparseMatrix& A, Complex a, std::span<const Complex> x,
              std::span<Complex> y);

/// y = A^T x (plain transpose, no conjugation).
void spmv_transpose(const ComplexSparseMatrix& A, std::span<const Complex> x,
                    std::span<Complex> y);

std::vector<Complex> diagonal(const ComplexSparseMatrix& A);

/// z_i = r_i / A_ii. Throws if some A_ii is zero (reports the index).
void jacobi_apply(const ComplexSparseMatrix& A, std::span<const Complex> r,
                  std::span<Complex> z);

/// sum_i a_i * A_i over matrices of identical dimensions (patterns may
/// differ; the result pattern is their union).
ComplexSparseMatrix csr_linear_combination(
    std::initializer_list<std::pair<Complex, const ComplexSparseMatrix*>> terms);

ComplexSparseMatrix csr_transpose(const ComplexSparseMatrix& A);

/// Textual export, one entry per line: "row col re im".
void write_matrix_entries(std::ostream& out, const ComplexSparseMatrix& A);
void write_matrix_entries(const std::string& path, const ComplexSparseMatrix& A);

} // namespace helmhss

#endif
