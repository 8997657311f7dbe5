#include "helmhss/sparse.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>

namespace helmhss {

namespace {

void check_dims(const ComplexSparseMatrix& A, std::size_t x_size, std::size_t y_size,
                const char* who)
{
    if (x_size != static_cast<std::size_t>(A.cols) || y_size != static_cast<std::size_t>(A.rows))
        throw std::invalid_argument(std::string(who) + ": dimension mismatch");
}

} // namespace

ComplexSparseMatrix csr_from_triplets(
    int rows, int cols, std::vector<std::pair<std::pair<int, int>, Complex>> triplets)
{
    std::sort(triplets.begin(), triplets.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    ComplexSparseMatrix A;
    A.rows = rows;
    A.cols = cols;
    A.row_ptr.assign(rows + 1, 0);
    A.col_idx.reserve(triplets.size());
    A.values.reserve(triplets.size());

    std::size_t i = 0;
    while (i < triplets.size()) {
        const auto [r, c] = triplets[i].first;
        Complex v = triplets[i].second;
        while (i + 1 < triplets.size() && triplets[i + 1].first == triplets[i].first) {
            v += triplets[i + 1].second;
            ++i;
        }
        A.col_idx.push_back(c);
        A.values.push_back(v);
        ++A.row_ptr[r + 1];
        ++i;
    }
    for (int r = 0; r < rows; ++r) A.row_ptr[r + 1] += A.row_ptr[r];
    return A;
}

void spmv(const ComplexSparseMatrix& A, std::span<const Complex> x, std::span<Complex> y)
{
    check_dims(A, x.size(), y.size(), "spmv");
    for (int r = 0; r < A.rows; ++r) {
        Complex s = 0.0;
        for (int p = A.row_ptr[r]; p < A.row_ptr[r + 1]; ++p)
            s += A.values[p] * x[A.col_idx[p]];
        y[r] = s;
    }
}

CVector spmv(const ComplexSparseMatrix& A, const CVector& x)
{
    CVector y(A.rows);
    spmv(A, x, y);
    return y;
}

void spmv_add(const ComplexSparseMatrix& A, Complex a, std::span<const Complex> x,
              std::span<Complex> y)
{
    check_dims(A, x.size(), y.size(), "spmv_add");
    for (int r = 0; r < A.rows; ++r) {
        Complex s = 0.0;
        for (int p = A.row_ptr[r]; p < A.row_ptr[r + 1]; ++p)
            s += A.values[p] * x[A.col_idx[p]];
        y[r] += a * s;
    }
}

void spmv_transpose(const ComplexSparseMatrix& A, std::span<const Complex> x,
                    std::span<Complex> y)
{
    if (x.size() != static_cast<std::size_t>(A.rows) ||
        y.size() != static_cast<std::size_t>(A.cols))
        throw std::invalid_argument("spmv_transpose: dimension mismatch");
    std::fill(y.begin(), y.end(), Complex(0.0));
    for (int r = 0; r < A.rows; ++r) {
        const Complex xr = x[r];
        for (int p = A.row_ptr[r]; p < A.row_ptr[r + 1]; ++p)
            y[A.col_idx[p]] += A.values[p] * xr;
    }
}

std::vector<Complex> diagonal(const ComplexSparseMatrix& A)
{
    std::vector<Complex> d(std::min(A.rows, A.cols), Complex(0.0));
    for (int r = 0; r < static_cast<int>(d.size()); ++r)
        for (int p = A.row_ptr[r]; p < A.row_ptr[r + 1]; ++p)
            if (A.col_idx[p] == r) d[r] = A.values[p];
    return d;
}

void jacobi_apply(const ComplexSparseMatrix& A, std::span<const Complex> r,
                  std::span<Complex> z)
{
    check_dims(A, r.size(), z.size(), "jacobi_apply");
    const auto d = diagonal(A);
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d[i] == Complex(0.0))
            throw std::runtime_error("jacobi_apply: zero diagonal at index " + std::to_string(i));
        z[i] = r[i] / d[i];
    }
}

ComplexSparseMatrix csr_linear_combination(
    std::initializer_list<std::pair<Complex, const ComplexSparseMatrix*>> terms)
{
    if (terms.size() == 0) throw std::invalid_argument("csr_linear_combination: empty");
    const auto* first = terms.begin()->second;
    for (const auto& [a, Mp] : terms)
        if (Mp->rows != first->rows || Mp->cols != first->cols)
            throw std::invalid_argument("csr_linear_combination: dimension mismatch");

    ComplexSparseMatrix R;
    R.rows = first->rows;
    R.cols = first->cols;
    R.row_ptr.assign(R.rows + 1, 0);

    // Union the row patterns with an ordered merge per row.
    std::map<int, Complex> row;
    for (int r = 0; r < R.rows; ++r) {
        row.clear();
        for (const auto& [a, Mp] : terms)
            for (int p = Mp->row_ptr[r]; p < Mp->row_ptr[r + 1]; ++p)
                row[Mp->col_idx[p]] += a * Mp->values[p];
        for (const auto& [c, v] : row) {
            R.col_idx.push_back(c);
            R.values.push_back(v);
        }
        R.row_ptr[r + 1] = static_cast<int>(R.col_idx.size());
    }
    return R;
}

ComplexSparseMatrix csr_transpose(const ComplexSparseMatrix& A)
{
    std::vector<std::pair<std::pair<int, int>, Complex>> trips;
    trips.reserve(A.nnz());
    for (int r = 0; r < A.rows; ++r)
        for (int p = A.row_ptr[r]; p < A.row_ptr[r + 1]; ++p)
            trips.push_back({{A.col_idx[p], r}, A.values[p]});
    return csr_from_triplets(A.cols, A.rows, std::move(trips));
}

void write_matrix_entries(std::ostream& out, const ComplexSparseMatrix& A)
{
    out.precision(17);
    for (int r = 0; r < A.rows; ++r)
        for (int p = A.row_ptr[r]; p < A.row_ptr[r + 1]; ++p)
            out << r << ' ' << A.col_idx[p] << ' ' << A.values[p].real() << ' '
                << A.values[p].imag() << '\n';
}

void write_matrix_entries(const std::string& path, const ComplexSparseMatrix& A)
{
    std::ofstream f(path);
    if (!f) throw std::runtime_error("write_matrix_entries: cannot open " + path);
    write_matrix_entries(f, A);
}

} // namespace helmhss
