#include "helmhss/banded.hpp"

#include <algorithm>
#include <cmath>

namespace helmhss {

BandedLU::BandedLU(const ComplexSparseMatrix& A)
{
    if (A.rows != A.cols) throw std::invalid_argument("BandedLU: matrix must be square");
    n_ = A.rows;

    for (int r = 0; r < n_; ++r) {
        for (int p = A.row_ptr[r]; p < A.row_ptr[r + 1]; ++p) {
            const int c = A.col_idx[p];
            lower_ = std::max(lower_, r - c);
            upper_ = std::max(upper_, c - r);
        }
    }

    stride_ = static_cast<std::size_t>(lower_) + upper_ + 1;
    band_.assign(static_cast<std::size_t>(n_) * stride_, Complex(0.0));

    std::vector<double> row_max(n_, 0.0);
    for (int r = 0; r < n_; ++r) {
        for (int p = A.row_ptr[r]; p < A.row_ptr[r + 1]; ++p) {
            at(r, A.col_idx[p]) = A.values[p];
            row_max[r] = std::max(row_max[r], std::abs(A.values[p]));
        }
    }

    factor(row_max);
}

void BandedLU::factor(const std::vector<double>& row_max)
{
    for (int i = 0; i < n_; ++i) {
        const Complex piv = at(i, i);
        if (std::abs(piv) < 1e-14 * row_max[i] || piv == Complex(0.0))
            throw BandedPivotError(i);

        const int rmax = std::min(n_ - 1, i + lower_);
        const int len = std::min(upper_, n_ - 1 - i);
        const Complex* src = &band_[i * stride_ + lower_ + 1]; // row i, columns i+1..
        for (int r = i + 1; r <= rmax; ++r) {
            Complex& lri = at(r, i);
            if (lri == Complex(0.0) && len == 0) continue;
            const Complex m = lri / piv;
            lri = m;
            Complex* dst = &band_[r * stride_ + (i - r) + lower_ + 1];
            for (int c = 0; c < len; ++c) dst[c] -= m * src[c];
        }
    }
}

void BandedLU::solve(std::span<const Complex> b, std::span<Complex> x) const
{
    if (b.size() != static_cast<std::size_t>(n_) || x.size() != static_cast<std::size_t>(n_))
        throw std::invalid_argument("BandedLU::solve: dimension mismatch");

    // forward: L y = b (unit diagonal)
    for (int i = 0; i < n_; ++i) {
        const int j0 = std::max(0, i - lower_);
        const Complex* row = &band_[i * stride_ + (j0 - i) + lower_];
        Complex s = b[i];
        for (int j = j0; j < i; ++j) s -= row[j - j0] * x[j];
        x[i] = s;
    }
    // backward: U x = y
    for (int i = n_ - 1; i >= 0; --i) {
        const int j1 = std::min(n_ - 1, i + upper_);
        const Complex* row = &band_[i * stride_ + lower_];
        Complex s = x[i];
        for (int j = i + 1; j <= j1; ++j) s -= row[j - i] * x[j];
        x[i] = s / row[0];
    }
}

CVector BandedLU::solve(const CVector& b) const
{
    CVector x(n_);
    solve(b, x);
    return x;
}

Complex BandedLU::factored_entry(int i, int j) const
{
    if (j - i > upper_ || i - j > lower_) return Complex(0.0);
    return at(i, j);
}

} // namespace helmhss
