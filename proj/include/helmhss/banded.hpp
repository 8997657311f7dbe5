#ifndef HELMHSS_BANDED_HPP
#define HELMHSS_BANDED_HPP

#include <stdexcept>
#include <vector>

#include "helmhss/sparse.hpp"
#include "helmhss/types.hpp"

namespace helmhss {

struct BandedPivotError : std::runtime_error {
    int index;
    explicit BandedPivotError(int i)
        : std::runtime_error("banded LU: zero or near-zero pivot at row " + std::to_string(i)),
          index(i)
    {
    }
};

/// In-place banded LU factorization without pivoting. Row i of the band
/// holds columns i-lower .. i+upper; L has unit diagonal. The assembled
/// operators this is used on carry a large complex diagonal shift, which
/// keeps the no-pivot elimination stable.
class BandedLU {
public:
    explicit BandedLU(const ComplexSparseMatrix& A);

    /// Solves A x = b. Throws on dimension mismatch.
    void solve(std::span<const Complex> b, std::span<Complex> x) const;
    CVector solve(const CVector& b) const;

    int dimension() const { return n_; }
    int lower_bandwidth() const { return lower_; }
    int upper_bandwidth() const { return upper_; }

    /// Band entry (i, j), zero outside the band. Exposed for the
    /// reconstruction checks in the tests.
    Complex factored_entry(int i, int j) const;

private:
    int n_ = 0, lower_ = 0, upper_ = 0;
    std::size_t stride_ = 0;
    std::vector<Complex> band_; // n * (lower + upper + 1), row-major

    Complex& at(int i, int j) { return band_[i * stride_ + (j - i) + lower_]; }
    const Complex& at(int i, int j) const { return band_[i * stride_ + (j - i) + lower_]; }

    void factor(const std::vector<double>& row_max);
};

} // namespace helmhss

#endif
