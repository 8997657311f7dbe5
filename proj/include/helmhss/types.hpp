#ifndef HELMHSS_TYPES_HPP
#define HELMHSS_TYPES_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace helmhss {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

constexpr Complex I{0.0, 1.0};

// --- small dense-vector helpers (fixed traversal order, deterministic) ---

inline double norm2(std::span<const Complex> x)
{
    double s = 0.0;
    for (const auto& v : x) s += std::norm(v);
    return std::sqrt(s);
}

/// Conjugated inner product sum(conj(x_i) * y_i).
inline Complex dot(std::span<const Complex> x, std::span<const Complex> y)
{
    Complex s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
    return s;
}

inline void axpy(Complex a, std::span<const Complex> x, std::span<Complex> y)
{
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

inline void scale(std::span<Complex> x, Complex a)
{
    for (auto& v : x) v *= a;
}

} // namespace helmhss

#endif
