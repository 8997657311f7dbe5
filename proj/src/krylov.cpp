#include "helmhss/krylov.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace helmhss {

namespace {

struct Givens {
    double c;
    Complex s;
};

Givens make_givens(Complex a, Complex b, Complex& r)
{
    const double an = std::abs(a), bn = std::abs(b);
    if (bn == 0.0) {
        r = a;
        return {1.0, Complex(0.0)};
    }
    if (an == 0.0) {
        r = bn;
        return {0.0, std::conj(b) / bn};
    }
    const double t = std::hypot(an, bn);
    const Complex phase = a / an;
    r = phase * t;
    return {an / t, phase * std::conj(b) / t};
}

void apply_givens(const Givens& g, Complex& a, Complex& b)
{
    const Complex ta = g.c * a + g.s * b;
    const Complex tb = -std::conj(g.s) * a + g.c * b;
    a = ta;
    b = tb;
}

// x = x0 + sum_i y_i Z_i with y from the j+1 x j+1 upper-triangular solve.
void form_iterate(const std::vector<CVector>& hcols, const std::vector<Complex>& g, int j,
                  const std::vector<CVector>& Z, const CVector& x0, CVector& x)
{
    std::vector<Complex> y(j + 1);
    for (int i = j; i >= 0; --i) {
        Complex s = g[i];
        for (int l = i + 1; l <= j; ++l) s -= hcols[l][i] * y[l];
        y[i] = s / hcols[i][i];
    }
    x = x0;
    for (int i = 0; i <= j; ++i) axpy(y[i], Z[i], x);
}

// One Arnoldi expansion: w = A P v_j orthogonalized against V (modified
// Gram-Schmidt plus one reorthogonalization pass). Returns ||w|| after
// orthogonalization and the pre-orthogonalization norm for the breakdown
// test.
std::pair<double, double> arnoldi_step(const LinOp& apply_A, const LinOp& apply_P,
                                       std::vector<CVector>& V, std::vector<CVector>& Z,
                                       CVector& hcol, int j, CVector& w)
{
    CVector z(V[j].size());
    apply_P(V[j], z);
    apply_A(z, w);
    Z.push_back(std::move(z));
    const double wnorm0 = norm2(w);

    for (int i = 0; i <= j; ++i) {
        const Complex h = dot(V[i], w);
        axpy(-h, V[i], w);
        hcol[i] = h;
    }
    for (int i = 0; i <= j; ++i) {
        const Complex corr = dot(V[i], w);
        axpy(-corr, V[i], w);
        hcol[i] += corr;
    }
    return {norm2(w), wnorm0};
}

} // namespace

FgmresResult fgmres(const LinOp& apply_A, const CVector& b, const CVector& x0,
                    const KrylovConfig& config, const LinOp& apply_P)
{
    if (config.rtol <= 0.0 || config.rtol >= 1.0)
        throw std::invalid_argument("fgmres: rtol must lie in (0,1)");
    if (config.maxiter < 1) throw std::invalid_argument("fgmres: maxiter must be >= 1");

    const std::size_t n = b.size();
    FgmresResult out;
    out.x = x0;

    CVector r(n);
    apply_A(x0, r);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
    const double beta = norm2(r);
    out.trace.residuals.push_back(beta);
    if (beta == 0.0) {
        out.trace.converged = true;
        return out;
    }

    std::vector<CVector> V, Z;
    V.reserve(config.maxiter + 1);
    scale(r, 1.0 / beta);
    V.push_back(std::move(r));

    std::vector<CVector> hcols;
    std::vector<Givens> rotations;
    std::vector<Complex> g(config.maxiter + 1, Complex(0.0));
    g[0] = beta;

    CVector w(n);
    for (int j = 0; j < config.maxiter; ++j) {
        hcols.emplace_back(j + 2, Complex(0.0));
        const auto [hnext, wnorm0] = arnoldi_step(apply_A, apply_P, V, Z, hcols[j], j, w);
        hcols[j][j + 1] = hnext;
        const bool lucky = hnext <= 1e-12 * wnorm0;
        if (!lucky) {
            CVector v(w);
            scale(v, 1.0 / hnext);
            V.push_back(std::move(v));
        }

        for (int i = 0; i < j; ++i) apply_givens(rotations[i], hcols[j][i], hcols[j][i + 1]);
        Complex rr;
        rotations.push_back(make_givens(hcols[j][j], hcols[j][j + 1], rr));
        hcols[j][j] = rr;
        hcols[j][j + 1] = 0.0;
        apply_givens(rotations[j], g[j], g[j + 1]);

        form_iterate(hcols, g, j, Z, x0, out.x);
        apply_A(out.x, w);
        for (std::size_t i = 0; i < n; ++i) w[i] = b[i] - w[i];
        const double rtrue = norm2(w);
        out.trace.residuals.push_back(rtrue);
        out.trace.iterations = j + 1;

        if (config.mode == KrylovMode::converge_to_rtol && rtrue <= config.rtol * beta) {
            out.trace.converged = true;
            break;
        }
        if (lucky) {
            out.trace.converged = true;
            break;
        }
    }
    return out;
}

void gmres_fixed(const LinOp& apply_A, std::span<const Complex> b, std::span<Complex> x,
                 int iters, const LinOp& apply_P)
{
    if (iters < 1) throw std::invalid_argument("gmres_fixed: iters must be >= 1");

    const std::size_t n = b.size();
    CVector r(n);
    apply_A(x, r);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
    const double beta = norm2(r);
    if (beta == 0.0) return;

    const CVector x0(x.begin(), x.end());
    std::vector<CVector> V, Z;
    V.reserve(iters + 1);
    scale(r, 1.0 / beta);
    V.push_back(std::move(r));

    std::vector<CVector> hcols;
    std::vector<Givens> rotations;
    std::vector<Complex> g(iters + 1, Complex(0.0));
    g[0] = beta;

    CVector w(n), xout;
    int last = -1;
    for (int j = 0; j < iters; ++j) {
        hcols.emplace_back(j + 2, Complex(0.0));
        const auto [hnext, wnorm0] = arnoldi_step(apply_A, apply_P, V, Z, hcols[j], j, w);
        hcols[j][j + 1] = hnext;
        const bool lucky = hnext <= 1e-12 * wnorm0;
        if (!lucky) {
            CVector v(w);
            scale(v, 1.0 / hnext);
            V.push_back(std::move(v));
        }

        for (int i = 0; i < j; ++i) apply_givens(rotations[i], hcols[j][i], hcols[j][i + 1]);
        Complex rr;
        rotations.push_back(make_givens(hcols[j][j], hcols[j][j + 1], rr));
        hcols[j][j] = rr;
        hcols[j][j + 1] = 0.0;
        apply_givens(rotations[j], g[j], g[j + 1]);

        last = j;
        if (lucky) break;
    }

    form_iterate(hcols, g, last, Z, x0, xout);
    std::copy(xout.begin(), xout.end(), x.begin());
}

void write_trace_csv(std::ostream& out, const IterationTrace& trace)
{
    out.precision(17);
    out << "iter,residual\n";
    for (std::size_t i = 0; i < trace.residuals.size(); ++i)
        out << i << ',' << trace.residuals[i] << '\n';
}

void write_trace_csv(const std::string& path, const IterationTrace& trace)
{
    std::ofstream f(path);
    if (!f) throw std::runtime_error("write_trace_csv: cannot open " + path);
    write_trace_csv(f, trace);
}

} // namespace helmhss
