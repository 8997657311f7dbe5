#include "helmhss/hss.hpp"

#include <cmath>
#include <stdexcept>

#include "helmhss/krylov.hpp"

namespace helmhss {

double hss_contraction_bound(double k)
{
    return (1.0 - 1.0 / k) / (1.0 + 1.0 / k);
}

int HssConfig::n_inner() const
{
    double v = std::pow(k, theta);
    const double nearest = std::round(v);
    if (std::abs(v - nearest) < 1e-8 * std::max(1.0, nearest)) v = nearest;
    return std::max(1, static_cast<int>(std::ceil(v)));
}

IterativeInnerSolver::IterativeInnerSolver(const ComplexSparseMatrix& lhs, double rtol)
    : lhs_(lhs), inv_diag_(diagonal(lhs)), rtol_(rtol)
{
    for (auto& d : inv_diag_) {
        if (d == Complex(0.0))
            throw std::runtime_error("IterativeInnerSolver: zero diagonal");
        d = 1.0 / d;
    }
}

void IterativeInnerSolver::solve(const CVector& rhs, CVector& out)
{
    const LinOp A = [this](std::span<const Complex> in, std::span<Complex> o) {
        spmv(lhs_, in, o);
    };
    const LinOp P = [this](std::span<const Complex> in, std::span<Complex> o) {
        for (std::size_t i = 0; i < in.size(); ++i) o[i] = inv_diag_[i] * in[i];
    };
    KrylovConfig cfg;
    cfg.rtol = rtol_;
    cfg.maxiter = 400;
    out = fgmres(A, rhs, CVector(rhs.size(), Complex(0.0)), cfg, P).x;
}

ShiftedPrimalSystem build_shifted_primal_system(const AssembledForms& forms, double k,
                                                double delta)
{
    if (k <= 1.0) throw std::invalid_argument("build_shifted_primal_system: k must be > 1");
    if (delta <= 0.0) throw std::invalid_argument("build_shifted_primal_system: delta must be > 0");

    ShiftedPrimalSystem sys;
    sys.k = k;
    sys.delta = delta;
    auto pair = assemble_hss_primal(forms, k, delta);
    sys.lhs = std::move(pair.lhs);
    sys.rhs_op = std::move(pair.rhs_op);
    sys.shifted_op = assemble_primal_operator(forms, k, delta);
    sys.load_scale = 2.0 * k / (k + 1.0);
    return sys;
}

ShiftedMixedSystem build_shifted_mixed_system(const AssembledForms& forms, double k,
                                              double delta)
{
    if (k <= 1.0) throw std::invalid_argument("build_shifted_mixed_system: k must be > 1");
    if (delta <= 0.0) throw std::invalid_argument("build_shifted_mixed_system: delta must be > 0");

    ShiftedMixedSystem sys;
    sys.k = k;
    sys.delta = delta;
    sys.forms = &forms;
    sys.lhs = assemble_mixed_eliminated_lhs(forms, k, delta);
    return sys;
}

void hss_step_primal(const ShiftedPrimalSystem& sys, InnerSolver& solver,
                     const CVector& u_n, std::span<const Complex> R, CVector& u_next)
{
    CVector rhs = spmv(sys.rhs_op, u_n);
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += sys.load_scale * R[i];
    solver.solve(rhs, u_next);
}

void hss_step_mixed(const ShiftedMixedSystem& sys, InnerSolver& solver, CVector& sigma,
                    CVector& u, const CVector& sigma0R, std::span<const Complex> Ru)
{
    const AssembledForms& f = *sys.forms;
    const double k = sys.k;
    const Complex dp(sys.delta, 1.0);  // delta + i
    const Complex dm(sys.delta, -1.0); // delta - i
    const double c1 = (k - 1.0) / (k + 1.0);
    const double c2 = 2.0 * k / (k + 1.0);
    const std::size_t n_sigma = sigma.size();
    const std::size_t n_u = u.size();

    // g_n = c1 (k (delta+i) sigma_n + grad u_n) + c2 sigma0R
    CVector g(n_sigma);
    cellwise_gradient(f, u, g);
    for (std::size_t i = 0; i < n_sigma; ++i)
        g[i] = c1 * (k * dp * sigma[i] + g[i]) + c2 * sigma0R[i];

    // rhs = k(delta-i) [ c1 (k(delta+i) M u + k MGamma u - G^T sigma) + c2 Ru ] - G^T g
    CVector inner(n_u, Complex(0.0)), tmp(n_u);
    spmv_add(f.M, c1 * k * dp, u, inner);
    spmv_add(f.MGamma, Complex(c1 * k), u, inner);
    spmv_transpose(f.G, sigma, tmp);
    for (std::size_t i = 0; i < n_u; ++i) inner[i] += -c1 * tmp[i] + c2 * Ru[i];

    spmv_transpose(f.G, g, tmp);
    CVector rhs(n_u);
    for (std::size_t i = 0; i < n_u; ++i) rhs[i] = k * dm * inner[i] - tmp[i];

    solver.solve(rhs, u);

    // sigma_{n+1} = (g_n + grad u_{n+1}) / (k (delta - i))
    cellwise_gradient(f, u, sigma);
    const Complex inv = 1.0 / (k * dm);
    for (std::size_t i = 0; i < n_sigma; ++i) sigma[i] = (g[i] + sigma[i]) * inv;
}

double primal_shifted_residual_norm(const ShiftedPrimalSystem& sys,
                                    std::span<const Complex> u, std::span<const Complex> R)
{
    CVector r(u.size());
    spmv(sys.shifted_op, u, r);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = R[i] - r[i];
    return norm2(r);
}

double mixed_shifted_residual_norm(const ShiftedMixedSystem& sys, std::span<const Complex> sigma,
                                   std::span<const Complex> u, std::span<const Complex> R)
{
    const AssembledForms& f = *sys.forms;
    const Complex s(sys.delta, -sys.k); // delta - ik
    const std::size_t n_sigma = sigma.size();
    const std::size_t n_u = u.size();

    CVector rv(n_sigma);
    spmv(f.G, u, rv);
    double acc = 0.0;
    for (std::size_t i = 0; i < n_sigma; ++i)
        acc += std::norm(R[i] - (s * f.Msigma[i] * sigma[i] - rv[i]));

    CVector rq(n_u);
    spmv_transpose(f.G, sigma, rq);
    spmv_add(f.M, s, u, rq);
    spmv_add(f.MGamma, Complex(1.0), u, rq);
    for (std::size_t i = 0; i < n_u; ++i) acc += std::norm(R[n_sigma + i] - rq[i]);
    return std::sqrt(acc);
}

HssPreconditioner::HssPreconditioner(const ShiftedPrimalSystem& sys, InnerSolver& solver,
                                     int n_inner)
    : primal_(&sys), solver_(&solver), n_inner_(n_inner)
{
    if (n_inner < 1) throw std::invalid_argument("HssPreconditioner: n_inner must be >= 1");
}

HssPreconditioner::HssPreconditioner(const ShiftedMixedSystem& sys, InnerSolver& solver,
                                     int n_inner)
    : mixed_(&sys), solver_(&solver), n_inner_(n_inner)
{
    if (n_inner < 1) throw std::invalid_argument("HssPreconditioner: n_inner must be >= 1");
}

void HssPreconditioner::apply(std::span<const Complex> R, std::span<Complex> out)
{
    if (primal_) {
        CVector u(R.size(), Complex(0.0)), u_next;
        double r_prev = norm2(R);
        for (int s = 0; s < n_inner_; ++s) {
            hss_step_primal(*primal_, *solver_, u, R, u_next);
            u.swap(u_next);
            const double res = primal_shifted_residual_norm(*primal_, u, R);
            rate_.add(res, r_prev);
            r_prev = res;
            ++total_steps_;
        }
        std::copy(u.begin(), u.end(), out.begin());
    } else {
        const std::size_t n_sigma = mixed_->forms->Msigma.size();
        const std::size_t n_u = static_cast<std::size_t>(mixed_->lhs.rows);
        if (R.size() != n_sigma + n_u)
            throw std::invalid_argument("HssPreconditioner::apply: dimension mismatch");

        CVector sigma0R(n_sigma);
        for (std::size_t i = 0; i < n_sigma; ++i) sigma0R[i] = R[i] / mixed_->forms->Msigma[i];

        CVector sigma(n_sigma, Complex(0.0)), u(n_u, Complex(0.0));
        double r_prev = norm2(R);
        const auto Ru = R.subspan(n_sigma);
        for (int s = 0; s < n_inner_; ++s) {
            hss_step_mixed(*mixed_, *solver_, sigma, u, sigma0R, Ru);
            const double res = mixed_shifted_residual_norm(*mixed_, sigma, u, R);
            rate_.add(res, r_prev);
            r_prev = res;
            ++total_steps_;
        }
        std::copy(sigma.begin(), sigma.end(), out.begin());
        std::copy(u.begin(), u.end(), out.begin() + n_sigma);
    }
}

StationaryResult hss_stationary_solve(const ShiftedPrimalSystem& sys, InnerSolver& solver,
                                      const CVector& F, double tol, int maxiter)
{
    StationaryResult res;
    res.u.assign(F.size(), Complex(0.0));
    const double r0 = norm2(F);
    res.residuals.push_back(r0);
    if (r0 == 0.0) {
        res.converged = true;
        return res;
    }

    CVector u_next;
    for (int it = 0; it < maxiter; ++it) {
        hss_step_primal(sys, solver, res.u, F, u_next);
        res.u.swap(u_next);
        const double r = primal_shifted_residual_norm(sys, res.u, F);
        res.residuals.push_back(r);
        if (r <= tol * r0) {
            res.converged = true;
            break;
        }
    }
    return res;
}

double rate(std::span<const double> residuals)
{
    if (residuals.size() < 2) throw std::invalid_argument("rate: need at least 2 residuals");
    if (residuals.front() <= 0.0) throw std::invalid_argument("rate: zero initial residual");
    const double steps = static_cast<double>(residuals.size() - 1);
    return std::pow(residuals.back() / residuals.front(), 1.0 / steps);
}

double h_prm_norm(const AssembledForms& forms, double k, double delta,
                  std::span<const Complex> u)
{
    CVector t(u.size());
    spmv(forms.M, u, t);
    double m = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) m += std::real(std::conj(u[i]) * t[i]);
    spmv(forms.MGamma, u, t);
    double g = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) g += std::real(std::conj(u[i]) * t[i]);
    return std::sqrt(2.0 * delta * k * m + k * g);
}

double h_mxd_norm(const AssembledForms& forms, double delta, std::span<const Complex> sigma,
                  std::span<const Complex> u)
{
    double s = 0.0;
    for (std::size_t i = 0; i < sigma.size(); ++i) s += forms.Msigma[i] * std::norm(sigma[i]);

    CVector t(u.size());
    spmv(forms.M, u, t);
    double m = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) m += std::real(std::conj(u[i]) * t[i]);
    spmv(forms.MGamma, u, t);
    double g = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) g += std::real(std::conj(u[i]) * t[i]);
    return std::sqrt(delta * s + delta * m + g);
}

} // namespace helmhss
