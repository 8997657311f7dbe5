#ifndef HELMHSS_HSS_HPP
#define HELMHSS_HSS_HPP

#include <memory>

#include "helmhss/assembly.hpp"
#include "helmhss/banded.hpp"
#include "helmhss/multigrid.hpp"

namespace helmhss {

enum class Formulation { primal, mixed };
enum class InnerKind { direct, multigrid };

/// Error-contraction bound (1-1/k)/(1+1/k) of the gamma=k splitting
/// iteration; each step is norm-preserving up to this Cayley factor.
double hss_contraction_bound(double k);

struct HssConfig {
    double k = 16.0;
    double delta_hat = 2.0;
    double theta = 1.0; // inner steps per application: ceil(k^theta)
    InnerKind inner = InnerKind::direct;
    MgConfig mg;
    Formulation formulation = Formulation::primal;

    int n_inner() const;
};

/// One inner solve of the O(k)-shifted CG1 system, exact (banded LU) or
/// approximate (a fixed number of W-cycles from zero).
class InnerSolver {
public:
    virtual ~InnerSolver() = default;
    virtual void solve(const CVector& rhs, CVector& out) = 0;
    virtual long cycles_used() const { return 0; }
    virtual RateAccumulator* mg_contraction() { return nullptr; }
};

class DirectInnerSolver final : public InnerSolver {
public:
    explicit DirectInnerSolver(const ComplexSparseMatrix& lhs) : lu_(lhs) {}
    void solve(const CVector& rhs, CVector& out) override
    {
        out.resize(rhs.size());
        lu_.solve(rhs, out);
    }

private:
    BandedLU lu_;
};

class MultigridInnerSolver final : public InnerSolver {
public:
    MultigridInnerSolver(MgHierarchy hier, int cycles)
        : hier_(std::move(hier)), cycles_(cycles)
    {
    }
    void solve(const CVector& rhs, CVector& out) override
    {
        out = mg_solve_hss(hier_, rhs, cycles_, &contraction_);
        total_cycles_ += cycles_;
    }
    long cycles_used() const override { return total_cycles_; }
    RateAccumulator* mg_contraction() override { return &contraction_; }

private:
    MgHierarchy hier_;
    int cycles_;
    long total_cycles_ = 0;
    RateAccumulator contraction_;
};

/// Fallback when the banded factorization hits a small pivot: a
/// well-converged FGMRES(Jacobi) solve per inner step.
class IterativeInnerSolver final : public InnerSolver {
public:
    explicit IterativeInnerSolver(const ComplexSparseMatrix& lhs, double rtol = 1e-12);
    void solve(const CVector& rhs, CVector& out) override;

private:
    const ComplexSparseMatrix lhs_;
    std::vector<Complex> inv_diag_;
    double rtol_;
};

/// Operators of the gamma=k iteration for the delta-shifted primal
/// system. The fixed point solves shifted_op u = R.
struct ShiftedPrimalSystem {
    double k = 0.0, delta = 0.0;
    ComplexSparseMatrix lhs, rhs_op;
    ComplexSparseMatrix shifted_op; // B_delta, used for residual rates
    double load_scale = 0.0;        // 2k/(k+1)
};

ShiftedPrimalSystem build_shifted_primal_system(const AssembledForms& forms, double k,
                                                double delta);

/// Mixed counterpart: sigma is eliminated cellwise, leaving one CG1
/// solve per step; the fixed point solves the delta-shifted mixed
/// system blockwise.
struct ShiftedMixedSystem {
    double k = 0.0, delta = 0.0;
    const AssembledForms* forms = nullptr;
    ComplexSparseMatrix lhs;
};

ShiftedMixedSystem build_shifted_mixed_system(const AssembledForms& forms, double k,
                                              double delta);

/// u_{n+1} = solve(lhs, rhs_op u_n + load_scale * R).
void hss_step_primal(const ShiftedPrimalSystem& sys, InnerSolver& solver,
                     const CVector& u_n, std::span<const Complex> R, CVector& u_next);

/// One mixed step: form the cellwise source g_n, solve the eliminated
/// CG1 system, recover sigma_{n+1} cellwise. sigma0R is the (diagonal)
/// Riesz representer of the sigma part of R, fixed per application.
void hss_step_mixed(const ShiftedMixedSystem& sys, InnerSolver& solver, CVector& sigma,
                    CVector& u, const CVector& sigma0R, std::span<const Complex> Ru);

double primal_shifted_residual_norm(const ShiftedPrimalSystem& sys,
                                    std::span<const Complex> u, std::span<const Complex> R);
double mixed_shifted_residual_norm(const ShiftedMixedSystem& sys, std::span<const Complex> sigma,
                                   std::span<const Complex> u, std::span<const Complex> R);

/// The shifted-splitting preconditioner: n_inner steps from a zero state.
/// Applications are deterministic; per-step shifted-system residuals
/// accumulate into `rate` across all applications.
class HssPreconditioner {
public:
    HssPreconditioner(const ShiftedPrimalSystem& sys, InnerSolver& solver, int n_inner);
    HssPreconditioner(const ShiftedMixedSystem& sys, InnerSolver& solver, int n_inner);

    void apply(std::span<const Complex> R, std::span<Complex> out);

    long total_steps() const { return total_steps_; }
    long total_cycles() const { return solver_->cycles_used(); }
    double eta_s() const { return rate_.rate(); }
    const RateAccumulator* mg_contraction() const
    {
        return const_cast<InnerSolver*>(solver_)->mg_contraction();
    }

private:
    const ShiftedPrimalSystem* primal_ = nullptr;
    const ShiftedMixedSystem* mixed_ = nullptr;
    InnerSolver* solver_;
    int n_inner_;
    long total_steps_ = 0;
    RateAccumulator rate_;
};

/// The splitting iteration as a solver in its own right for the
/// delta-shifted primal system: iterate until the shifted-system
/// residual drops below tol relative to the initial one.
struct StationaryResult {
    CVector u;
    std::vector<double> residuals;
    bool converged = false;
};
StationaryResult hss_stationary_solve(const ShiftedPrimalSystem& sys, InnerSolver& solver,
                                      const CVector& F, double tol, int maxiter = 10000);

/// Geometric-mean contraction (r_last / r_first)^(1/(len-1)).
double rate(std::span<const double> residuals);

/// ||u||_{H}^2 = 2 delta k u^H M u + k u^H MGamma u.
double h_prm_norm(const AssembledForms& forms, double k, double delta,
                  std::span<const Complex> u);

/// ||(sigma,u)||_{H}^2 = delta sigma^H Msigma sigma + delta u^H M u + u^H MGamma u.
double h_mxd_norm(const AssembledForms& forms, double delta, std::span<const Complex> sigma,
                  std::span<const Complex> u);

} // namespace helmhss

#endif
