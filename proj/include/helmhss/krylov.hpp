#ifndef HELMHSS_KRYLOV_HPP
#define HELMHSS_KRYLOV_HPP

#include <functional>
#include <iosfwd>
#include <string>

#include "helmhss/types.hpp"

namespace helmhss {

using LinOp = std::function<void(std::span<const Complex>, std::span<Complex>)>;

enum class KrylovMode { converge_to_rtol, fixed_iteration_count };

struct KrylovConfig {
    double rtol = 1e-6;
    int maxiter = 200;
    KrylovMode mode = KrylovMode::converge_to_rtol;
};

/// Per-iteration true (unpreconditioned) residual 2-norms; the first
/// entry is the initial residual.
struct IterationTrace {
    std::vector<double> residuals;
    int iterations = 0;
    bool converged = false;
};

struct FgmresResult {
    CVector x;
    IterationTrace trace;
};

/// Right-preconditioned flexible GMRES without restarts (modified
/// Gram-Schmidt with one reorthogonalization pass). The preconditioner
/// may change between iterations. Convergence is measured on the true
/// residual relative to ||b - A x0||.
FgmresResult fgmres(const LinOp& apply_A, const CVector& b, const CVector& x0,
                    const KrylovConfig& config, const LinOp& apply_P);

/// Right-preconditioned GMRES run for exactly `iters` steps starting
/// from x (updated in place); no convergence test. Used as the multigrid
/// smoother. Returns immediately when the initial residual is exactly zero.
void gmres_fixed(const LinOp& apply_A, std::span<const Complex> b, std::span<Complex> x,
                 int iters, const LinOp& apply_P);

/// "iter,residual" CSV.
void write_trace_csv(std::ostream& out, const IterationTrace& trace);
void write_trace_csv(const std::string& path, const IterationTrace& trace);

} // namespace helmhss

#endif
