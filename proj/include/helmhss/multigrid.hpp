#ifndef HELMHSS_MULTIGRID_HPP
#define HELMHSS_MULTIGRID_HPP

#include <functional>
#include <vector>

#include "helmhss/assembly.hpp"
#include "helmhss/mesh.hpp"
#include "helmhss/sparse.hpp"

namespace helmhss {

struct MgConfig {
    int levels = 4;
    int smooth_steps = 5; // GMRES(Jacobi) iterations per pre/post smooth
    int cycles = 1;       // W-cycles per inner solve
};

/// Pooled geometric-mean contraction: exp(mean of log(after/before)).
struct RateAccumulator {
    double log_sum = 0.0;
    long count = 0;
    std::vector<double>* ratios = nullptr; // optional per-event log

    void add(double after, double before)
    {
        if (after > 0.0 && before > 0.0) {
            log_sum += std::log(after / before);
            ++count;
            if (ratios) ratios->push_back(after / before);
        }
    }
    double rate() const { return count > 0 ? std::exp(log_sum / count) : 0.0; }
};

/// CG1 nodal interpolation from a coarse mesh onto its uniform
/// refinement: coincident vertices copy, edge-midpoint vertices average
/// the two endpoints. Entries are real.
ComplexSparseMatrix build_prolongation(const Mesh& coarse, const Mesh& fine);

struct MgLevel {
    Mesh mesh;
    AssembledForms forms;
    ComplexSparseMatrix op;       // rediscretized level operator
    ComplexSparseMatrix prolong;  // from the next-coarser level (empty on level 0)
    std::vector<Complex> inv_diag;
};

/// Geometric hierarchy for one O(k)-shifted CG1 operator; levels are
/// ordered coarsest (0) to finest. Every level operator is a fresh
/// discretization on that level's mesh, not a Galerkin product.
struct MgHierarchy {
    std::vector<MgLevel> levels;
    int smooth_steps = 5;

    int finest() const { return static_cast<int>(levels.size()) - 1; }
};

using LevelOperatorBuilder = std::function<ComplexSparseMatrix(const AssembledForms&)>;

MgHierarchy build_mg_hierarchy(const MeshHierarchy& meshes, int smooth_steps,
                               const LevelOperatorBuilder& build_op);

/// One W-cycle at `level`: smooth_steps GMRES(Jacobi) pre-smoothing from
/// the incoming x, restrict the residual, two recursive coarse visits on
/// the error equation (the first from zero), prolongate-correct, then
/// smooth_steps post-smoothing. The coarsest level runs 2*smooth_steps
/// smoother iterations instead of recursing.
void w_cycle(const MgHierarchy& hier, int level, std::span<const Complex> b,
             std::span<Complex> x);

/// `cycles` W-cycles on the finest level from a zero initial guess;
/// records the per-cycle residual contraction when a rate accumulator is
/// given.
CVector mg_solve_hss(const MgHierarchy& hier, const CVector& b, int cycles,
                     RateAccumulator* contraction = nullptr);

} // namespace helmhss

#endif
