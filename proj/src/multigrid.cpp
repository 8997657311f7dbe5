#include "helmhss/multigrid.hpp"

#include <cmath>
#include <stdexcept>

#include "helmhss/krylov.hpp"

namespace helmhss {

ComplexSparseMatrix build_prolongation(const Mesh& coarse, const Mesh& fine)
{
    if (fine.n != 2 * coarse.n)
        throw std::invalid_argument("build_prolongation: meshes are not a nested pair");

    const int nf = fine.n;
    std::vector<std::pair<std::pair<int, int>, Complex>> trips;
    trips.reserve(static_cast<std::size_t>(2) * fine.num_vertices());

    for (int iy = 0; iy <= nf; ++iy) {
        for (int ix = 0; ix <= nf; ++ix) {
            const int row = fine.vertex_index(ix, iy);
            const bool ox = ix % 2, oy = iy % 2;
            const int cx = ix / 2, cy = iy / 2;
            if (!ox && !oy) {
                trips.push_back({{row, coarse.vertex_index(cx, cy)}, 1.0});
            } else if (ox && !oy) {
                trips.push_back({{row, coarse.vertex_index(cx, cy)}, 0.5});
                trips.push_back({{row, coarse.vertex_index(cx + 1, cy)}, 0.5});
            } else if (!ox && oy) {
                trips.push_back({{row, coarse.vertex_index(cx, cy)}, 0.5});
                trips.push_back({{row, coarse.vertex_index(cx, cy + 1)}, 0.5});
            } else {
                // midpoint of the coarse diagonal edge (lower-left split)
                trips.push_back({{row, coarse.vertex_index(cx, cy)}, 0.5});
                trips.push_back({{row, coarse.vertex_index(cx + 1, cy + 1)}, 0.5});
            }
        }
    }
    return csr_from_triplets(fine.num_vertices(), coarse.num_vertices(), std::move(trips));
}

MgHierarchy build_mg_hierarchy(const MeshHierarchy& meshes, int smooth_steps,
                               const LevelOperatorBuilder& build_op)
{
    if (meshes.levels.size() < 2)
        throw std::invalid_argument("build_mg_hierarchy: need at least 2 levels");
    if (smooth_steps < 1)
        throw std::invalid_argument("build_mg_hierarchy: smooth_steps must be >= 1");

    MgHierarchy hier;
    hier.smooth_steps = smooth_steps;
    hier.levels.resize(meshes.levels.size());
    for (std::size_t l = 0; l < meshes.levels.size(); ++l) {
        MgLevel& lev = hier.levels[l];
        lev.mesh = meshes.levels[l];
        const DofMap cg1 = make_cg1_dofmap(lev.mesh);
        const DofMap dg0 = make_dg0v2_dofmap(lev.mesh);
        lev.forms = assemble_core(lev.mesh, cg1, dg0);
        lev.op = build_op(lev.forms);
        lev.inv_diag = diagonal(lev.op);
        for (auto& d : lev.inv_diag) {
            if (d == Complex(0.0))
                throw std::runtime_error("build_mg_hierarchy: zero diagonal in level operator");
            d = 1.0 / d;
        }
        if (l > 0) lev.prolong = build_prolongation(meshes.levels[l - 1], lev.mesh);
    }
    return hier;
}

namespace {

void smooth(const MgLevel& lev, int steps, std::span<const Complex> b, std::span<Complex> x)
{
    const LinOp A = [&lev](std::span<const Complex> in, std::span<Complex> out) {
        spmv(lev.op, in, out);
    };
    const LinOp P = [&lev](std::span<const Complex> in, std::span<Complex> out) {
        for (std::size_t i = 0; i < in.size(); ++i) out[i] = lev.inv_diag[i] * in[i];
    };
    gmres_fixed(A, b, x, steps, P);
}

} // namespace

void w_cycle(const MgHierarchy& hier, int level, std::span<const Complex> b,
             std::span<Complex> x)
{
    const MgLevel& lev = hier.levels[level];
    if (b.size() != static_cast<std::size_t>(lev.op.rows) || x.size() != b.size())
        throw std::invalid_argument("w_cycle: dimension mismatch");

    if (level == 0) {
        smooth(lev, 2 * hier.smooth_steps, b, x);
        return;
    }

    smooth(lev, hier.smooth_steps, b, x);

    CVector r(b.size());
    spmv(lev.op, x, r);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];

    const int nc = hier.levels[level - 1].op.rows;
    CVector rc(nc), ec(nc, Complex(0.0));
    spmv_transpose(lev.prolong, r, rc);

    w_cycle(hier, level - 1, rc, ec);
    w_cycle(hier, level - 1, rc, ec);

    spmv_add(lev.prolong, Complex(1.0), ec, x);

    smooth(lev, hier.smooth_steps, b, x);
}

CVector mg_solve_hss(const MgHierarchy& hier, const CVector& b, int cycles,
                     RateAccumulator* contraction)
{
    if (cycles < 1) throw std::invalid_argument("mg_solve_hss: cycles must be >= 1");

    const int top = hier.finest();
    CVector x(b.size(), Complex(0.0));
    double r_before = norm2(b);
    CVector r(b.size());
    for (int c = 0; c < cycles; ++c) {
        w_cycle(hier, top, b, x);
        if (contraction) {
            spmv(hier.levels[top].op, x, r);
            for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
            const double r_after = norm2(r);
            contraction->add(r_after, r_before);
            r_before = r_after;
        }
    }
    return x;
}

} // namespace helmhss
