#include "helmhss/mesh.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace helmhss {

double Mesh::cell_area(int c) const
{
    const auto& t = cells[c];
    const auto& p0 = vertices[t[0]];
    const auto& p1 = vertices[t[1]];
    const auto& p2 = vertices[t[2]];
    return 0.5 * ((p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]));
}

Mesh build_mesh(int n)
{
    if (n < 1) throw std::invalid_argument("build_mesh: n must be >= 1");

    Mesh mesh;
    mesh.n = n;
    mesh.vertices.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
    for (int iy = 0; iy <= n; ++iy)
        for (int ix = 0; ix <= n; ++ix)
            mesh.vertices.push_back({static_cast<double>(ix) / n, static_cast<double>(iy) / n});

    // Lower-left to upper-right diagonal in every lattice square; the
    // lower-right triangle is listed before the upper-left one.
    mesh.cells.reserve(static_cast<std::size_t>(2) * n * n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const int v00 = mesh.vertex_index(i, j);
            const int v10 = mesh.vertex_index(i + 1, j);
            const int v01 = mesh.vertex_index(i, j + 1);
            const int v11 = mesh.vertex_index(i + 1, j + 1);
            mesh.cells.push_back({v00, v10, v11});
            mesh.cells.push_back({v00, v11, v01});
        }
    }

    const double h = 1.0 / n;
    mesh.boundary_edges.reserve(static_cast<std::size_t>(4) * n);
    for (int i = 0; i < n; ++i)
        mesh.boundary_edges.push_back({mesh.vertex_index(i, 0), mesh.vertex_index(i + 1, 0), h});
    for (int j = 0; j < n; ++j)
        mesh.boundary_edges.push_back({mesh.vertex_index(n, j), mesh.vertex_index(n, j + 1), h});
    for (int i = 0; i < n; ++i)
        mesh.boundary_edges.push_back({mesh.vertex_index(i, n), mesh.vertex_index(i + 1, n), h});
    for (int j = 0; j < n; ++j)
        mesh.boundary_edges.push_back({mesh.vertex_index(0, j), mesh.vertex_index(0, j + 1), h});

    return mesh;
}

MeshHierarchy build_hierarchy(int n_fine, int levels)
{
    if (n_fine < 1) throw std::invalid_argument("build_hierarchy: n_fine must be >= 1");
    if (levels < 1) throw std::invalid_argument("build_hierarchy: levels must be >= 1");

    const int factor = 1 << (levels - 1);
    if (n_fine % factor != 0)
        throw std::invalid_argument("build_hierarchy: n_fine=" + std::to_string(n_fine) +
                                    " is not divisible by 2^(levels-1)=" + std::to_string(factor));

    MeshHierarchy hier;
    hier.levels.reserve(levels);
    for (int l = 0; l < levels; ++l)
        hier.levels.push_back(build_mesh(n_fine / (factor >> l)));
    return hier;
}

int resolution_for(double k, double c0, int levels)
{
    if (k < 1.0) throw std::invalid_argument("resolution_for: k must be >= 1");
    if (c0 <= 0.0) throw std::invalid_argument("resolution_for: c0 must be > 0");
    if (levels < 1) throw std::invalid_argument("resolution_for: levels must be >= 1");

    double target = c0 * std::pow(k, 1.5);
    // Guard against pow() landing a hair above an exact integer (e.g. 64^1.5).
    const double nearest = std::round(target);
    if (std::abs(target - nearest) < 1e-8 * std::max(1.0, nearest)) target = nearest;

    int n = static_cast<int>(std::ceil(target));
    const int factor = 1 << (levels - 1);
    n = ((n + factor - 1) / factor) * factor;
    return n;
}

DofMap make_cg1_dofmap(const Mesh& mesh)
{
    DofMap dm;
    dm.space = Space::CG1;
    dm.n_dofs = mesh.num_vertices();
    dm.cell_cg1.assign(mesh.cells.begin(), mesh.cells.end());
    return dm;
}

DofMap make_dg0v2_dofmap(const Mesh& mesh)
{
    DofMap dm;
    dm.space = Space::DG0v2;
    dm.n_dofs = 2 * mesh.num_cells();
    dm.cell_dg0.reserve(mesh.num_cells());
    for (int c = 0; c < mesh.num_cells(); ++c)
        dm.cell_dg0.push_back({2 * c, 2 * c + 1});
    return dm;
}

} // namespace helmhss
