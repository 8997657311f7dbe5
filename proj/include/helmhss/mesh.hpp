#ifndef HELMHSS_MESH_HPP
#define HELMHSS_MESH_HPP

#include <array>
#include <vector>

namespace helmhss {

/// Uniform right-triangulated mesh of the unit square with n cells per
/// direction. Every lattice square is split along its lower-left to
/// upper-right diagonal; cell vertex triples are counter-clockwise.
/// Vertices are ordered lexicographically by (iy, ix), so vertex (ix, iy)
/// has index iy*(n+1)+ix and coordinates (ix/n, iy/n) computed by exact
/// division (keeps coarse/fine vertex coordinates bitwise identical).
struct Mesh {
    struct BoundaryEdge {
        int a, b;
        double length;
    };

    int n = 0;
    std::vector<std::array<double, 2>> vertices; // (n+1)^2
    std::vector<std::array<int, 3>> cells;       // 2n^2, ccw
    std::vector<BoundaryEdge> boundary_edges;    // 4n

    int vertex_index(int ix, int iy) const { return iy * (n + 1) + ix; }
    int num_vertices() const { return static_cast<int>(vertices.size()); }
    int num_cells() const { return static_cast<int>(cells.size()); }

    double cell_area(int c) const;
};

/// Nested meshes ordered coarsest to finest; each level doubles the cell
/// count per direction.
struct MeshHierarchy {
    std::vector<Mesh> levels;
};

enum class Space { CG1, DG0v2 };

/// Degree-of-freedom map for CG1 (scalar, vertex dofs) or (DG0)^2
/// (two constants per cell).
struct DofMap {
    Space space;
    int n_dofs = 0;
    std::vector<std::array<int, 3>> cell_cg1; // per cell: the 3 vertex dofs
    std::vector<std::array<int, 2>> cell_dg0; // per cell: the 2 component dofs
};

Mesh build_mesh(int n);
MeshHierarchy build_hierarchy(int n_fine, int levels);

/// Cells per direction needed to resolve wavenumber k with c0*k^(3/2)
/// cells, rounded up to a multiple of 2^(levels-1) so the mesh coarsens
/// cleanly. levels=1 gives the plain ceiling.
int resolution_for(double k, double c0, int levels);

DofMap make_cg1_dofmap(const Mesh& mesh);
DofMap make_dg0v2_dofmap(const Mesh& mesh);

} // namespace helmhss

#endif
