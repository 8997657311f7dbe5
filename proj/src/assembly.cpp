#include "helmhss/assembly.hpp"

#include <cmath>
#include <stdexcept>

namespace helmhss {

ElementMatrices element_matrices(const Mesh& mesh, int cell)
{
    const auto& t = mesh.cells[cell];
    const auto& p0 = mesh.vertices[t[0]];
    const auto& p1 = mesh.vertices[t[1]];
    const auto& p2 = mesh.vertices[t[2]];

    const double area = mesh.cell_area(cell);
    if (area <= 0.0) throw std::runtime_error("element_matrices: non-ccw cell");

    // grad(lambda_i) = (b_i, c_i) / (2A) with (i,j,k) cyclic
    const double b[3] = {p1[1] - p2[1], p2[1] - p0[1], p0[1] - p1[1]};
    const double c[3] = {p2[0] - p1[0], p0[0] - p2[0], p1[0] - p0[0]};

    ElementMatrices em;
    em.area = area;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            em.mass[i][j] = (area / 12.0) * (i == j ? 2.0 : 1.0);
            em.stiffness[i][j] = (b[i] * b[j] + c[i] * c[j]) / (4.0 * area);
        }
    for (int j = 0; j < 3; ++j) {
        em.grad[0][j] = 0.5 * b[j]; // = area * (grad lambda_j)_x
        em.grad[1][j] = 0.5 * c[j];
    }
    return em;
}

std::array<std::array<double, 2>, 2> edge_mass_matrix(double length)
{
    return {{{length / 3.0, length / 6.0}, {length / 6.0, length / 3.0}}};
}

AssembledForms assemble_core(const Mesh& mesh, const DofMap& cg1, const DofMap& dg0)
{
    if (cg1.space != Space::CG1 || dg0.space != Space::DG0v2)
        throw std::invalid_argument("assemble_core: dofmap spaces mismatched");
    if (cg1.n_dofs != mesh.num_vertices() || dg0.n_dofs != 2 * mesh.num_cells())
        throw std::invalid_argument("assemble_core: dofmaps inconsistent with mesh");

    using Trip = std::pair<std::pair<int, int>, Complex>;
    std::vector<Trip> tm, tk, tg;
    tm.reserve(9 * mesh.num_cells());
    tk.reserve(9 * mesh.num_cells());
    tg.reserve(6 * mesh.num_cells());

    AssembledForms forms;
    forms.Msigma.assign(dg0.n_dofs, 0.0);
    forms.cell_area.assign(mesh.num_cells(), 0.0);

    for (int cell = 0; cell < mesh.num_cells(); ++cell) {
        const auto em = element_matrices(mesh, cell);
        const auto& dofs = cg1.cell_cg1[cell];
        const auto& sdofs = dg0.cell_dg0[cell];
        forms.cell_area[cell] = em.area;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                tm.push_back({{dofs[i], dofs[j]}, em.mass[i][j]});
                tk.push_back({{dofs[i], dofs[j]}, em.stiffness[i][j]});
            }
        for (int c = 0; c < 2; ++c) {
            forms.Msigma[sdofs[c]] = em.area;
            for (int j = 0; j < 3; ++j)
                tg.push_back({{sdofs[c], dofs[j]}, em.grad[c][j]});
        }
    }

    std::vector<Trip> tb;
    tb.reserve(4 * mesh.boundary_edges.size());
    for (const auto& e : mesh.boundary_edges) {
        const auto bm = edge_mass_matrix(e.length);
        const int d[2] = {e.a, e.b};
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                tb.push_back({{d[i], d[j]}, bm[i][j]});
    }

    forms.M = csr_from_triplets(cg1.n_dofs, cg1.n_dofs, std::move(tm));
    forms.K = csr_from_triplets(cg1.n_dofs, cg1.n_dofs, std::move(tk));
    forms.MGamma = csr_from_triplets(cg1.n_dofs, cg1.n_dofs, std::move(tb));
    forms.G = csr_from_triplets(dg0.n_dofs, cg1.n_dofs, std::move(tg));
    return forms;
}

ComplexSparseMatrix assemble_primal_operator(const AssembledForms& forms, double k, double delta)
{
    const Complex s = Complex(-delta, k); // -delta + ik
    return csr_linear_combination(
        {{s * s, &forms.M}, {Complex(1.0), &forms.K}, {-s, &forms.MGamma}});
}

HssPrimalPair assemble_hss_primal(const AssembledForms& forms, double k, double delta)
{
    const double k2 = k * k;
    const Complex lhs_m(delta * delta - k2, -2.0 * delta * k2);
    const Complex lhs_g(delta, -k2);
    const Complex rhs_m(-delta * delta + k2, -2.0 * delta * k2);
    const Complex rhs_g(-delta, -k2);
    const double pre = (k - 1.0) / (k + 1.0);

    HssPrimalPair out;
    out.lhs = csr_linear_combination(
        {{lhs_m, &forms.M}, {lhs_g, &forms.MGamma}, {Complex(1.0), &forms.K}});
    out.rhs_op = csr_linear_combination(
        {{pre * rhs_m, &forms.M}, {pre * rhs_g, &forms.MGamma}, {Complex(-pre), &forms.K}});
    return out;
}

ComplexSparseMatrix assemble_mixed_eliminated_lhs(const AssembledForms& forms, double k,
                                                  double delta)
{
    const Complex d(delta, -1.0); // delta - i
    const Complex k2 = k * k;
    return csr_linear_combination(
        {{k2 * d * d, &forms.M}, {Complex(1.0), &forms.K}, {k2 * d, &forms.MGamma}});
}

MixedOperator::MixedOperator(const AssembledForms& f, double k_, double delta_)
    : forms(&f), k(k_), delta(delta_), n_sigma(static_cast<int>(f.Msigma.size())),
      n_u(f.M.rows)
{
}

void MixedOperator::apply(std::span<const Complex> x, std::span<Complex> y) const
{
    if (x.size() != static_cast<std::size_t>(size()) || y.size() != x.size())
        throw std::invalid_argument("MixedOperator::apply: dimension mismatch");

    const Complex s(delta, -k); // delta - ik
    const auto sigma = x.first(n_sigma);
    const auto u = x.subspan(n_sigma);
    auto y_sigma = y.first(n_sigma);
    auto y_u = y.subspan(n_sigma);

    // row V: (delta-ik) Msigma sigma - G u
    spmv(forms->G, u, y_sigma);
    for (int i = 0; i < n_sigma; ++i) y_sigma[i] = s * forms->Msigma[i] * sigma[i] - y_sigma[i];

    // row Q: G^T sigma + (delta-ik) M u + MGamma u
    spmv_transpose(forms->G, sigma, y_u);
    spmv_add(forms->M, s, u, y_u);
    spmv_add(forms->MGamma, Complex(1.0), u, y_u);
}

namespace {

bool in_box(double x, double y)
{
    return x >= 0.4 && x <= 0.6 && y >= 0.4 && y <= 0.6;
}

} // namespace

CVector assemble_load(const Mesh& mesh, const DofMap& cg1, SourceType source)
{
    CVector b(cg1.n_dofs, Complex(0.0));
    if (source == SourceType::zero) return b;

    for (int cell = 0; cell < mesh.num_cells(); ++cell) {
        const double area = mesh.cell_area(cell);
        const auto& dofs = cg1.cell_cg1[cell];
        if (source == SourceType::uniform) {
            for (int i = 0; i < 3; ++i) b[dofs[i]] += area / 3.0;
        } else {
            // edge-midpoint rule; phi_i is 1/2 on the two adjacent midpoints
            const auto& t = mesh.cells[cell];
            double chi[3]; // chi[q] at the midpoint opposite vertex q
            for (int q = 0; q < 3; ++q) {
                const auto& pa = mesh.vertices[t[(q + 1) % 3]];
                const auto& pb = mesh.vertices[t[(q + 2) % 3]];
                chi[q] = in_box(0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1])) ? 1.0 : 0.0;
            }
            for (int i = 0; i < 3; ++i) {
                const double w = 0.5 * (chi[(i + 1) % 3] + chi[(i + 2) % 3]);
                b[dofs[i]] += (area / 3.0) * w;
            }
        }
    }
    return b;
}

void cellwise_gradient(const AssembledForms& forms, std::span<const Complex> u,
                       std::span<Complex> grad)
{
    spmv(forms.G, u, grad);
    const int n_cells = static_cast<int>(forms.cell_area.size());
    for (int c = 0; c < n_cells; ++c) {
        grad[2 * c] /= forms.cell_area[c];
        grad[2 * c + 1] /= forms.cell_area[c];
    }
}

} // namespace helmhss
