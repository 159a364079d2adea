#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "banded.hpp"
#include "material.hpp"

namespace viscowave::fem {

/// Gauss-Legendre rule mapped to [0, 1].
struct QuadratureRule {
    std::vector<double> points;
    std::vector<double> weights;
};

QuadratureRule gauss_legendre(int npoints);

/// Lagrange basis of degree p on equispaced reference nodes i/p, i = 0..p.
class LagrangeBasis {
public:
    explicit LagrangeBasis(int degree);

    int degree() const { return p_; }
    double node(int i) const { return static_cast<double>(i) / p_; }
    double value(int i, double xi) const;
    double derivative(int i, double xi) const;

private:
    int p_;
};

/// Basis values and reference derivatives tabulated at quadrature points.
struct ReferenceTable {
    QuadratureRule rule;
    std::vector<double> values;  // [q * (p+1) + i]
    std::vector<double> derivs;  // d/dxi, same layout
    int nloc = 0;

    ReferenceTable(const LagrangeBasis& basis, int npoints);
};

struct Mesh1D {
    std::vector<double> vertices;
    int degree = 1;
    std::vector<std::size_t> region_of_element;

    std::size_t num_elements() const { return vertices.size() - 1; }
    std::size_t num_dofs() const { return num_elements() * degree + 1; }
    std::size_t dof(std::size_t element, int local) const { return element * degree + local; }
    double element_length(std::size_t e) const { return vertices[e + 1] - vertices[e]; }
    double length() const { return vertices.back() - vertices.front(); }
    double dof_position(std::size_t dof) const;

    /// Element containing x and the local coordinate in [0, 1]. Throws
    /// ValidationError outside the mesh.
    std::pair<std::size_t, double> locate(double x) const;
};

/// Uniform elements in each region, count max(1, round(epu * length)).
Mesh1D build_mesh(const material::CoupledModel& model, int elements_per_unit, int degree);

struct AssembledOperators {
    SymBandMatrix<double> mass;                    // rho-weighted
    std::vector<SymBandMatrix<double>> stiffness;  // one per region, unit coefficient
    std::vector<double> neumann_load;              // test functions at x = L
    /// Closed dof range [first, last] touched by each region.
    std::vector<std::pair<std::size_t, std::size_t>> region_dofs;

    std::size_t num_dofs() const { return mass.size(); }
};

AssembledOperators assemble(const Mesh1D& mesh, const material::CoupledModel& model);

/// Vector value * (test functions at x = L).
std::vector<double> neumann_term(const AssembledOperators& ops, double value);

/// Load vector (f, phi_i) by Gauss-Legendre with p + 3 points per element.
std::vector<double> assemble_load(const Mesh1D& mesh, const std::function<double(double)>& f);

/// Strong Dirichlet elimination at dof 0. Given the full matrix A and full
/// load F, returns the interior matrix A[1:,1:] and corrects F[1:] by
/// -A[1:,0] * value.
template <class T>
struct DirichletSystem {
    SymBandMatrix<T> matrix;
    std::vector<T> coupling;  // A(i, 0), i = 1..b
};

template <class T>
DirichletSystem<T> apply_dirichlet(const SymBandMatrix<T>& a) {
    DirichletSystem<T> out{a.tail(1), {}};
    const std::size_t b = std::min(a.half_bandwidth(), a.size() - 1);
    out.coupling.resize(b);
    for (std::size_t i = 1; i <= b; ++i) out.coupling[i - 1] = a(i, 0);
    return out;
}

/// Interior right-hand side from the full load and the Dirichlet value.
template <class T>
std::vector<T> dirichlet_rhs(const DirichletSystem<T>& sys, std::span<const T> full_load, T value) {
    std::vector<T> rhs(full_load.begin() + 1, full_load.end());
    for (std::size_t i = 0; i < sys.coupling.size(); ++i) rhs[i] -= sys.coupling[i] * value;
    return rhs;
}

/// Static elastic solve: sum_r coef[r] K_r u = F + h e_L with u(0) = g.
std::vector<double> solve_static(const AssembledOperators& ops, std::span<const double> coefficients,
                                 double dirichlet, double neumann, std::span<const double> load = {});

/// FE interpolation of a nodal vector at x.
double interpolate(const Mesh1D& mesh, std::span<const double> u, double x);
std::complex<double> interpolate(const Mesh1D& mesh, std::span<const std::complex<double>> u, double x);
/// Spatial derivative u_x at x (one-sided inside the located element).
double interpolate_derivative(const Mesh1D& mesh, std::span<const double> u, double x);

/// Discrete L2 norm of (u_h - u_exact) using p + 3 Gauss points per element.
double l2_error(const Mesh1D& mesh, std::span<const double> u, const std::function<double(double)>& exact);

}  // namespace viscowave::fem
