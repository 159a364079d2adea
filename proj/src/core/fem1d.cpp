#include "fem1d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "errors.hpp"

namespace viscowave::fem {

QuadratureRule gauss_legendre(int n) {
    if (n < 1) throw ValidationError("gauss_legendre: need at least one point");
    QuadratureRule rule;
    rule.points.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // Chebyshev-like initial guess, then Newton on P_n.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = pk;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        // map [-1, 1] -> [0, 1], ascending order
        rule.points[n - 1 - i] = 0.5 * (x + 1.0);
        rule.weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

LagrangeBasis::LagrangeBasis(int degree) : p_(degree) {
    if (degree < 1 || degree > 4) throw ValidationError("degree must be in 1..4, got " + std::to_string(degree));
}

double LagrangeBasis::value(int i, double xi) const {
    double v = 1.0;
    const double xi_i = node(i);
    for (int m = 0; m <= p_; ++m)
        if (m != i) v *= (xi - node(m)) / (xi_i - node(m));
    return v;
}

double LagrangeBasis::derivative(int i, double xi) const {
    const double xi_i = node(i);
    double sum = 0.0;
    for (int l = 0; l <= p_; ++l) {
        if (l == i) continue;
        double prod = 1.0 / (xi_i - node(l));
        for (int m = 0; m <= p_; ++m)
            if (m != i && m != l) prod *= (xi - node(m)) / (xi_i - node(m));
        sum += prod;
    }
    return sum;
}

ReferenceTable::ReferenceTable(const LagrangeBasis& basis, int npoints)
    : rule(gauss_legendre(npoints)), nloc(basis.degree() + 1) {
    values.resize(static_cast<std::size_t>(npoints) * nloc);
    derivs.resize(values.size());
    for (int q = 0; q < npoints; ++q)
        for (int i = 0; i < nloc; ++i) {
            values[q * nloc + i] = basis.value(i, rule.points[q]);
            derivs[q * nloc + i] = basis.derivative(i, rule.points[q]);
        }
}

double Mesh1D::dof_position(std::size_t d) const {
    const std::size_t e = std::min(d / degree, num_elements() - 1);
    const int local = static_cast<int>(d - e * degree);
    return vertices[e] + element_length(e) * local / degree;
}

std::pair<std::size_t, double> Mesh1D::locate(double x) const {
    const double lo = vertices.front(), hi = vertices.back();
    const double tol = 1e-12 * std::max(1.0, hi - lo);
    if (!(x >= lo - tol && x <= hi + tol))
        throw ValidationError("position " + std::to_string(x) + " outside the mesh");
    auto it = std::upper_bound(vertices.begin(), vertices.end(), x);
    std::size_t e = it == vertices.begin() ? 0 : static_cast<std::size_t>(it - vertices.begin()) - 1;
    e = std::min(e, num_elements() - 1);
    const double xi = std::clamp((x - vertices[e]) / element_length(e), 0.0, 1.0);
    return {e, xi};
}

Mesh1D build_mesh(const material::CoupledModel& model, int elements_per_unit, int degree) {
    material::validate(model);
    LagrangeBasis check(degree);
    if (elements_per_unit < 1) throw ValidationError("mesh.elements_per_unit must be >= 1");
    Mesh1D mesh;
    mesh.degree = degree;
    mesh.vertices.push_back(model.regions.front().x_lo);
    for (std::size_t r = 0; r < model.regions.size(); ++r) {
        const auto& reg = model.regions[r];
        const long n = std::max(1L, std::lround(elements_per_unit * reg.length()));
        for (long i = 1; i <= n; ++i) {
            mesh.vertices.push_back(i == n ? reg.x_hi : reg.x_lo + reg.length() * i / n);
            mesh.region_of_element.push_back(r);
        }
    }
    return mesh;
}

AssembledOperators assemble(const Mesh1D& mesh, const material::CoupledModel& model) {
    const std::size_t ne = mesh.num_elements();
    if (mesh.region_of_element.size() != ne) throw ValidationError("mesh: region map size mismatch");
    for (std::size_t e = 0; e < ne; ++e) {
        const std::size_t r = mesh.region_of_element[e];
        if (r >= model.regions.size()) throw ValidationError("mesh: element mapped to unknown region");
        const auto& reg = model.regions[r];
        const double tol = 1e-12 * std::max(1.0, model.length());
        if (mesh.vertices[e] < reg.x_lo - tol || mesh.vertices[e + 1] > reg.x_hi + tol)
            throw ValidationError("mesh is not conforming to region '" + reg.name + "'");
    }

    const int p = mesh.degree;
    const LagrangeBasis basis(p);
    const ReferenceTable ref(basis, p + 1);
    const std::size_t n = mesh.num_dofs();

    AssembledOperators ops;
    ops.mass = SymBandMatrix<double>(n, p);
    ops.stiffness.assign(model.regions.size(), SymBandMatrix<double>(n, p));
    ops.region_dofs.assign(model.regions.size(), {n, 0});
    for (std::size_t e = 0; e < ne; ++e) {
        const std::size_t r = mesh.region_of_element[e];
        const double h = mesh.element_length(e);
        const double rho = model.regions[r].rho;
        auto& kr = ops.stiffness[r];
        for (std::size_t q = 0; q < ref.rule.points.size(); ++q) {
            const double w = ref.rule.weights[q];
            for (int i = 0; i < ref.nloc; ++i)
                for (int j = 0; j <= i; ++j) {
                    const double mij = rho * w * h * ref.values[q * ref.nloc + i] * ref.values[q * ref.nloc + j];
                    const double kij = w / h * ref.derivs[q * ref.nloc + i] * ref.derivs[q * ref.nloc + j];
                    ops.mass.add(mesh.dof(e, i), mesh.dof(e, j), mij);
                    kr.add(mesh.dof(e, i), mesh.dof(e, j), kij);
                }
        }
        auto& range = ops.region_dofs[r];
        range.first = std::min(range.first, mesh.dof(e, 0));
        range.second = std::max(range.second, mesh.dof(e, p));
    }
    ops.neumann_load.assign(n, 0.0);
    ops.neumann_load.back() = 1.0;
    return ops;
}

std::vector<double> neumann_term(const AssembledOperators& ops, double value) {
    std::vector<double> out(ops.neumann_load);
    for (double& v : out) v *= value;
    return out;
}

std::vector<double> assemble_load(const Mesh1D& mesh, const std::function<double(double)>& f) {
    const LagrangeBasis basis(mesh.degree);
    const ReferenceTable ref(basis, mesh.degree + 3);
    std::vector<double> load(mesh.num_dofs(), 0.0);
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
        const double h = mesh.element_length(e);
        for (std::size_t q = 0; q < ref.rule.points.size(); ++q) {
            const double fx = f(mesh.vertices[e] + h * ref.rule.points[q]) * ref.rule.weights[q] * h;
            for (int i = 0; i < ref.nloc; ++i) load[mesh.dof(e, i)] += fx * ref.values[q * ref.nloc + i];
        }
    }
    return load;
}

std::vector<double> solve_static(const AssembledOperators& ops, std::span<const double> coefficients,
                                 double dirichlet, double neumann, std::span<const double> load) {
    const std::size_t n = ops.num_dofs();
    if (coefficients.size() != ops.stiffness.size()) throw ValidationError("solve_static: one coefficient per region");
    SymBandMatrix<double> k(n, ops.mass.half_bandwidth());
    for (std::size_t r = 0; r < coefficients.size(); ++r) k.axpy(coefficients[r], ops.stiffness[r]);
    std::vector<double> f(n, 0.0);
    if (!load.empty()) {
        if (load.size() != n) throw ValidationError("solve_static: load size mismatch");
        std::copy(load.begin(), load.end(), f.begin());
    }
    f.back() += neumann;
    const auto sys = apply_dirichlet(k);
    auto rhs = dirichlet_rhs<double>(sys, f, dirichlet);
    BandLDLT<double>(sys.matrix).solve(rhs);
    std::vector<double> u(n);
    u[0] = dirichlet;
    std::copy(rhs.begin(), rhs.end(), u.begin() + 1);
    return u;
}

namespace {

template <class T>
T interpolate_impl(const Mesh1D& mesh, std::span<const T> u, double x) {
    if (u.size() != mesh.num_dofs()) throw ValidationError("interpolate: vector size mismatch");
    const auto [e, xi] = mesh.locate(x);
    const LagrangeBasis basis(mesh.degree);
    T v{};
    for (int i = 0; i <= mesh.degree; ++i) v += basis.value(i, xi) * u[mesh.dof(e, i)];
    return v;
}

}  // namespace

double interpolate(const Mesh1D& mesh, std::span<const double> u, double x) {
    return interpolate_impl(mesh, u, x);
}

std::complex<double> interpolate(const Mesh1D& mesh, std::span<const std::complex<double>> u, double x) {
    return interpolate_impl(mesh, u, x);
}

double interpolate_derivative(const Mesh1D& mesh, std::span<const double> u, double x) {
    if (u.size() != mesh.num_dofs()) throw ValidationError("interpolate_derivative: vector size mismatch");
    const auto [e, xi] = mesh.locate(x);
    const LagrangeBasis basis(mesh.degree);
    double v = 0.0;
    for (int i = 0; i <= mesh.degree; ++i) v += basis.derivative(i, xi) * u[mesh.dof(e, i)];
    return v / mesh.element_length(e);
}

double l2_error(const Mesh1D& mesh, std::span<const double> u, const std::function<double(double)>& exact) {
    const LagrangeBasis basis(mesh.degree);
    const ReferenceTable ref(basis, mesh.degree + 3);
    double sum = 0.0;
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
        const double h = mesh.element_length(e);
        for (std::size_t q = 0; q < ref.rule.points.size(); ++q) {
            double uh = 0.0;
            for (int i = 0; i < ref.nloc; ++i) uh += ref.values[q * ref.nloc + i] * u[mesh.dof(e, i)];
            const double d = uh - exact(mesh.vertices[e] + h * ref.rule.points[q]);
            sum += ref.rule.weights[q] * h * d * d;
        }
    }
    return std::sqrt(sum);
}

}  // namespace viscowave::fem
