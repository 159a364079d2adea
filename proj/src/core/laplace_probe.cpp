#include "laplace_probe.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "errors.hpp"
#include "timestepper_cq.hpp"

namespace viscowave::laplace {

namespace {

double relative_margin(double lhs, double rhs) {
    return (lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), std::numeric_limits<double>::min()});
}

std::vector<Complex> apply(const fem::SymBandMatrix<double>& a, const std::vector<Complex>& x) {
    std::vector<Complex> y(x.size());
    a.multiply<Complex, Complex>(x, y);
    return y;
}

Complex dot(const std::vector<Complex>& w, const std::vector<Complex>& y) {
    Complex acc = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * y[i];
    return acc;
}

/// b(u, w; s) = w^T (s^2 M + sum c_r K_r) u, bilinear.
Complex bilinear(const fem::AssembledOperators& ops, const std::vector<Complex>& coef, Complex s,
                 const std::vector<Complex>& u, const std::vector<Complex>& w) {
    Complex acc = s * s * dot(w, apply(ops.mass, u));
    for (std::size_t r = 0; r < coef.size(); ++r) acc += coef[r] * dot(w, apply(ops.stiffness[r], u));
    return acc;
}

std::vector<Complex> random_field(const fem::Mesh1D& mesh, std::mt19937_64& rng, bool smooth) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    const std::size_t n = mesh.num_dofs();
    std::vector<Complex> u(n);
    if (!smooth) {
        for (auto& v : u) v = {gauss(rng), gauss(rng)};
        return u;
    }
    // A few low Fourier modes plus a constant: fields whose mass and stiffness
    // parts are comparable, so both terms of the energy norm are exercised.
    std::array<Complex, 5> amp;
    for (auto& a : amp) a = {gauss(rng), gauss(rng)};
    const double len = mesh.length();
    for (std::size_t i = 0; i < n; ++i) {
        const double x = mesh.dof_position(i) / len;
        Complex v = amp[0];
        for (int m = 1; m < 5; ++m) v += amp[m] * std::sin(std::numbers::pi * (m - 0.5) * x);
        u[i] = v;
    }
    return u;
}

}  // namespace

fem::SymBandMatrix<Complex> frequency_matrix(const fem::AssembledOperators& ops,
                                             const material::CoupledModel& model, Complex s) {
    auto a = ops.mass.cast_scaled<Complex>(s * s);
    for (std::size_t r = 0; r < model.regions.size(); ++r)
        a.axpy(material::eval_transfer(model.regions[r], s), ops.stiffness[r].cast_scaled<Complex>(1.0));
    return a;
}

double energy_norm(const fem::AssembledOperators& ops, const std::vector<Complex>& u, double c) {
    const auto mu = apply(ops.mass, u);
    double mass = 0.0, stiff = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) mass += std::real(std::conj(u[i]) * mu[i]);
    for (const auto& k : ops.stiffness) {
        const auto ku = apply(k, u);
        for (std::size_t i = 0; i < u.size(); ++i) stiff += std::real(std::conj(u[i]) * ku[i]);
    }
    return std::sqrt(std::max(0.0, c * c * mass + stiff));
}

FrequencySolve solve_at(Complex s, const material::CoupledModel& model, const fem::Mesh1D& mesh,
                        const FrequencyData& data) {
    if (!(s.real() > 0.0)) throw ValidationError("solve_at: Re s must be positive");
    material::validate(model);
    const auto ops = fem::assemble(mesh, model);
    const std::size_t n = ops.num_dofs();
    const auto a = frequency_matrix(ops, model, s);

    std::vector<Complex> load(n, 0.0);
    if (data.volume) {
        const auto f = fem::assemble_load(mesh, data.volume);
        for (std::size_t i = 0; i < n; ++i) load[i] = f[i];
    }
    load.back() += data.beta;

    const auto sys = fem::apply_dirichlet(a);
    auto rhs = fem::dirichlet_rhs<Complex>(sys, load, data.alpha);
    const auto rhs0 = rhs;
    fem::BandLDLT<Complex>(sys.matrix, false).solve(rhs);

    FrequencySolve out;
    out.s = s;
    out.u.resize(n);
    out.u[0] = data.alpha;
    std::copy(rhs.begin(), rhs.end(), out.u.begin() + 1);
    for (const auto& v : out.u)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw NumericalError("frequency solve produced a non-finite value");

    std::vector<Complex> res(n - 1);
    sys.matrix.multiply<Complex, Complex>(rhs, res);
    double rmax = 0.0, bmax = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        rmax = std::max(rmax, std::abs(res[i] - rhs0[i]));
        bmax = std::max(bmax, std::abs(rhs0[i]));
    }
    out.residual_norm = bmax > 0.0 ? rmax / bmax : rmax;
    out.energy_norm = energy_norm(ops, out.u, std::abs(s));
    return out;
}

double coercivity_margin(const material::CoupledModel& model, const fem::AssembledOperators& ops, Complex s,
                         const std::vector<Complex>& u, const material::Certificate& cert) {
    std::vector<Complex> coef(model.regions.size());
    for (std::size_t r = 0; r < coef.size(); ++r) coef[r] = material::eval_transfer(model.regions[r], s);
    const double x = s.real();
    const double psi_star = std::min(x, cert.psi(x));
    const double nu = energy_norm(ops, u, std::abs(s));
    std::vector<Complex> su(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) su[i] = std::conj(s * u[i]);
    return relative_margin(bilinear(ops, coef, s, u, su).real(), psi_star * nu * nu);
}

CoercivityReport coercivity_check(const material::CoupledModel& model, const fem::Mesh1D& mesh,
                                  const CoercivityOptions& opt) {
    if (opt.trials < 1) throw ValidationError("coercivity_check: trials must be >= 1");
    material::validate(model);
    const auto ops = fem::assemble(mesh, model);
    const auto cert = opt.certificate ? *opt.certificate : material::combined_certificate(model);
    std::mt19937_64 rng(opt.seed);

    CoercivityReport rep;
    rep.trials = opt.trials;
    rep.worst_coercivity_margin = std::numeric_limits<double>::infinity();
    rep.worst_boundedness_margin = std::numeric_limits<double>::infinity();
    constexpr double slack = 1e-12;
    constexpr double eps = std::numeric_limits<double>::epsilon();
    std::vector<Complex> coef(model.regions.size());
    for (std::size_t t = 0; t < opt.trials; ++t) {
        const Complex s = opt.s ? *opt.s : material::sample_half_plane(rng);
        if (!(s.real() > 0.0)) throw ValidationError("coercivity_check: Re s must be positive");
        for (std::size_t r = 0; r < coef.size(); ++r) coef[r] = material::eval_transfer(model.regions[r], s);
        const bool smooth = (t % 2) == 1;
        const auto u = random_field(mesh, rng, smooth);
        const auto w = random_field(mesh, rng, !smooth);
        const double x = s.real();
        const double psi_star = opt.psi_star_scale * std::min(x, cert.psi(x));
        const double phi_star = std::max(std::pow(x, -cert.r), cert.phi(x));
        const double nu = energy_norm(ops, u, std::abs(s));
        const double nw = energy_norm(ops, w, std::abs(s));

        std::vector<Complex> su(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) su[i] = std::conj(s * u[i]);
        const double lhs_c = bilinear(ops, coef, s, u, su).real();
        const double rhs_c = psi_star * nu * nu;
        const double mc = relative_margin(lhs_c, rhs_c);
        rep.worst_coercivity_margin = std::min(rep.worst_coercivity_margin, mc);
        // Re(conj(s) s^2) cancels against |s|^2 Re s: rounding grows like |s| / Re s.
        if (mc < -(slack + 64.0 * eps * std::abs(s) / x)) rep.violations.push_back({s, "coercivity", lhs_c, rhs_c, t});

        const double lhs_b = std::abs(bilinear(ops, coef, s, u, w));
        const double rhs_b = std::pow(std::abs(s), cert.r) * phi_star * nu * nw;
        const double mb = relative_margin(rhs_b, lhs_b);
        rep.worst_boundedness_margin = std::min(rep.worst_boundedness_margin, mb);
        if (mb < -slack) rep.violations.push_back({s, "boundedness", lhs_b, rhs_b, t});
    }
    return rep;
}

NormEquivalenceReport norm_equivalence_check(const material::CoupledModel& model, const fem::Mesh1D& mesh,
                                             std::size_t trials, std::uint64_t seed) {
    material::validate(model);
    const auto ops = fem::assemble(mesh, model);
    std::mt19937_64 rng(seed);
    NormEquivalenceReport rep;
    rep.trials = trials;
    rep.worst_lower_margin = std::numeric_limits<double>::infinity();
    rep.worst_upper_margin = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < trials; ++t) {
        const Complex s = material::sample_half_plane(rng);
        const auto u = random_field(mesh, rng, t % 2 == 1);
        const double m = std::min(1.0, s.real());
        const double n1 = energy_norm(ops, u, 1.0);
        const double ns = energy_norm(ops, u, std::abs(s));
        const double lo = relative_margin(ns, m * n1);
        const double hi = relative_margin(std::abs(s) / m * n1, ns);
        rep.worst_lower_margin = std::min(rep.worst_lower_margin, lo);
        rep.worst_upper_margin = std::min(rep.worst_upper_margin, hi);
        if (lo < -1e-12 || hi < -1e-12) rep.passed = false;
    }
    return rep;
}

std::vector<ConsistencyRow> transfer_consistency(const material::CoupledModel& model, const fem::Mesh1D& mesh,
                                                 const cq::CQScheme& scheme, std::size_t count) {
    if (count < 1) throw ValidationError("transfer_consistency: need at least one contour node");
    material::validate(model);
    const auto ops = fem::assemble(mesh, model);
    const double k = scheme.k();

    // Generating function of each region's stiffness weights. Running-sum and
    // recursive forms are closed-form; fractional laws use the full contour
    // coefficients.
    struct RegionSeries {
        timestepper_cq::RegionWeights weights;
        std::vector<double> coefficients;
    };
    std::vector<RegionSeries> series;
    for (const auto& reg : model.regions) {
        RegionSeries rs{timestepper_cq::region_weights(reg, scheme), {}};
        if (!rs.weights.lagged.empty())
            rs.coefficients = cq::contour_coefficients(timestepper_cq::stiffness_symbol(reg), scheme);
        series.push_back(std::move(rs));
    }

    std::vector<ConsistencyRow> rows;
    const std::size_t l = scheme.contour_points();
    const std::size_t n = ops.num_dofs();
    const std::size_t b = ops.mass.half_bandwidth();
    for (std::size_t c = 0; c < count; ++c) {
        const std::size_t m = c * l / count;
        const Complex zeta = scheme.contour_node(m);
        const Complex s = scheme.symbol(zeta);
        const Complex gm = 2.0 / k * (1.0 - zeta) / (1.0 + zeta);
        std::vector<Complex> gr(model.regions.size()), cr(model.regions.size());
        for (std::size_t r = 0; r < model.regions.size(); ++r) {
            const auto& rs = series[r];
            const auto& w = rs.weights;
            if (!rs.coefficients.empty()) {
                gr[r] = cq::evaluate_series(rs.coefficients, zeta);
            } else {
                gr[r] = w.implicit + w.running * k * zeta / (1.0 - zeta);
                if (w.relax != 0.0) {
                    const double b = w.relax_beta;
                    gr[r] += w.relax * ((1.0 + zeta) / ((1.0 + b) + (1.0 - b) * zeta) - 1.0 / (1.0 + b));
                }
            }
            cr[r] = material::eval_transfer(model.regions[r], s);
        }
        double diff = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i >= b ? i - b : 0; j <= i; ++j) {
                Complex family = gm * ops.mass(i, j);
                Complex target = s * s * ops.mass(i, j);
                for (std::size_t r = 0; r < gr.size(); ++r) {
                    family += gr[r] * ops.stiffness[r](i, j);
                    target += cr[r] * ops.stiffness[r](i, j);
                }
                family *= s;
                diff = std::max(diff, std::abs(family - target));
                scale = std::max(scale, std::abs(target));
            }
        rows.push_back({m, zeta, s, scale > 0.0 ? diff / scale : diff});
    }
    return rows;
}

}  // namespace viscowave::laplace
