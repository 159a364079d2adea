#include "timestepper_cq.hpp"

#include <cmath>
#include <string>

#include "errors.hpp"

namespace viscowave {

std::vector<double> probe(const Trajectory& traj, double x) {
    const auto [e, xi] = traj.mesh.locate(x);
    const fem::LagrangeBasis basis(traj.mesh.degree);
    std::vector<double> phi(traj.mesh.degree + 1);
    for (int i = 0; i <= traj.mesh.degree; ++i) phi[i] = basis.value(i, xi);
    std::vector<double> out(traj.u.size());
    for (std::size_t n = 0; n < traj.u.size(); ++n) {
        const auto un = traj.u[n];
        double v = 0.0;
        for (int i = 0; i <= traj.mesh.degree; ++i) v += phi[i] * un[traj.mesh.dof(e, i)];
        out[n] = v;
    }
    return out;
}

std::vector<double> discrete_energy(const Trajectory& traj, const material::CoupledModel& model) {
    const auto ops = fem::assemble(traj.mesh, model);
    const std::size_t nd = ops.num_dofs();
    fem::SymBandMatrix<double> k(nd, ops.mass.half_bandwidth());
    for (std::size_t r = 0; r < model.regions.size(); ++r) k.axpy(model.regions[r].c0, ops.stiffness[r]);
    std::vector<double> v(nd, 0.0), mv(nd), ku(nd), energy(traj.u.size(), 0.0);
    for (std::size_t n = 1; n < traj.u.size(); ++n) {
        const auto un = traj.u[n], um = traj.u[n - 1];
        for (std::size_t i = 0; i < nd; ++i) v[i] = 2.0 / traj.k * (un[i] - um[i]) - v[i];
        ops.mass.multiply<double, double>(v, mv);
        k.multiply<double, double>(un, ku);
        double e = 0.0;
        for (std::size_t i = 0; i < nd; ++i) e += 0.5 * (v[i] * mv[i] + un[i] * ku[i]);
        energy[n] = e;
    }
    return energy;
}

namespace timestepper_cq {

namespace {

bool constant_law(const material::MaterialRegion& r) {
    return r.kind == material::ModelKind::Elastic || r.diffusive() == 0.0;
}

}  // namespace

cq::Symbol stiffness_symbol(const material::MaterialRegion& region) {
    return [region](cq::Complex s) { return material::eval_transfer_unchecked(region, s) / s; };
}

RegionWeights region_weights(const material::MaterialRegion& reg, const cq::CQScheme& scheme) {
    const double k = scheme.k();
    RegionWeights rw;
    if (constant_law(reg)) {
        rw.implicit = reg.c0 * k / 2.0;
        rw.running = reg.c0;
    } else if (reg.kind == material::ModelKind::Voigt) {
        rw.implicit = reg.c0 * k / 2.0 + reg.c1;
        rw.running = reg.c0;
    } else if (!material::is_fractional(reg.kind)) {
        rw.running = reg.c0;
        rw.relax = reg.diffusive();
        rw.relax_beta = 2.0 * reg.a / k;
        rw.implicit = reg.c0 * k / 2.0 + rw.relax / (1.0 + rw.relax_beta);
    } else {
        rw.lagged = cq::weights(stiffness_symbol(reg), scheme);
        rw.implicit = rw.lagged[0];
    }
    return rw;
}

DiscreteSystem build(const material::CoupledModel& model, const fem::Mesh1D& mesh, const cq::CQScheme& scheme) {
    material::validate(model);
    DiscreteSystem sys;
    sys.model = model;
    sys.mesh = mesh;
    sys.ops = fem::assemble(mesh, model);
    sys.k = scheme.k();
    sys.steps = scheme.steps();
    const double k = sys.k;
    for (const auto& reg : model.regions) sys.region_weights.push_back(region_weights(reg, scheme));

    sys.implicit_full = sys.ops.mass.cast_scaled<double>(2.0 / k);
    for (std::size_t r = 0; r < model.regions.size(); ++r)
        sys.implicit_full.axpy(sys.region_weights[r].implicit, sys.ops.stiffness[r]);
    sys.implicit = fem::apply_dirichlet(sys.implicit_full);
    try {
        sys.factor = fem::BandLDLT<double>(sys.implicit.matrix, true);
    } catch (const NumericalError& e) {
        throw NumericalError(std::string("implicit CQ matrix is not positive definite: ") + e.what());
    }
    return sys;
}

Trajectory run(const DiscreteSystem& sys, const BoundarySignals& bc, const VolumeForce& f) {
    signals::validate(bc.dirichlet, "signals.dirichlet");
    signals::validate(bc.neumann, "signals.neumann");
    const std::size_t nd = sys.ops.num_dofs();
    const std::size_t nsteps = sys.steps;
    const double k = sys.k;
    Trajectory traj;
    traj.mesh = sys.mesh;
    traj.k = k;
    traj.u = cq::History(nd);
    traj.u.reserve(nsteps + 1);
    std::vector<double> un(nd, 0.0);
    traj.u.append(un);

    // Loads enter through the weights of 1/s: L^n = (k/2) b^n + k sum_{m<n} b^m.
    std::vector<double> load_sum(nd, 0.0), b(nd, 0.0);
    auto fill_load = [&](double t) {
        if (f) {
            b = fem::assemble_load(sys.mesh, [&](double x) { return f(x, t); });
        } else {
            std::fill(b.begin(), b.end(), 0.0);
        }
        b.back() += bc.neumann.value(t);
    };
    fill_load(0.0);
    for (std::size_t i = 0; i < nd; ++i) load_sum[i] += b[i];

    std::vector<double> alt(nd, 0.0), run_sum(nd, 0.0), rhs(nd), tmp(nd), w(nd), kw(nd);
    // y of the recursive relaxation term, per region (only its dof range is used).
    std::vector<std::vector<double>> relax_state(sys.region_weights.size());
    for (std::size_t r = 0; r < relax_state.size(); ++r)
        if (sys.region_weights[r].relax != 0.0) relax_state[r].assign(nd, 0.0);
    for (std::size_t n = 1; n <= nsteps; ++n) {
        const double t = static_cast<double>(n) * k;
        const auto prev = traj.u[n - 1];
        for (std::size_t i = 0; i < nd; ++i) {
            alt[i] = -prev[i] - alt[i];
            run_sum[i] += prev[i];
        }
        fill_load(t);
        for (std::size_t i = 0; i < nd; ++i) rhs[i] = k * load_sum[i] + 0.5 * k * b[i];
        for (std::size_t i = 0; i < nd; ++i) load_sum[i] += b[i];

        // Weights of s are (2/k, -4/k, 4/k, ...): the lag sum is an alternating recurrence.
        for (std::size_t i = 0; i < nd; ++i) tmp[i] = 4.0 / k * alt[i];
        sys.ops.mass.multiply<double, double>(tmp, kw);
        for (std::size_t i = 0; i < nd; ++i) rhs[i] -= kw[i];

        for (std::size_t r = 0; r < sys.region_weights.size(); ++r) {
            const auto& rw = sys.region_weights[r];
            const auto [first, last] = sys.ops.region_dofs[r];
            std::fill(w.begin(), w.end(), 0.0);
            if (rw.running != 0.0)
                for (std::size_t i = first; i <= last; ++i) w[i] = rw.running * k * run_sum[i];
            if (rw.relax != 0.0) {
                const auto& y = relax_state[r];
                const double b = rw.relax_beta;
                for (std::size_t i = first; i <= last; ++i)
                    w[i] += rw.relax * (prev[i] - (1.0 - b) * y[i]) / (1.0 + b);
            }
            if (!rw.lagged.empty())
                cq::convolve_step_into(rw.lagged, traj.u, n, first, last,
                                       std::span<double>(w).subspan(first, last - first + 1));
            sys.ops.stiffness[r].multiply<double, double>(w, kw);
            for (std::size_t i = 0; i < nd; ++i) rhs[i] -= kw[i];
        }

        const double g = bc.dirichlet.value(t);
        auto interior = fem::dirichlet_rhs<double>(sys.implicit, rhs, g);
        sys.factor.solve(interior);
        un[0] = g;
        for (std::size_t i = 0; i + 1 < nd; ++i) {
            if (!std::isfinite(interior[i]))
                throw NumericalError("CQ marching produced a non-finite value at step " + std::to_string(n));
            un[i + 1] = interior[i];
        }
        for (std::size_t r = 0; r < relax_state.size(); ++r) {
            if (relax_state[r].empty()) continue;
            const auto [first, last] = sys.ops.region_dofs[r];
            const double b = sys.region_weights[r].relax_beta;
            auto& y = relax_state[r];
            for (std::size_t i = first; i <= last; ++i) y[i] = (un[i] + prev[i] - (1.0 - b) * y[i]) / (1.0 + b);
        }
        traj.u.append(un);
    }
    return traj;
}

Trajectory run(const material::CoupledModel& model, const fem::Mesh1D& mesh, const cq::CQScheme& scheme,
               const BoundarySignals& bc, const VolumeForce& f) {
    return run(build(model, mesh, scheme), bc, f);
}

std::vector<double> stress_trace(const Trajectory& traj, const material::CoupledModel& model, std::size_t region,
                                 double x) {
    if (region >= model.regions.size()) throw ValidationError("stress_trace: region index out of range");
    const auto& reg = model.regions[region];
    const double tol = 1e-12 * std::max(1.0, model.length());
    if (x < reg.x_lo - tol || x > reg.x_hi + tol)
        throw ValidationError("stress_trace: point outside region '" + reg.name + "'");
    // At an interface the strain is one-sided; pick the element inside the region.
    const double xe = std::clamp(x, reg.x_lo + 1e-14, reg.x_hi - 1e-14);
    const std::size_t nt = traj.u.size();
    std::vector<double> strain(nt), sigma(nt, 0.0);
    for (std::size_t n = 0; n < nt; ++n) strain[n] = fem::interpolate_derivative(traj.mesh, traj.u[n], xe);
    if (nt < 2 || constant_law(reg)) {
        for (std::size_t n = 0; n < nt; ++n) sigma[n] = reg.c0 * strain[n];
        return sigma;
    }
    const cq::CQScheme scheme(traj.k, nt - 1);
    const auto w = cq::weights([&reg](cq::Complex s) { return material::eval_transfer_unchecked(reg, s); }, scheme);
    for (std::size_t n = 0; n < nt; ++n) {
        double acc = 0.0;
        for (std::size_t j = 0; j <= n; ++j) acc += w[j] * strain[n - j];
        sigma[n] = acc;
    }
    return sigma;
}

}  // namespace timestepper_cq
}  // namespace viscowave
