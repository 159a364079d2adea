#include "semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "cq.hpp"
#include "errors.hpp"

namespace viscowave::semigroup {

namespace {

constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

}  // namespace

System::System(const material::CoupledModel& model, const fem::Mesh1D& mesh)
    : model_(model), mesh_(mesh), ref_(fem::LagrangeBasis(mesh.degree), mesh.degree + 1) {
    material::validate(model_);
    for (const auto& reg : model_.regions)
        if (material::is_fractional(reg.kind))
            throw ValidationError("semigroup integrator needs integer-order laws; region '" + reg.name + "' is " +
                                  std::string(material::to_string(reg.kind)));
    ops_ = fem::assemble(mesh_, model_);
    nq_ = ref_.rule.points.size();

    const std::size_t ne = mesh_.num_elements();
    c0_.resize(ne);
    cd_.resize(ne);
    a_.resize(ne);
    cv_.resize(ne);
    e_off_.assign(ne, npos);
    s_off_.assign(ne, npos);
    std::vector<double> region_cv(model_.regions.size(), 0.0);
    for (std::size_t r = 0; r < model_.regions.size(); ++r) {
        const auto& reg = model_.regions[r];
        if (reg.a == 0.0) region_cv[r] = reg.c1;
    }
    for (std::size_t e = 0; e < ne; ++e) {
        const auto& reg = model_.regions[mesh_.region_of_element[e]];
        c0_[e] = reg.c0;
        a_[e] = reg.a;
        if (reg.a > 0.0) {
            cd_[e] = std::max(0.0, reg.c1 - reg.a * reg.c0);
        } else {
            cv_[e] = reg.c1;
        }
        if (c0_[e] > 0.0) {
            e_off_[e] = e_count_;
            e_count_ += nq_;
        }
        if (cd_[e] > 0.0) {
            s_off_[e] = s_count_;
            s_count_ += nq_;
        }
    }
    viscous_ = fem::SymBandMatrix<double>(ops_.num_dofs(), mesh_.degree);
    for (std::size_t r = 0; r < model_.regions.size(); ++r)
        if (region_cv[r] > 0.0) viscous_.axpy(region_cv[r], ops_.stiffness[r]);
    mass_interior_ = fem::BandLDLT<double>(ops_.mass.tail(1), true);
    mass_coupling_ = fem::apply_dirichlet(ops_.mass).coupling;
}

State System::zero_state() const {
    return {std::vector<double>(num_dofs(), 0.0), std::vector<double>(e_count_, 0.0),
            std::vector<double>(s_count_, 0.0)};
}

std::vector<double> System::strain(const std::vector<double>& u) const {
    const std::size_t ne = mesh_.num_elements();
    std::vector<double> out(ne * nq_, 0.0);
    for (std::size_t e = 0; e < ne; ++e) {
        const double inv_h = 1.0 / mesh_.element_length(e);
        for (std::size_t q = 0; q < nq_; ++q) {
            double v = 0.0;
            for (int i = 0; i < ref_.nloc; ++i) v += ref_.derivs[q * ref_.nloc + i] * u[mesh_.dof(e, i)];
            out[e * nq_ + q] = v * inv_h;
        }
    }
    return out;
}

double System::h_inner(const State& x, const State& y) const {
    std::vector<double> my(num_dofs());
    ops_.mass.multiply<double, double>(y.u, my);
    double acc = 0.0;
    for (std::size_t i = 0; i < my.size(); ++i) acc += x.u[i] * my[i];
    for (std::size_t e = 0; e < mesh_.num_elements(); ++e) {
        const double h = mesh_.element_length(e);
        for (std::size_t q = 0; q < nq_; ++q) {
            const double w = ref_.rule.weights[q] * h;
            if (e_off_[e] != npos) acc += w * c0_[e] * x.E[e_off_[e] + q] * y.E[e_off_[e] + q];
            if (s_off_[e] != npos) acc += w * a_[e] * cd_[e] * x.S[s_off_[e] + q] * y.S[s_off_[e] + q];
        }
    }
    return acc;
}

double System::h_norm(const State& x) const { return std::sqrt(std::max(0.0, h_inner(x, x))); }

State System::apply_generator(const State& st) const {
    const std::size_t nd = num_dofs();
    const auto bu = strain(st.u);
    State out = zero_state();
    // force = -B^T W (c0 E + cd S + cv B u)
    std::vector<double> force(nd, 0.0);
    for (std::size_t e = 0; e < mesh_.num_elements(); ++e) {
        for (std::size_t q = 0; q < nq_; ++q) {
            const std::size_t iq = e * nq_ + q;
            double sig = cv_[e] * bu[iq];
            if (e_off_[e] != npos) {
                sig += c0_[e] * st.E[e_off_[e] + q];
                out.E[e_off_[e] + q] = bu[iq];
            }
            if (s_off_[e] != npos) {
                sig += cd_[e] * st.S[s_off_[e] + q];
                out.S[s_off_[e] + q] = (bu[iq] - st.S[s_off_[e] + q]) / a_[e];
            }
            const double wq = ref_.rule.weights[q] * sig;  // W_q / h_e with W_q = w_q h_e
            for (int i = 0; i < ref_.nloc; ++i) force[mesh_.dof(e, i)] -= wq * ref_.derivs[q * ref_.nloc + i];
        }
    }
    std::vector<double> interior(force.begin() + 1, force.end());
    mass_interior_.solve(interior);
    std::copy(interior.begin(), interior.end(), out.u.begin() + 1);
    return out;
}

double System::dissipation(const State& st) const {
    double acc = 0.0;
    for (std::size_t e = 0; e < mesh_.num_elements(); ++e) {
        if (s_off_[e] == npos) continue;
        const double h = mesh_.element_length(e);
        for (std::size_t q = 0; q < nq_; ++q) {
            const double s = st.S[s_off_[e] + q];
            acc -= ref_.rule.weights[q] * h * cd_[e] * s * s;
        }
    }
    std::vector<double> ku(num_dofs());
    viscous_.multiply<double, double>(st.u, ku);
    for (std::size_t i = 0; i < ku.size(); ++i) acc -= st.u[i] * ku[i];
    return acc;
}

void System::set_step(double k) {
    if (!(k > 0.0) || !std::isfinite(k)) throw ValidationError("semigroup time step must be positive");
    k_ = k;
    fem::SymBandMatrix<double> a = ops_.mass.cast_scaled<double>(2.0);
    for (std::size_t r = 0; r < model_.regions.size(); ++r) {
        const auto& reg = model_.regions[r];
        double coef = 0.5 * k * k * reg.c0;
        if (reg.a > 0.0) {
            const double cd = std::max(0.0, reg.c1 - reg.a * reg.c0);
            coef += 0.5 * k * k * cd / (reg.a + 0.5 * k);
        } else {
            coef += k * reg.c1;
        }
        a.axpy(coef, ops_.stiffness[r]);
    }
    cn_ = fem::apply_dirichlet(a);
    cn_factor_ = fem::BandLDLT<double>(cn_.matrix, true);
}

void System::step_cn(State& st, double t, const BoundarySignals& bc, std::vector<double>* stress) const {
    if (k_ <= 0.0) throw NumericalError("semigroup step size not set");
    const double k = k_;
    const std::size_t nd = num_dofs();
    std::vector<double> rhs(nd, 0.0);
    ops_.mass.multiply<double, double>(st.u, rhs);
    for (double& v : rhs) v *= 2.0;
    for (std::size_t e = 0; e < mesh_.num_elements(); ++e) {
        for (std::size_t q = 0; q < nq_; ++q) {
            double sig = 0.0;
            if (e_off_[e] != npos) sig += c0_[e] * st.E[e_off_[e] + q];
            if (s_off_[e] != npos) sig += cd_[e] * a_[e] * st.S[s_off_[e] + q] / (a_[e] + 0.5 * k);
            if (sig == 0.0) continue;
            const double wq = k * ref_.rule.weights[q] * sig;
            for (int i = 0; i < ref_.nloc; ++i) rhs[mesh_.dof(e, i)] -= wq * ref_.derivs[q * ref_.nloc + i];
        }
    }
    rhs.back() += k * bc.neumann.integral(t + 0.5 * k);

    // Dirichlet lifting u = w + g(t) e_0: the lifted forcing is evaluated at the
    // midpoint like every other input, contributing -k M_{I0} g'(t_{n+1/2}).
    const double g_now = bc.dirichlet.value(t);
    const double ubar0 = bc.dirichlet.value(t + 0.5 * k);
    const double g_rate = bc.dirichlet.derivative(t + 0.5 * k);
    auto interior = fem::dirichlet_rhs<double>(cn_, rhs, ubar0);
    for (std::size_t i = 0; i < mass_coupling_.size(); ++i)
        interior[i] -= mass_coupling_[i] * (k * g_rate + 2.0 * (g_now - ubar0));
    cn_factor_.solve(interior);
    std::vector<double> ubar(nd);
    ubar[0] = ubar0;
    std::copy(interior.begin(), interior.end(), ubar.begin() + 1);

    const auto bu = strain(ubar);
    std::vector<double> du;
    if (stress) {
        stress->assign(mesh_.num_elements() * nq_, 0.0);
        std::vector<double> delta(nd);
        for (std::size_t i = 1; i < nd; ++i) delta[i] = 2.0 * (ubar[i] - st.u[i]);
        delta[0] = bc.dirichlet.value(t + k) - st.u[0];
        du = strain(delta);
    }
    for (std::size_t e = 0; e < mesh_.num_elements(); ++e) {
        for (std::size_t q = 0; q < nq_; ++q) {
            const std::size_t iq = e * nq_ + q;
            double sig = c0_[e] * bu[iq];
            if (e_off_[e] != npos) st.E[e_off_[e] + q] += k * bu[iq];
            if (s_off_[e] != npos) {
                double& s = st.S[s_off_[e] + q];
                const double snew = ((a_[e] - 0.5 * k) * s + k * bu[iq]) / (a_[e] + 0.5 * k);
                sig += cd_[e] * (snew - s) / k;
                s = snew;
            }
            if (stress) {
                sig += cv_[e] * du[iq] / k;
                (*stress)[iq] = sig;
            }
        }
    }
    st.u[0] = bc.dirichlet.value(t + k);
    for (std::size_t i = 1; i < nd; ++i) {
        const double v = 2.0 * ubar[i] - st.u[i];
        if (!std::isfinite(v)) throw NumericalError("semigroup step produced a non-finite value at t = " + std::to_string(t));
        st.u[i] = v;
    }
}

double System::stress_at(const std::vector<double>& qp, double x) const {
    const auto [e, xi] = mesh_.locate(x);
    const auto& pts = ref_.rule.points;
    double v = 0.0;
    for (std::size_t q = 0; q < nq_; ++q) {
        double l = 1.0;
        for (std::size_t m = 0; m < nq_; ++m)
            if (m != q) l *= (xi - pts[m]) / (pts[q] - pts[m]);
        v += l * qp[e * nq_ + q];
    }
    return v;
}

RunResult run(const material::CoupledModel& model, const fem::Mesh1D& mesh, double k, std::size_t steps,
              const BoundarySignals& bc, const std::vector<double>& stress_points) {
    signals::validate(bc.dirichlet, "signals.dirichlet");
    signals::validate(bc.neumann, "signals.neumann");
    System sys(model, mesh);
    sys.set_step(k);
    RunResult res;
    res.trajectory.mesh = mesh;
    res.trajectory.k = k;
    res.trajectory.u = cq::History(sys.num_dofs());
    res.trajectory.u.reserve(steps + 1);
    State st = sys.zero_state();
    res.trajectory.u.append(st.u);
    res.h_norm.push_back(0.0);
    for (double x : stress_points) {
        StressProbe p;
        p.x = x;
        (void)mesh.locate(x);
        res.stress.push_back(std::move(p));
    }
    std::vector<double> qp;
    for (std::size_t n = 0; n < steps; ++n) {
        const double t = static_cast<double>(n) * k;
        sys.step_cn(st, t, bc, stress_points.empty() ? nullptr : &qp);
        res.trajectory.u.append(st.u);
        res.h_norm.push_back(sys.h_norm(st));
        for (auto& p : res.stress) {
            p.times.push_back(t + 0.5 * k);
            p.values.push_back(sys.stress_at(qp, p.x));
        }
    }
    return res;
}

DissipativityReport check_dissipativity(const System& sys, std::size_t trials, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    DissipativityReport rep;
    rep.trials = trials;
    rep.max_form = -std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < trials; ++t) {
        State st = sys.zero_state();
        for (std::size_t i = 1; i < st.u.size(); ++i) st.u[i] = gauss(rng);
        for (double& v : st.E) v = gauss(rng);
        for (double& v : st.S) v = gauss(rng);
        const State au = sys.apply_generator(st);
        const double form = sys.h_inner(au, st);
        const double closed = sys.dissipation(st);
        const double norm2 = sys.h_inner(st, st);
        // Scale of the cancelling terms: |A U|_H |U|_H bounds every one of them.
        const double scale = std::max(norm2, std::sqrt(sys.h_inner(au, au) * norm2));
        rep.max_form = std::max(rep.max_form, form / norm2);
        rep.max_identity_error = std::max(rep.max_identity_error, std::abs(form - closed) / scale);
        if (form > 1e-12 * scale) rep.passed = false;
    }
    if (rep.max_identity_error > 1e-10) rep.passed = false;
    return rep;
}

CrossValidation cross_validate(const material::CoupledModel& model, const fem::Mesh1D& mesh, double T,
                               const std::vector<std::size_t>& steps, const BoundarySignals& bc,
                               const std::vector<double>& probes) {
    CrossValidation out;
    for (std::size_t n : steps) {
        const double k = T / static_cast<double>(n);
        const auto cqt = timestepper_cq::run(model, mesh, cq::CQScheme(k, n), bc);
        const auto sgt = run(model, mesh, k, n, bc);
        double d = 0.0;
        for (double x : probes) {
            const auto a = probe(cqt, x);
            const auto b = probe(sgt.trajectory, x);
            for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
        }
        out.k.push_back(k);
        out.discrepancy.push_back(d);
    }
    for (std::size_t i = 1; i < out.discrepancy.size(); ++i)
        out.order.push_back(std::log2(out.discrepancy[i - 1] / out.discrepancy[i]));
    return out;
}

}  // namespace viscowave::semigroup
