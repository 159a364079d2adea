#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "banded.hpp"
#include "fem1d.hpp"
#include "material.hpp"
#include "timestepper_cq.hpp"

namespace viscowave::semigroup {

/// First-order state for the time-integrated problem: u is the displacement,
/// E the time-integrated strain and S the relaxation variable. E lives on
/// quadrature points of elements with c0 > 0, S on those with c1 - a c0 > 0
/// and a > 0. A Voigt region (a = 0) contributes a viscous term instead of S.
struct State {
    std::vector<double> u;
    std::vector<double> E;
    std::vector<double> S;
};

class System {
public:
    System(const material::CoupledModel& model, const fem::Mesh1D& mesh);

    const fem::Mesh1D& mesh() const { return mesh_; }
    const fem::AssembledOperators& operators() const { return ops_; }
    std::size_t num_dofs() const { return ops_.num_dofs(); }
    std::size_t num_strain() const { return e_count_; }
    std::size_t num_relax() const { return s_count_; }
    State zero_state() const;

    double h_inner(const State& a, const State& b) const;
    double h_norm(const State& a) const;

    /// A U with homogeneous boundary data (u_0 is held at zero).
    State apply_generator(const State& state) const;
    /// Closed form of <AU, U>_H: -sum w c_diff S^2 - c_v u^T K_v u.
    double dissipation(const State& state) const;

    /// Strain B u at every quadrature point of every element ([e * nq + q]).
    std::vector<double> strain(const std::vector<double>& u) const;

    /// Prepares the Crank-Nicolson matrix for step k.
    void set_step(double k);
    double step_size() const { return k_; }

    /// Advances state from t to t + k. Returns sigma at the quadrature points
    /// at the half step when `stress` is not null.
    void step_cn(State& state, double t, const BoundarySignals& bc, std::vector<double>* stress = nullptr) const;

    /// Stress at x from quadrature-point values, interpolating through the
    /// Gauss points of the containing element.
    double stress_at(const std::vector<double>& qp_stress, double x) const;

private:
    material::CoupledModel model_;
    fem::Mesh1D mesh_;
    fem::AssembledOperators ops_;
    fem::ReferenceTable ref_;
    std::size_t nq_ = 0;
    // per element: coefficients and offsets (npos = absent)
    std::vector<double> c0_, cd_, a_, cv_;
    std::vector<std::size_t> e_off_, s_off_;
    std::size_t e_count_ = 0, s_count_ = 0;
    fem::SymBandMatrix<double> viscous_;  // sum_r cv_r K_r
    fem::BandLDLT<double> mass_interior_;
    std::vector<double> mass_coupling_;  // M(i, 0), i = 1..p

    double k_ = 0.0;
    fem::DirichletSystem<double> cn_;
    fem::BandLDLT<double> cn_factor_;
};

struct StressProbe {
    double x = 0.0;
    std::vector<double> times;   // t_{n+1/2}
    std::vector<double> values;
};

struct RunResult {
    Trajectory trajectory;
    std::vector<double> h_norm;  // per step, n = 0..N
    std::vector<StressProbe> stress;
};

/// Rejects fractional regions. Volume forces are not supported (only
/// boundary data enter the first-order form).
RunResult run(const material::CoupledModel& model, const fem::Mesh1D& mesh, double k, std::size_t steps,
              const BoundarySignals& bc, const std::vector<double>& stress_points = {});

struct DissipativityReport {
    std::size_t trials = 0;
    double max_form = 0.0;          // largest <AU,U>_H / |U|^2 seen (should be <= 0)
    double max_identity_error = 0.0;  // |<AU,U>_H - closed form| / |U|^2
    bool passed = true;
};

DissipativityReport check_dissipativity(const System& system, std::size_t trials, std::uint64_t seed);

struct CrossValidation {
    std::vector<double> k;
    std::vector<double> discrepancy;  // max over probes and time of |u_cq - u_sg|
    std::vector<double> order;        // log2 ratios between consecutive levels
};

/// Runs both integrators at T / steps for every entry of `steps` and records
/// the discrepancy at the probe points.
CrossValidation cross_validate(const material::CoupledModel& model, const fem::Mesh1D& mesh, double T,
                               const std::vector<std::size_t>& steps, const BoundarySignals& bc,
                               const std::vector<double>& probes);

}  // namespace viscowave::semigroup
