#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "banded.hpp"
#include "cq.hpp"
#include "fem1d.hpp"
#include "material.hpp"
#include "signals.hpp"

namespace viscowave {

struct BoundarySignals {
    signals::Signal dirichlet;  // u(0, t)
    signals::Signal neumann;    // sigma(L, t)
};

/// Volume force f(x, t); an empty function means f = 0.
using VolumeForce = std::function<double(double, double)>;

/// Displacement history on t_n = n k, n = 0..N, stored time-major.
struct Trajectory {
    fem::Mesh1D mesh;
    double k = 0.0;
    cq::History u{0};

    std::size_t steps() const { return u.size() == 0 ? 0 : u.size() - 1; }
    double time(std::size_t n) const { return static_cast<double>(n) * k; }
};

/// FE interpolation of u^n at x for every stored n.
std::vector<double> probe(const Trajectory& traj, double x);

/// Discrete energy 1/2 v^T M v + 1/2 sum_r c0_r u^T K_r u, where v is the
/// trapezoidal velocity v^n = (2/k)(u^n - u^(n-1)) - v^(n-1). Conserved
/// exactly by the scheme for elastic models once the data vanish.
std::vector<double> discrete_energy(const Trajectory& traj, const material::CoupledModel& model);

namespace timestepper_cq {

/// How one region's stiffness term c_r(s)/s enters the marching. Weights of
/// 1/s are the trapezoidal weights (k/2, k, k, ...), so elastic and integer
/// Voigt regions reduce to a running sum. Integer Zener and Maxwell laws split
/// as c0/s + cd/(1 + a s); the second term has the rational generating
/// function (1 + z)/((1 + b) + (1 - b) z), b = 2a/k, and is marched by the
/// recursion (1 + b) y^n + (1 - b) y^(n-1) = u^n + u^(n-1). Fractional laws
/// store the CQ weight sequence.
struct RegionWeights {
    double implicit = 0.0;           // omega_0 of c_r(s)/s
    double running = 0.0;            // coefficient of k * sum_{j>=1} u^(n-j)
    double relax = 0.0;              // cd of the recursive term (0 when absent)
    double relax_beta = 0.0;         // b = 2a/k
    std::vector<double> lagged;      // omega_j, j >= 0 (empty unless fractional)
};

/// c_r(s) / s, the stiffness symbol marched by the scheme.
cq::Symbol stiffness_symbol(const material::MaterialRegion& region);

RegionWeights region_weights(const material::MaterialRegion& region, const cq::CQScheme& scheme);

struct DiscreteSystem {
    material::CoupledModel model;
    fem::Mesh1D mesh;
    fem::AssembledOperators ops;
    double k = 0.0;
    std::size_t steps = 0;
    std::vector<RegionWeights> region_weights;
    /// (k/2) B0 = (2/k) M + sum_r omega_0^(r) K_r, full and after elimination.
    fem::SymBandMatrix<double> implicit_full;
    fem::DirichletSystem<double> implicit;
    fem::BandLDLT<double> factor;
};

DiscreteSystem build(const material::CoupledModel& model, const fem::Mesh1D& mesh, const cq::CQScheme& scheme);

/// Marches the scheme. Throws NumericalError with the step index on NaN.
Trajectory run(const DiscreteSystem& system, const BoundarySignals& bc, const VolumeForce& f = {});

/// Convenience wrapper: build + run.
Trajectory run(const material::CoupledModel& model, const fem::Mesh1D& mesh, const cq::CQScheme& scheme,
               const BoundarySignals& bc, const VolumeForce& f = {});

/// sigma^n = sum_j omega_j (u_x)^(n-j) at x, with omega the weights of the
/// region's transfer function c_r(s). The point must lie in the region.
std::vector<double> stress_trace(const Trajectory& traj, const material::CoupledModel& model, std::size_t region,
                                 double x);

}  // namespace timestepper_cq
}  // namespace viscowave
