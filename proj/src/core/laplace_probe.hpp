#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "cq.hpp"
#include "fem1d.hpp"
#include "material.hpp"

namespace viscowave::laplace {

using Complex = std::complex<double>;

/// Right-hand side of b(u, w; s) = (F, w) + beta w(L), u(0) = alpha.
struct FrequencyData {
    std::function<double(double)> volume;  // empty means F = 0
    Complex alpha{0.0, 0.0};
    Complex beta{0.0, 0.0};
};

struct FrequencySolve {
    Complex s;
    std::vector<Complex> u;
    double energy_norm = 0.0;    // |||u|||_{|s|}
    double residual_norm = 0.0;  // max-norm of the interior residual over max-norm of the load
};

/// s^2 M + sum_r c_r(s) K_r.
fem::SymBandMatrix<Complex> frequency_matrix(const fem::AssembledOperators& ops,
                                             const material::CoupledModel& model, Complex s);

/// |||u|||_c^2 = c^2 u^H M u + u^H K u with K the unit-coefficient stiffness.
double energy_norm(const fem::AssembledOperators& ops, const std::vector<Complex>& u, double c);

FrequencySolve solve_at(Complex s, const material::CoupledModel& model, const fem::Mesh1D& mesh,
                        const FrequencyData& data);

struct CoercivityOptions {
    std::size_t trials = 1000;
    std::uint64_t seed = 1;
    /// Fixed frequency for every trial; otherwise s is drawn per trial from
    /// material::sample_half_plane.
    std::optional<Complex> s;
    /// Replaces the model's combined certificate.
    std::optional<material::Certificate> certificate;
    /// Multiplies psi_star; values above 1 probe the check itself.
    double psi_star_scale = 1.0;
};

struct CoercivityViolation {
    Complex s;
    std::string which;  // "coercivity" or "boundedness"
    double lhs = 0.0;
    double rhs = 0.0;
    std::size_t trial = 0;
};

struct CoercivityReport {
    std::size_t trials = 0;
    double worst_coercivity_margin = 0.0;   // min (lhs - rhs) / max(|lhs|, |rhs|)
    double worst_boundedness_margin = 0.0;  // min (rhs - lhs) / max(|lhs|, |rhs|)
    std::vector<CoercivityViolation> violations;
    bool passed() const { return violations.empty(); }
};

/// (Re b(u, conj(s u); s) - psi_star |||u|||^2) / max of both sides, with
/// psi_star = min{Re s, psi(Re s)}. Negative means the bound fails for u.
double coercivity_margin(const material::CoupledModel& model, const fem::AssembledOperators& ops, Complex s,
                         const std::vector<Complex>& u, const material::Certificate& cert);

/// Checks Re b(u, conj(s u); s) >= psi_star(Re s) |||u|||^2 and
/// |b(u, w; s)| <= |s|^r phi_star(Re s) |||u||| |||w||| on random fields, with
/// psi_star = min{x, psi}, phi_star = max{x^-r, phi}.
CoercivityReport coercivity_check(const material::CoupledModel& model, const fem::Mesh1D& mesh,
                                  const CoercivityOptions& options);

struct NormEquivalenceReport {
    std::size_t trials = 0;
    double worst_lower_margin = 0.0;
    double worst_upper_margin = 0.0;
    bool passed = true;
};

/// min{1, Re s} |||u|||_1 <= |||u|||_{|s|} <= |s| / min{1, Re s} |||u|||_1.
NormEquivalenceReport norm_equivalence_check(const material::CoupledModel& model, const fem::Mesh1D& mesh,
                                             std::size_t trials, std::uint64_t seed);

struct ConsistencyRow {
    std::size_t node = 0;
    Complex zeta;
    Complex s;
    double discrepancy = 0.0;  // max entry difference over max entry of the frequency matrix
};

/// Evaluates the generating function of the marching weights at contour
/// nodes, multiplies by s and compares with s^2 M + sum c_r(s) K_r. Uses
/// `count` nodes evenly spaced around the contour.
std::vector<ConsistencyRow> transfer_consistency(const material::CoupledModel& model, const fem::Mesh1D& mesh,
                                                 const cq::CQScheme& scheme, std::size_t count = 16);

}  // namespace viscowave::laplace
