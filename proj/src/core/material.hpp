#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace viscowave::material {

using Complex = std::complex<double>;

enum class ModelKind {
    Elastic,
    Zener,
    FractionalZener,
    Maxwell,
    FractionalMaxwell,
    Voigt,
    FractionalVoigt,
};

std::string_view to_string(ModelKind kind);
std::optional<ModelKind> parse_kind(std::string_view name);
bool is_fractional(ModelKind kind);

/// One spatial interval [x_lo, x_hi] with a scalar Laplace-domain material law
///
///     c(s) = (c0 + s^nu c1) / (1 + a s^nu)
///
/// Integer kinds carry nu = 1; Elastic ignores nu.
struct MaterialRegion {
    std::string name;
    ModelKind kind = ModelKind::Elastic;
    double x_lo = 0.0;
    double x_hi = 1.0;
    double c0 = 1.0;
    double c1 = 0.0;
    double a = 0.0;
    double nu = 1.0;
    double rho = 1.0;

    double length() const { return x_hi - x_lo; }
    /// c1 - a c0; the part of the law that dissipates.
    double diffusive() const;
    /// Effective fractional order (1 for integer kinds).
    double order() const;
};

/// Throws ValidationError naming the offending field.
void validate(const MaterialRegion& region);

/// Principal branch s^nu on the right half-plane.
Complex principal_power(Complex s, double nu);

/// Transfer function c(s). Requires Re s > 0.
Complex eval_transfer(const MaterialRegion& region, Complex s);

/// Same as eval_transfer without the half-plane check; used on CQ contours
/// where Re s > 0 is already guaranteed by construction.
Complex eval_transfer_unchecked(const MaterialRegion& region, Complex s);

/// Positivity / boundedness certificate:
///   Re(conj(s) c(s)) >= psi(Re s),   |c(s)| <= |s|^r phi(Re s).
struct Certificate {
    int r = 0;
    std::function<double(double)> psi;
    std::function<double(double)> phi;
};

Certificate certificate_of(const MaterialRegion& region);

struct Violation {
    Complex s;
    double nu = 1.0;       // only meaningful for the fractional power check
    std::string which;     // "positivity", "boundedness" or "power"
    double lhs = 0.0;
    double rhs = 0.0;
};

struct HypothesisReport {
    std::size_t samples = 0;
    /// min over samples of (lhs - rhs) / max(|lhs|, |rhs|, tiny); negative means violation.
    double worst_positivity_margin = 0.0;
    double worst_boundedness_margin = 0.0;
    Complex worst_positivity_s{};
    Complex worst_boundedness_s{};
    std::vector<Violation> violations;

    bool passed() const { return violations.empty(); }
};

/// Samples s with Re s log-uniform on [1e-3, 1e3] and |Im s| log-uniform on
/// [1e-6, 1e3] with a random sign (one sample in eight is taken on the real
/// axis). Violations tolerate a relative rounding slack of 1e-12.
HypothesisReport verify_hypotheses(const MaterialRegion& region, const Certificate& cert,
                                   std::size_t sample_count, std::uint64_t rng_seed);

/// Checks min{1, Re s} <= Re(s^nu) on random (s, nu), nu uniform in (0, 1).
HypothesisReport fractional_power_bound_check(std::size_t sample_count, std::uint64_t rng_seed);

/// Draws one s from the verification distribution. Exposed for the Laplace probe.
template <class Rng>
Complex sample_half_plane(Rng& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double re = std::pow(10.0, -3.0 + 6.0 * unit(rng));
    double im = 0.0;
    if (unit(rng) >= 0.125) {
        im = std::pow(10.0, -6.0 + 9.0 * unit(rng));
        if (unit(rng) < 0.5) im = -im;
    }
    return {re, im};
}

/// Ordered, gap-free partition of [0, L] into regions.
struct CoupledModel {
    std::vector<MaterialRegion> regions;

    double length() const { return regions.empty() ? 0.0 : regions.back().x_hi; }
    /// Index of the named region, or nullopt.
    std::optional<std::size_t> find(std::string_view name) const;
    bool all_integer_order() const;
};

void validate(const CoupledModel& model);

/// r = max r_j, psi = min psi_j, phi(x) = max_j x^(r_j - r) phi_j(x).
Certificate combined_certificate(const CoupledModel& model);

}  // namespace viscowave::material
