#include "material.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "errors.hpp"

namespace viscowave::material {

namespace {

constexpr double kSlack = 1e-12;

struct KindName {
    ModelKind kind;
    std::string_view name;
};

constexpr std::array<KindName, 7> kKindNames{{
    {ModelKind::Elastic, "elastic"},
    {ModelKind::Zener, "zener"},
    {ModelKind::FractionalZener, "fractional_zener"},
    {ModelKind::Maxwell, "maxwell"},
    {ModelKind::FractionalMaxwell, "fractional_maxwell"},
    {ModelKind::Voigt, "voigt"},
    {ModelKind::FractionalVoigt, "fractional_voigt"},
}};

[[noreturn]] void reject(const MaterialRegion& region, std::string_view field, std::string_view why) {
    std::ostringstream os;
    os << "region '" << region.name << "' (" << to_string(region.kind) << "): " << field << " " << why;
    throw ValidationError(os.str());
}

bool nearly_equal(double x, double y) {
    return std::abs(x - y) <= kSlack * std::max({1.0, std::abs(x), std::abs(y)});
}

double relative_gap(double larger, double smaller) {
    const double scale = std::max({std::abs(larger), std::abs(smaller), std::numeric_limits<double>::min()});
    return (larger - smaller) / scale;
}

}  // namespace

std::string_view to_string(ModelKind kind) {
    for (const auto& entry : kKindNames)
        if (entry.kind == kind) return entry.name;
    return "unknown";
}

std::optional<ModelKind> parse_kind(std::string_view name) {
    for (const auto& entry : kKindNames)
        if (entry.name == name) return entry.kind;
    return std::nullopt;
}

bool is_fractional(ModelKind kind) {
    return kind == ModelKind::FractionalZener || kind == ModelKind::FractionalMaxwell ||
           kind == ModelKind::FractionalVoigt;
}

double MaterialRegion::diffusive() const {
    switch (kind) {
        case ModelKind::Elastic:
            return 0.0;
        case ModelKind::Maxwell:
        case ModelKind::FractionalMaxwell:
        case ModelKind::Voigt:
        case ModelKind::FractionalVoigt:
            return c1;
        case ModelKind::Zener:
        case ModelKind::FractionalZener:
            return std::max(0.0, c1 - a * c0);
    }
    return 0.0;
}

double MaterialRegion::order() const { return is_fractional(kind) ? nu : 1.0; }

void validate(const MaterialRegion& region) {
    const auto finite = [&](double v, std::string_view field) {
        if (!std::isfinite(v)) reject(region, field, "must be finite");
    };
    finite(region.x_lo, "x_lo");
    finite(region.x_hi, "x_hi");
    finite(region.c0, "c0");
    finite(region.c1, "c1");
    finite(region.a, "a");
    finite(region.nu, "nu");
    finite(region.rho, "rho");
    if (!(region.x_lo < region.x_hi)) reject(region, "x_lo", "must be < x_hi");
    if (!(region.rho > 0.0)) reject(region, "rho", "must be > 0");
    if (region.c0 < 0.0) reject(region, "c0", "must be >= 0");
    if (region.c1 < 0.0) reject(region, "c1", "must be >= 0");
    if (region.a < 0.0) reject(region, "a", "must be >= 0");

    if (is_fractional(region.kind)) {
        if (!(region.nu > 0.0 && region.nu < 1.0)) reject(region, "nu", "must lie in (0,1) for fractional kinds");
    } else if (region.kind != ModelKind::Elastic && region.nu != 1.0) {
        reject(region, "nu", "must be 1 for integer-order kinds");
    }

    switch (region.kind) {
        case ModelKind::Elastic:
            if (!(region.c0 > 0.0)) reject(region, "c0", "must be > 0");
            if (!(nearly_equal(region.c1, region.a * region.c0) || (region.c1 == 0.0 && region.a == 0.0)))
                reject(region, "c1", "must equal a*c0 (or c1 = a = 0) for an elastic law");
            break;
        case ModelKind::Zener:
        case ModelKind::FractionalZener:
            if (!(region.c0 > 0.0)) reject(region, "c0", "must be > 0");
            if (!(region.c1 > 0.0)) reject(region, "c1", "must be > 0");
            if (!(region.a > 0.0)) reject(region, "a", "must be > 0");
            if (region.c1 < region.a * region.c0 && !nearly_equal(region.c1, region.a * region.c0))
                reject(region, "c1", "must satisfy c1 >= a*c0");
            break;
        case ModelKind::Maxwell:
        case ModelKind::FractionalMaxwell:
            if (region.c0 != 0.0) reject(region, "c0", "must be 0");
            if (!(region.c1 > 0.0)) reject(region, "c1", "must be > 0");
            if (!(region.a > 0.0)) reject(region, "a", "must be > 0");
            break;
        case ModelKind::Voigt:
        case ModelKind::FractionalVoigt:
            if (region.a != 0.0) reject(region, "a", "must be 0");
            if (!(region.c0 > 0.0)) reject(region, "c0", "must be > 0");
            break;
    }
}

Complex principal_power(Complex s, double nu) {
    if (nu == 1.0) return s;
    return std::polar(std::pow(std::abs(s), nu), nu * std::arg(s));
}

Complex eval_transfer_unchecked(const MaterialRegion& region, Complex s) {
    if (region.kind == ModelKind::Elastic) return {region.c0, 0.0};
    const Complex z = principal_power(s, region.order());
    // (c0 + z c1)/(1 + a z) = c0 + z c_diff/(1 + a z); exact collapse when c_diff = 0.
    const double cdiff = region.kind == ModelKind::Zener || region.kind == ModelKind::FractionalZener
                             ? region.c1 - region.a * region.c0
                             : region.c1;
    if (cdiff == 0.0) return {region.c0, 0.0};
    return region.c0 + z * cdiff / (1.0 + region.a * z);
}

Complex eval_transfer(const MaterialRegion& region, Complex s) {
    if (!(s.real() > 0.0)) throw ValidationError("eval_transfer: Re s must be > 0");
    validate(region);
    return eval_transfer_unchecked(region, s);
}

Certificate certificate_of(const MaterialRegion& region) {
    validate(region);
    const double c0 = region.c0;
    const double c1 = region.c1;
    const double a = region.a;
    Certificate cert;
    switch (region.kind) {
        case ModelKind::Elastic:
            cert.r = 0;
            cert.psi = [c0](double x) { return c0 * x; };
            cert.phi = [c0](double) { return c0; };
            break;
        case ModelKind::Zener:
        case ModelKind::FractionalZener: {
            // Region-constant coefficients: ||a||_inf = a_0 = a.
            const double scale = (1.0 + a) / (a * a) * (c0 + c1);
            cert.r = 0;
            cert.psi = [c0](double x) { return c0 * x; };
            cert.phi = [scale](double x) {
                const double m = std::min(1.0, x);
                return scale / (m * m);
            };
            break;
        }
        case ModelKind::Maxwell:
        case ModelKind::FractionalMaxwell: {
            const double lower = c1 * std::min(1.0, a * a * a) / (2.0 * a * a);
            const double scale = (1.0 + a) / (a * a) * c1;
            cert.r = 0;
            cert.psi = [lower](double x) { return lower * std::min(1.0, x * x * x); };
            cert.phi = [scale](double x) { return scale / std::min(1.0, x * x); };
            break;
        }
        case ModelKind::Voigt:
            cert.r = 1;
            cert.psi = [c0](double x) { return c0 * x; };
            cert.phi = [sum = c0 + c1](double x) { return sum / std::min(1.0, x); };
            break;
        case ModelKind::FractionalVoigt:
            cert.r = 1;
            cert.psi = [c0](double x) { return c0 * x; };
            cert.phi = [sum = c0 + c1](double x) { return sum / std::min(1.0, x * x); };
            break;
    }
    return cert;
}

HypothesisReport verify_hypotheses(const MaterialRegion& region, const Certificate& cert,
                                   std::size_t sample_count, std::uint64_t rng_seed) {
    if (sample_count < 1) throw ValidationError("verify_hypotheses: sample_count must be >= 1");
    validate(region);
    std::mt19937_64 rng(rng_seed);
    HypothesisReport report;
    report.samples = sample_count;
    report.worst_positivity_margin = std::numeric_limits<double>::infinity();
    report.worst_boundedness_margin = std::numeric_limits<double>::infinity();

    for (std::size_t i = 0; i < sample_count; ++i) {
        const Complex s = sample_half_plane(rng);
        const Complex c = eval_transfer_unchecked(region, s);

        const double pos_lhs = (std::conj(s) * c).real();
        const double pos_rhs = cert.psi(s.real());
        const double pos_margin = relative_gap(pos_lhs, pos_rhs);
        if (pos_margin < report.worst_positivity_margin) {
            report.worst_positivity_margin = pos_margin;
            report.worst_positivity_s = s;
        }
        if (pos_margin < -kSlack) report.violations.push_back({s, 1.0, "positivity", pos_lhs, pos_rhs});

        const double bnd_lhs = std::abs(c);
        const double bnd_rhs = std::pow(std::abs(s), cert.r) * cert.phi(s.real());
        const double bnd_margin = relative_gap(bnd_rhs, bnd_lhs);
        if (bnd_margin < report.worst_boundedness_margin) {
            report.worst_boundedness_margin = bnd_margin;
            report.worst_boundedness_s = s;
        }
        if (bnd_margin < -kSlack) report.violations.push_back({s, 1.0, "boundedness", bnd_lhs, bnd_rhs});
    }
    return report;
}

HypothesisReport fractional_power_bound_check(std::size_t sample_count, std::uint64_t rng_seed) {
    if (sample_count < 1) throw ValidationError("fractional_power_bound_check: sample_count must be >= 1");
    std::mt19937_64 rng(rng_seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    HypothesisReport report;
    report.samples = sample_count;
    report.worst_positivity_margin = std::numeric_limits<double>::infinity();
    report.worst_boundedness_margin = 0.0;
    for (std::size_t i = 0; i < sample_count; ++i) {
        const Complex s = sample_half_plane(rng);
        double nu = unit(rng);
        while (nu <= 0.0) nu = unit(rng);
        const double lhs = principal_power(s, nu).real();
        const double rhs = std::min(1.0, s.real());
        const double margin = relative_gap(lhs, rhs);
        if (margin < report.worst_positivity_margin) {
            report.worst_positivity_margin = margin;
            report.worst_positivity_s = s;
        }
        if (margin < -kSlack) report.violations.push_back({s, nu, "power", lhs, rhs});
    }
    return report;
}

std::optional<std::size_t> CoupledModel::find(std::string_view name) const {
    for (std::size_t i = 0; i < regions.size(); ++i)
        if (regions[i].name == name) return i;
    return std::nullopt;
}

bool CoupledModel::all_integer_order() const {
    return std::none_of(regions.begin(), regions.end(),
                        [](const MaterialRegion& r) { return is_fractional(r.kind); });
}

void validate(const CoupledModel& model) {
    if (model.regions.empty()) throw ValidationError("model: at least one region is required");
    if (model.regions.front().x_lo != 0.0) throw ValidationError("model: first region must start at x = 0");
    for (std::size_t i = 0; i < model.regions.size(); ++i) {
        validate(model.regions[i]);
        if (i > 0 && model.regions[i].x_lo != model.regions[i - 1].x_hi) {
            std::ostringstream os;
            os << "model: region '" << model.regions[i].name << "' must start where '"
               << model.regions[i - 1].name << "' ends (x = " << model.regions[i - 1].x_hi << ")";
            throw ValidationError(os.str());
        }
    }
}

Certificate combined_certificate(const CoupledModel& model) {
    validate(model);
    std::vector<Certificate> parts;
    parts.reserve(model.regions.size());
    int r = 0;
    for (const auto& region : model.regions) {
        parts.push_back(certificate_of(region));
        r = std::max(r, parts.back().r);
    }
    Certificate combined;
    combined.r = r;
    combined.psi = [parts](double x) {
        double v = std::numeric_limits<double>::infinity();
        for (const auto& p : parts) v = std::min(v, p.psi(x));
        return v;
    };
    combined.phi = [parts, r](double x) {
        double v = 0.0;
        for (const auto& p : parts) v = std::max(v, std::pow(x, p.r - r) * p.phi(x));
        return v;
    };
    return combined;
}

}  // namespace viscowave::material
