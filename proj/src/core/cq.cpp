#include "cq.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

#include "errors.hpp"
#include "material.hpp"

namespace viscowave::cq {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

/// Raw complex coefficients lambda^-j / L * sum_m f(s_m) e^{-2 pi i m j / L}.
std::vector<Complex> raw_coefficients(const Symbol& f, const CQScheme& scheme) {
    const std::size_t l = scheme.contour_points();
    std::vector<Complex> buf(l);
    for (std::size_t m = 0; m < l; ++m) {
        const Complex s = scheme.symbol(scheme.contour_node(m));
        const Complex v = f(s);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw NumericalError("CQ weights: symbol is not finite at s = (" + std::to_string(s.real()) + ", " +
                                 std::to_string(s.imag()) + ")");
        buf[m] = v;
    }
    auto* data = reinterpret_cast<fftw_complex*>(buf.data());
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(l), data, data, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    const double inv_lambda = 1.0 / scheme.lambda();
    double scale = 1.0 / static_cast<double>(l);
    for (std::size_t j = 0; j < l; ++j) {
        buf[j] *= scale;
        scale *= inv_lambda;
    }
    return buf;
}

}  // namespace

CQScheme::CQScheme(double k, std::size_t steps) : k_(k), n_(steps) {
    if (!(k > 0.0) || !std::isfinite(k)) throw ValidationError("CQ time step must be positive");
    if (steps < 1) throw ValidationError("CQ needs at least one step");
    l_ = 4 * (steps + 1);
    lambda_ = std::pow(std::numeric_limits<double>::epsilon(), 1.0 / static_cast<double>(l_ + n_));
    // The trapezoidal symbol maps |zeta| = lambda < 1 into the right half-plane.
    for (std::size_t m = 0; m < l_; m += std::max<std::size_t>(1, l_ / 64))
        if (!(symbol(contour_node(m)).real() > 0.0)) throw NumericalError("CQ contour leaves the right half-plane");
    if (std::abs(symbol(0.0) - 2.0 / k) > 0.0) throw NumericalError("CQ symbol at zero must equal 2/k");
}

Complex CQScheme::symbol(Complex zeta) const {
    return 2.0 * (1.0 - zeta) / ((1.0 + zeta) * k_);
}

Complex CQScheme::contour_node(std::size_t m) const {
    return std::polar(lambda_, 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(l_));
}

std::vector<double> weights(const Symbol& f, const CQScheme& scheme) {
    const auto raw = raw_coefficients(f, scheme);
    const std::size_t n = scheme.steps();
    std::vector<double> w(n + 1);
    double max_re = 0.0, max_im = 0.0;
    for (std::size_t j = 0; j <= n; ++j) {
        w[j] = raw[j].real();
        max_re = std::max(max_re, std::abs(raw[j].real()));
        max_im = std::max(max_im, std::abs(raw[j].imag()));
    }
    if (max_im > 1e-10 * std::max(max_re, std::numeric_limits<double>::min()))
        throw NumericalError("CQ weights are not real: imaginary residue " + std::to_string(max_im) +
                             " against weight scale " + std::to_string(max_re));
    return w;
}

std::vector<double> contour_coefficients(const Symbol& f, const CQScheme& scheme) {
    const auto raw = raw_coefficients(f, scheme);
    std::vector<double> c(raw.size());
    for (std::size_t j = 0; j < raw.size(); ++j) c[j] = raw[j].real();
    return c;
}

Complex evaluate_series(std::span<const double> c, Complex zeta) {
    Complex acc = 0.0;
    for (std::size_t j = c.size(); j-- > 0;) acc = acc * zeta + c[j];
    return acc;
}

void History::append(std::span<const double> x) {
    if (x.size() != dim_) throw std::invalid_argument("History::append dimension mismatch");
    data_.insert(data_.end(), x.begin(), x.end());
    ++count_;
}

std::span<const double> History::operator[](std::size_t n) const {
    if (n >= size()) throw std::out_of_range("History index " + std::to_string(n) + " out of range");
    return {data_.data() + n * dim_, dim_};
}

void convolve_step_into(std::span<const double> omega, const History& history, std::size_t n,
                        std::size_t first, std::size_t last, std::span<double> out) {
    if (n > history.size()) throw std::out_of_range("convolve_step: history shorter than n");
    if (n >= omega.size() && n > 0) throw std::out_of_range("convolve_step: not enough weights");
    if (last >= history.dim() || first > last || out.size() != last - first + 1)
        throw std::out_of_range("convolve_step: bad component range");
    const std::size_t dim = history.dim();
    const double* base = history.data().data();
    const std::size_t len = out.size();
    for (std::size_t j = 1; j <= n; ++j) {
        const double w = omega[j];
        const double* x = base + (n - j) * dim + first;
        for (std::size_t i = 0; i < len; ++i) out[i] += w * x[i];
    }
}

std::vector<double> convolve_step(std::span<const double> omega, const History& history, std::size_t n) {
    std::vector<double> out(history.dim(), 0.0);
    if (history.dim() > 0) convolve_step_into(omega, history, n, 0, history.dim() - 1, out);
    return out;
}

FractionalCheck fractional_derivative_check(double nu, double k, std::size_t steps, double t_from) {
    if (!(nu > 0.0 && nu < 1.0)) throw ValidationError("fractional_derivative_check: nu must lie in (0, 1)");
    const CQScheme scheme(k, steps);
    const auto w = weights([nu](Complex s) { return material::principal_power(s, nu); }, scheme);
    const double g = std::tgamma(3.0 - nu);
    FractionalCheck out;
    for (std::size_t n = 0; n <= steps; ++n) {
        double acc = 0.0;
        for (std::size_t j = 0; j <= n; ++j) {
            const double t = static_cast<double>(n - j) * k;
            acc += w[j] * t * t;
        }
        const double t = static_cast<double>(n) * k;
        const double err = std::abs(acc - 2.0 * std::pow(t, 2.0 - nu) / g);
        out.max_error = std::max(out.max_error, err);
        if (t >= t_from - 1e-12 * k) out.max_error_from = std::max(out.max_error_from, err);
        if (n == steps) out.error_at_final = err;
    }
    return out;
}

}  // namespace viscowave::cq
