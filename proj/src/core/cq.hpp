#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace viscowave::cq {

using Complex = std::complex<double>;
using Symbol = std::function<Complex(Complex)>;

/// Trapezoidal convolution quadrature on a uniform grid t_n = n k, n = 0..N.
///
/// Weights are recovered from the generating function f(delta(zeta)/k) by a
/// discrete Cauchy integral on |zeta| = lambda with L = 4(N+1) nodes and
/// lambda = eps^(1/(L+N)). Aliasing (lambda^L) and round-off amplification
/// (lambda^-N) are then both of size eps^(L/(L+N)) = eps^0.8.
class CQScheme {
public:
    CQScheme(double k, std::size_t steps);

    double k() const { return k_; }
    std::size_t steps() const { return n_; }
    double lambda() const { return lambda_; }
    std::size_t contour_points() const { return l_; }

    /// delta(zeta) / k with delta(zeta) = 2 (1 - zeta) / (1 + zeta).
    Complex symbol(Complex zeta) const;
    Complex contour_node(std::size_t m) const;

private:
    double k_;
    std::size_t n_;
    std::size_t l_;
    double lambda_;
};

/// Real weights omega_0..omega_N of f. Throws NumericalError if the imaginary
/// residue exceeds 1e-10 relative to the largest weight.
std::vector<double> weights(const Symbol& f, const CQScheme& scheme);

/// All L contour coefficients, so that sum_{j<L} c_j zeta_m^j = f(symbol(zeta_m))
/// holds exactly (up to FFT round-off) at every node zeta_m. Real parts only.
std::vector<double> contour_coefficients(const Symbol& f, const CQScheme& scheme);

/// Evaluates sum_j c_j zeta^j by Horner.
Complex evaluate_series(std::span<const double> coefficients, Complex zeta);

/// Time-major store of equally sized vectors x^0, x^1, ...
class History {
public:
    explicit History(std::size_t dim) : dim_(dim) {}

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return dim_ == 0 ? count_ : data_.size() / dim_; }
    void reserve(std::size_t steps) { data_.reserve(steps * dim_); }
    void append(std::span<const double> x);
    std::span<const double> operator[](std::size_t n) const;
    const std::vector<double>& data() const { return data_; }

private:
    std::size_t dim_;
    std::size_t count_ = 0;
    std::vector<double> data_;
};

/// Lagged part sum_{j=1}^{n} omega_j x^{n-j}. Needs history steps 0..n-1 and
/// omega_1..omega_n.
std::vector<double> convolve_step(std::span<const double> omega, const History& history, std::size_t n);

/// Same, restricted to components [first, last] of the stored vectors and
/// accumulated into out (length last - first + 1).
void convolve_step_into(std::span<const double> omega, const History& history, std::size_t n,
                        std::size_t first, std::size_t last, std::span<double> out);

struct FractionalCheck {
    /// Over the whole grid; dominated by the start-up layer, O(k^(2-nu)).
    double max_error = 0.0;
    /// Over grid points with t >= t_from; O(k^2) for fixed t_from > 0.
    double max_error_from = 0.0;
    double error_at_final = 0.0;
};

/// Weights of s^nu applied to t^2 sampled on n k, n = 0..N, compared with the
/// Caputo derivative 2 t^(2-nu) / Gamma(3-nu).
FractionalCheck fractional_derivative_check(double nu, double k, std::size_t steps, double t_from = 0.0);

}  // namespace viscowave::cq
