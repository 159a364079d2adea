#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "cq.hpp"
#include "errors.hpp"
#include "material.hpp"

using namespace viscowave;
using namespace viscowave::cq;

namespace {

Symbol power(double nu) {
    return [nu](Complex s) { return material::principal_power(s, nu); };
}

/// sum_{j<=n} omega_j x_{n-j} for every n.
std::vector<double> convolve_all(const std::vector<double>& omega, const std::vector<double>& x) {
    std::vector<double> y(x.size(), 0.0);
    for (std::size_t n = 0; n < x.size(); ++n)
        for (std::size_t j = 0; j <= n; ++j) y[n] += omega[j] * x[n - j];
    return y;
}

}  // namespace

TEST(Scheme, SymbolAndRadius) {
    const CQScheme s(0.25, 100);
    EXPECT_DOUBLE_EQ(s.symbol(0.0).real(), 8.0);
    EXPECT_GT(s.lambda(), 0.0);
    EXPECT_LT(s.lambda(), 1.0);
    EXPECT_EQ(s.contour_points(), 404u);
    for (std::size_t m = 0; m < s.contour_points(); m += 7) EXPECT_GT(s.symbol(s.contour_node(m)).real(), 0.0);
}

TEST(Scheme, RejectsBadArguments) {
    EXPECT_THROW(CQScheme(0.0, 10), ValidationError);
    EXPECT_THROW(CQScheme(-1.0, 10), ValidationError);
    EXPECT_THROW(CQScheme(0.1, 0), ValidationError);
    EXPECT_THROW(CQScheme(NAN, 10), ValidationError);
}

TEST(Weights, Constant) {
    const auto w = weights([](Complex) { return Complex(1.0); }, CQScheme(0.1, 200));
    EXPECT_NEAR(w[0], 1.0, 1e-10);
    for (std::size_t j = 1; j < w.size(); ++j) EXPECT_NEAR(w[j], 0.0, 1e-10);
}

TEST(Weights, Derivative) {
    const auto w = weights([](Complex s) { return s; }, CQScheme(0.1, 200));
    EXPECT_NEAR(w[0], 20.0, 1e-10);
    for (std::size_t j = 1; j < w.size(); ++j) EXPECT_NEAR(w[j], j % 2 ? -40.0 : 40.0, 1e-10) << j;
}

TEST(Weights, Integral) {
    const auto w = weights([](Complex s) { return 1.0 / s; }, CQScheme(1.0, 200));
    EXPECT_NEAR(w[0], 0.5, 1e-10);
    for (std::size_t j = 1; j < w.size(); ++j) EXPECT_NEAR(w[j], 1.0, 1e-10) << j;
}

TEST(Weights, LongSequenceStaysAccurate) {
    const auto w = weights([](Complex s) { return 1.0 / s; }, CQScheme(40.0 / 10240, 10240));
    const double k = 40.0 / 10240;
    double worst = std::abs(w[0] - k / 2);
    for (std::size_t j = 1; j < w.size(); ++j) worst = std::max(worst, std::abs(w[j] - k));
    EXPECT_LT(worst, 1e-10);
}

TEST(Weights, Linearity) {
    const CQScheme sch(0.05, 300);
    const auto f = weights(power(0.3), sch), g = weights([](Complex s) { return 1.0 / (1.0 + s); }, sch);
    const auto h = weights([](Complex s) { return 2.0 * material::principal_power(s, 0.3) - 3.0 / (1.0 + s); }, sch);
    for (std::size_t j = 0; j < h.size(); ++j) EXPECT_NEAR(h[j], 2.0 * f[j] - 3.0 * g[j], 1e-9 * std::abs(f[0]));
}

TEST(Weights, CompositionOfPowers) {
    const double k = 0.01;
    const std::size_t n = 200;
    const CQScheme sch(k, n);
    std::vector<double> x(n + 1);
    for (std::size_t i = 0; i <= n; ++i) x[i] = std::pow(i * k, 3);
    const auto lhs = convolve_all(weights(power(0.4), sch), convolve_all(weights(power(0.6), sch), x));
    const auto rhs = convolve_all(weights([](Complex s) { return s; }, sch), x);
    for (std::size_t i = 0; i <= n; ++i) EXPECT_NEAR(lhs[i], rhs[i], 1e-8) << i;
}

TEST(Weights, ElasticLawIsMemoryless) {
    material::MaterialRegion r;
    r.c0 = 1.75;
    r.c1 = 1.75;
    r.a = 1.0;
    r.kind = material::ModelKind::Zener;
    const auto w = weights([r](Complex s) { return material::eval_transfer_unchecked(r, s); }, CQScheme(0.1, 100));
    EXPECT_NEAR(w[0], 1.75, 1e-10);
    for (std::size_t j = 1; j < w.size(); ++j) EXPECT_NEAR(w[j], 0.0, 1e-10);
}

TEST(Weights, NonRealSymbolIsRejected) {
    EXPECT_THROW(weights([](Complex s) { return Complex(0.0, 1.0) * s; }, CQScheme(0.1, 50)), NumericalError);
}

TEST(Weights, ContourCoefficientsInterpolate) {
    const CQScheme sch(0.1, 40);
    const Symbol f = [](Complex s) { return 1.0 / (1.0 + s); };
    const auto c = contour_coefficients(f, sch);
    ASSERT_EQ(c.size(), sch.contour_points());
    for (std::size_t m = 0; m < sch.contour_points(); m += 13) {
        const Complex z = sch.contour_node(m);
        EXPECT_LT(std::abs(evaluate_series(c, z) - f(sch.symbol(z))), 1e-11);
    }
}

TEST(Convolve, ZeroHistory) {
    History h(3);
    for (int i = 0; i < 4; ++i) h.append(std::vector<double>(3, 0.0));
    const std::vector<double> w{1.0, 2.0, 3.0, 4.0, 5.0};
    for (double v : convolve_step(w, h, 4)) EXPECT_EQ(v, 0.0);
}

TEST(Convolve, ConstantSymbolHasNoMemory) {
    const auto w = weights([](Complex) { return Complex(1.0); }, CQScheme(0.1, 20));
    History h(1);
    for (int i = 0; i < 10; ++i) h.append(std::vector<double>{std::sin(1.0 + i)});
    EXPECT_NEAR(convolve_step(w, h, 10)[0], 0.0, 1e-9);
}

TEST(Convolve, TrapezoidalIdentity) {
    const auto w = weights([](Complex s) { return 1.0 / s; }, CQScheme(1.0, 4));
    History h(1);
    h.append(std::vector<double>{1.0});
    h.append(std::vector<double>{1.0});
    EXPECT_NEAR(convolve_step(w, h, 2)[0], 2.0, 1e-10);
}

TEST(Convolve, RestrictedRangeMatchesFull) {
    History h(5);
    for (int i = 0; i < 6; ++i) {
        std::vector<double> x(5);
        for (int c = 0; c < 5; ++c) x[c] = i * 10 + c;
        h.append(x);
    }
    const std::vector<double> w{9.0, 1.0, -2.0, 0.5, 3.0, 1.5, 7.0};
    const auto full = convolve_step(w, h, 6);
    std::vector<double> part(3, 0.0);
    convolve_step_into(w, h, 6, 1, 3, part);
    for (int c = 0; c < 3; ++c) EXPECT_DOUBLE_EQ(part[c], full[c + 1]);
}

TEST(Convolve, IndexOutOfRange) {
    History h(1);
    h.append(std::vector<double>{1.0});
    const std::vector<double> w{1.0, 1.0, 1.0};
    EXPECT_THROW(convolve_step(w, h, 2), std::out_of_range);
    EXPECT_THROW(convolve_step(std::vector<double>{1.0}, h, 1), std::out_of_range);
}

TEST(Fractional, CaputoValueAtOne) {
    EXPECT_NEAR(2.0 / std::tgamma(2.5), 1.504506, 1e-6);
    const auto r = fractional_derivative_check(0.5, 1.0 / 1024, 1024);
    EXPECT_LT(r.error_at_final, 1e-5);
}

TEST(Fractional, SecondOrderAwayFromOrigin) {
    const auto coarse = fractional_derivative_check(0.5, 1.0 / 200, 200, 0.5);
    const auto fine = fractional_derivative_check(0.5, 1.0 / 400, 400, 0.5);
    EXPECT_NEAR(coarse.max_error_from / fine.max_error_from, 4.0, 0.5);
}

TEST(Fractional, DerivativeLimitIsExact) {
    const double k = 0.01;
    const std::size_t n = 300;
    std::vector<double> x(n + 1);
    for (std::size_t i = 0; i <= n; ++i) x[i] = (i * k) * (i * k);
    const auto d = convolve_all(weights([](Complex s) { return s; }, CQScheme(k, n)), x);
    for (std::size_t i = 0; i <= n; ++i) EXPECT_NEAR(d[i], 2.0 * i * k, 1e-9) << i;
}
