#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <string>

#include "errors.hpp"
#include "scenarios.hpp"
#include "support.hpp"
#include "timestepper_cq.hpp"

using namespace viscowave;
using namespace viscowave::timestepper_cq;
using material::ModelKind;
using vwtest::region;

namespace {

BoundarySignals pulse() { return {signals::default_pulse(), signals::zero()}; }

Trajectory solve(const material::CoupledModel& m, int epu, int p, double T, std::size_t n,
                 const BoundarySignals& bc, const VolumeForce& f = {}) {
    return run(m, fem::build_mesh(m, epu, p), cq::CQScheme(T / n, n), bc, f);
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

TEST(Run, ZeroDataGiveZeroTrajectory) {
    const auto m = vwtest::table1_zener(2.75);
    const auto traj = solve(m, 8, 2, 5.0, 100, {signals::zero(), signals::zero()});
    ASSERT_EQ(traj.steps(), 100u);
    for (double v : traj.u.data()) EXPECT_EQ(v, 0.0);
}

TEST(Run, ElasticEnergyIsConservedAfterThePulse) {
    const auto m = vwtest::table1_zener(0.75);
    const auto traj = solve(m, 16, 3, 12.0, 1200, pulse());
    const auto e = discrete_energy(traj, m);
    const std::size_t from = 301;  // t > 3
    ASSERT_GT(e[from], 0.0);
    for (std::size_t n = from; n < e.size(); ++n) EXPECT_NEAR(e[n], e[from], 1e-10 * e[from]) << n;
}

TEST(Run, LargerDiffusionDampsFaster) {
    double prev = INFINITY;
    for (double c1 : {1.0, 2.75}) {
        const auto m = vwtest::table1_zener(c1);
        const auto traj = solve(m, 16, 3, 20.0, 1600, {signals::default_dirichlet(), signals::zero()});
        const double metric = scenarios::dissipation_metric(probe(traj, 1.0), traj.k, 10.0, 20.0);
        EXPECT_LT(metric, prev) << c1;
        prev = metric;
    }
}

TEST(Run, DirichletValueIsInjected) {
    const auto traj = solve(vwtest::table1_zener(2.75), 8, 2, 4.0, 200, pulse());
    const auto s = signals::default_pulse();
    for (std::size_t n = 0; n <= traj.steps(); ++n) EXPECT_EQ(traj.u[n][0], s.value(traj.time(n)));
}

TEST(Run, IsCausal) {
    const auto m = vwtest::single(region(ModelKind::FractionalZener, 1.5, 1.75, 0.5, 0.5));
    const auto mesh = fem::build_mesh(m, 8, 2);
    const cq::CQScheme sch(0.02, 300);
    const auto a = run(m, mesh, sch, pulse());
    BoundarySignals late = pulse();
    late.neumann = signals::window(4.0, 4.5, 5.0, 5.5);
    const auto b = run(m, mesh, sch, late);
    for (std::size_t n = 0; n <= 200; ++n)
        for (std::size_t i = 0; i < mesh.num_dofs(); ++i) ASSERT_EQ(a.u[n][i], b.u[n][i]) << n;
    EXPECT_NE(a.u[300][mesh.num_dofs() - 1], b.u[300][mesh.num_dofs() - 1]);
}

TEST(Run, IsLinearInTheData) {
    const auto m = vwtest::single(region(ModelKind::FractionalMaxwell, 0.0, 1.0, 1.0, 0.4));
    const auto mesh = fem::build_mesh(m, 8, 2);
    const cq::CQScheme sch(0.02, 200);
    const auto a = run(m, mesh, sch, pulse());
    BoundarySignals scaled = pulse();
    scaled.dirichlet.amplitude = -3.0;
    const auto b = run(m, mesh, sch, scaled);
    const double scale = max_abs(a.u.data());
    for (std::size_t i = 0; i < a.u.data().size(); ++i)
        EXPECT_NEAR(b.u.data()[i], -3.0 * a.u.data()[i], 1e-12 * scale);
}

TEST(Run, SecondOrderInTime) {
    const auto m = vwtest::table1_zener(2.75);
    std::vector<std::vector<double>> series;
    for (std::size_t n : {400, 800, 1600}) series.push_back(probe(solve(m, 8, 4, 6.0, n, pulse()), 1.0));
    auto diff = [](const std::vector<double>& c, const std::vector<double>& f) {
        double d = 0.0;
        for (std::size_t i = 0; i < c.size(); ++i) d = std::max(d, std::abs(c[i] - f[2 * i]));
        return d;
    };
    const double ratio = diff(series[0], series[1]) / diff(series[1], series[2]);
    EXPECT_NEAR(ratio, 4.0, 0.5);
}

TEST(Run, ManufacturedVolumeForce) {
    constexpr double w = std::numbers::pi / 2.0;
    const auto exact = [](double x, double t) { return std::sin(w * x) * std::pow(t, 4); };
    const VolumeForce f = [](double x, double t) { return std::sin(w * x) * (12.0 * t * t + w * w * std::pow(t, 4)); };
    const auto m = vwtest::elastic_rod();
    std::vector<double> err;
    for (std::size_t n : {50, 100, 200}) {
        const auto traj = solve(m, 8, 4, 1.0, n, {signals::zero(), signals::zero()}, f);
        double e = 0.0;
        for (double x : {0.25, 0.5, 1.0}) e = std::max(e, std::abs(probe(traj, x).back() - exact(x, 1.0)));
        err.push_back(e);
    }
    EXPECT_LT(err.back(), 1e-4);
    EXPECT_NEAR(err[0] / err[1], 4.0, 0.5);
    EXPECT_NEAR(err[1] / err[2], 4.0, 0.5);
}

TEST(Run, NonFiniteDataReportTheStep) {
    const auto m = vwtest::elastic_rod();
    const VolumeForce f = [](double, double t) { return t > 0.5 ? NAN : 0.0; };
    try {
        solve(m, 4, 1, 1.0, 10, {signals::zero(), signals::zero()}, f);
        FAIL() << "expected NumericalError";
    } catch (const NumericalError& e) {
        EXPECT_NE(std::string(e.what()).find("step 6"), std::string::npos) << e.what();
    }
}

TEST(Run, RecursiveRelaxationMatchesStoredWeights) {
    for (const auto& reg : {region(ModelKind::Zener, 1.5, 2.75, 0.5), region(ModelKind::Maxwell, 0.0, 1.0, 0.5)}) {
        const auto m = vwtest::single(reg);
        const auto mesh = fem::build_mesh(m, 8, 3);
        const cq::CQScheme sch(0.025, 400);
        auto sys = build(m, mesh, sch);
        const auto fast = run(sys, pulse());
        auto& rw = sys.region_weights[0];
        EXPECT_NE(rw.relax, 0.0);
        rw = RegionWeights{};
        rw.lagged = cq::weights(stiffness_symbol(reg), sch);
        rw.implicit = rw.lagged[0];
        EXPECT_NEAR(rw.implicit, region_weights(reg, sch).implicit, 1e-10);
        const auto slow = run(sys, pulse());
        const double scale = max_abs(slow.u.data());
        for (std::size_t i = 0; i < slow.u.data().size(); ++i)
            ASSERT_NEAR(fast.u.data()[i], slow.u.data()[i], 1e-8 * scale) << i;
    }
}

TEST(Probe, NodesAndMidElement) {
    const auto m = vwtest::elastic_rod();
    Trajectory traj;
    traj.mesh = fem::build_mesh(m, 4, 2);
    traj.k = 0.1;
    traj.u = cq::History(traj.mesh.num_dofs());
    for (int n = 0; n < 3; ++n) {
        std::vector<double> u(traj.mesh.num_dofs());
        for (std::size_t i = 0; i < u.size(); ++i) u[i] = n * (1.0 + 2.0 * traj.mesh.dof_position(i));
        traj.u.append(u);
    }
    const auto at_node = probe(traj, 0.5);
    const auto mid = probe(traj, 0.3);
    for (int n = 0; n < 3; ++n) {
        EXPECT_EQ(at_node[n], traj.u[n][4]);
        EXPECT_NEAR(mid[n], n * 1.6, 1e-14);
    }
    EXPECT_THROW(probe(traj, 1.01), ValidationError);
}

TEST(Stress, ElasticIsMemoryless) {
    const auto m = vwtest::elastic_rod(1.5);
    const auto traj = solve(m, 8, 2, 3.0, 60, pulse());
    const auto s = stress_trace(traj, m, 0, 0.3);
    for (std::size_t n = 0; n < s.size(); ++n)
        EXPECT_DOUBLE_EQ(s[n], 1.5 * fem::interpolate_derivative(traj.mesh, traj.u[n], 0.3));
}

TEST(Stress, ZeroTrajectory) {
    const auto m = vwtest::table1_zener(2.75);
    const auto traj = solve(m, 4, 2, 2.0, 40, {signals::zero(), signals::zero()});
    for (double v : stress_trace(traj, m, 0, 0.5)) EXPECT_EQ(v, 0.0);
    EXPECT_THROW(stress_trace(traj, m, 1, 0.5), ValidationError);
}

TEST(Stress, VoigtMatchesCentredDifferences) {
    const auto m = vwtest::single(region(ModelKind::Voigt, 1.5, 2.0, 0.0));
    std::vector<double> err;
    for (std::size_t n : {200, 400, 800}) {
        const auto traj = solve(m, 8, 3, 4.0, n, pulse());
        const auto s = stress_trace(traj, m, 0, 0.4);
        std::vector<double> ux(traj.u.size());
        for (std::size_t i = 0; i < ux.size(); ++i) ux[i] = fem::interpolate_derivative(traj.mesh, traj.u[i], 0.4);
        double e = 0.0;
        for (std::size_t i = 1; i + 1 < ux.size(); ++i)
            e = std::max(e, std::abs(s[i] - (1.5 * ux[i] + 2.0 * (ux[i + 1] - ux[i - 1]) / (2 * traj.k))));
        err.push_back(e);
    }
    EXPECT_GT(err[0] / err[1], 3.0);
    EXPECT_GT(err[1] / err[2], 3.0);
}
