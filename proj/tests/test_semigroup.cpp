#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "errors.hpp"
#include "semigroup.hpp"
#include "support.hpp"

using namespace viscowave;
using namespace viscowave::semigroup;
using material::ModelKind;
using vwtest::region;

namespace {

BoundarySignals quiet() { return {signals::zero(), signals::zero()}; }
BoundarySignals pulse() { return {signals::default_pulse(), signals::zero()}; }

State random_state(const System& sys, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    State st = sys.zero_state();
    for (std::size_t i = 1; i < st.u.size(); ++i) st.u[i] = g(rng);
    for (double& v : st.E) v = g(rng);
    for (double& v : st.S) v = g(rng);
    return st;
}

std::vector<material::CoupledModel> dissipative_models() {
    return {vwtest::table1_zener(2.75), vwtest::single(region(ModelKind::Maxwell, 0.0, 1.0, 0.5)),
            vwtest::single(region(ModelKind::Voigt, 1.5, 2.0, 0.0)),
            vwtest::halves(region(ModelKind::Elastic, 1, 0, 0, 1, 10, 0, 0, "left"),
                           region(ModelKind::Zener, 1.5, 2.75, 0.5, 1, 10, 0, 0, "right"))};
}

}  // namespace

TEST(System, RejectsFractionalLaws) {
    const auto m = vwtest::single(region(ModelKind::FractionalZener, 1.5, 1.75, 0.5, 0.5));
    EXPECT_THROW(System(m, fem::build_mesh(m, 4, 2)), ValidationError);
}

TEST(System, ElasticHasNoRelaxationField) {
    const auto m = vwtest::table1_zener(0.75);
    const System sys(m, fem::build_mesh(m, 4, 2));
    EXPECT_EQ(sys.num_relax(), 0u);
    EXPECT_GT(sys.num_strain(), 0u);
    const auto h = vwtest::halves(region(ModelKind::Elastic, 1, 0, 0), region(ModelKind::Zener, 1.5, 2.75, 0.5));
    const System hs(h, fem::build_mesh(h, 4, 2));
    EXPECT_EQ(hs.num_relax(), hs.num_strain() / 2);
}

TEST(System, DissipativeOnRandomStates) {
    for (const auto& m : dissipative_models()) {
        const System sys(m, fem::build_mesh(m, 6, 3));
        const auto rep = check_dissipativity(sys, 1000, 3);
        EXPECT_TRUE(rep.passed);
        EXPECT_LE(rep.max_form, 1e-12);
        EXPECT_LT(rep.max_identity_error, 1e-10);
    }
}

TEST(System, ElasticGeneratorIsSkew) {
    const auto m = vwtest::elastic_rod(1.5, 2.0);
    const System sys(m, fem::build_mesh(m, 6, 3));
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto st = random_state(sys, seed);
        EXPECT_NEAR(sys.h_inner(sys.apply_generator(st), st), 0.0, 1e-10 * sys.h_inner(st, st));
    }
}

TEST(Step, ContractiveWithoutInput) {
    for (const auto& m : dissipative_models()) {
        System sys(m, fem::build_mesh(m, 6, 3));
        sys.set_step(0.05);
        auto st = random_state(sys, 5);
        double prev = sys.h_norm(st);
        for (int n = 0; n < 200; ++n) {
            sys.step_cn(st, n * 0.05, quiet());
            const double now = sys.h_norm(st);
            EXPECT_LE(now, prev * (1.0 + 1e-12));
            prev = now;
        }
    }
}

TEST(Step, ElasticIsAnIsometry) {
    const auto m = vwtest::table1_zener(0.75);
    System sys(m, fem::build_mesh(m, 6, 3));
    sys.set_step(0.04);
    auto st = random_state(sys, 8);
    const double h0 = sys.h_norm(st);
    for (int n = 0; n < 300; ++n) {
        sys.step_cn(st, n * 0.04, quiet());
        EXPECT_NEAR(sys.h_norm(st), h0, 1e-12 * h0);
    }
}

TEST(Step, NeedsStepSize) {
    const auto m = vwtest::elastic_rod();
    const System sys(m, fem::build_mesh(m, 2, 1));
    auto st = sys.zero_state();
    EXPECT_THROW(sys.step_cn(st, 0.0, quiet()), NumericalError);
}

TEST(Run, ZenerNormDecreasesAfterInputStops) {
    const auto m = vwtest::table1_zener(2.75);
    const auto res = run(m, fem::build_mesh(m, 8, 3), 0.02, 500, pulse());
    for (std::size_t n = 151; n < res.h_norm.size(); ++n) EXPECT_LT(res.h_norm[n], res.h_norm[n - 1]) << n;
}

TEST(Run, ZeroDataGiveZeroPair) {
    const auto m = vwtest::table1_zener(2.75);
    const auto res = run(m, fem::build_mesh(m, 4, 2), 0.05, 40, quiet(), {0.3, 1.0});
    for (double v : res.trajectory.u.data()) EXPECT_EQ(v, 0.0);
    for (const auto& p : res.stress)
        for (double v : p.values) EXPECT_EQ(v, 0.0);
}

TEST(Run, VoigtStressFormula) {
    const auto m = vwtest::single(region(ModelKind::Voigt, 1.5, 2.0, 0.0));
    const double k = 0.02, x = 0.37;
    const auto res = run(m, fem::build_mesh(m, 8, 3), k, 200, pulse(), {x});
    const auto& traj = res.trajectory;
    const auto& sp = res.stress[0];
    double scale = 0.0;
    for (double v : sp.values) scale = std::max(scale, std::abs(v));
    ASSERT_GT(scale, 0.0);
    for (std::size_t n = 0; n < sp.values.size(); ++n) {
        const double a = fem::interpolate_derivative(traj.mesh, traj.u[n], x);
        const double b = fem::interpolate_derivative(traj.mesh, traj.u[n + 1], x);
        EXPECT_NEAR(sp.values[n], 1.5 * 0.5 * (a + b) + 2.0 * (b - a) / k, 1e-10 * scale) << n;
    }
}

TEST(Run, ZenerStressSatisfiesTheLaw) {
    const auto m = vwtest::table1_zener(2.75);
    const double x = 0.37, T = 4.0;
    std::vector<double> residual;
    for (std::size_t steps : {200, 400, 800}) {
        const double k = T / steps;
        const auto res = run(m, fem::build_mesh(m, 8, 3), k, steps, pulse(), {x});
        const auto& s = res.stress[0].values;
        std::vector<double> ux(res.trajectory.u.size());
        for (std::size_t n = 0; n < ux.size(); ++n)
            ux[n] = fem::interpolate_derivative(res.trajectory.mesh, res.trajectory.u[n], x);
        double worst = 0.0;
        for (std::size_t n = 1; n + 1 < ux.size(); ++n) {
            const double sigma = 0.5 * (s[n - 1] + s[n]);
            const double rate = (s[n] - s[n - 1]) / k;
            const double rhs = 1.5 * ux[n] + 2.75 * (ux[n + 1] - ux[n - 1]) / (2.0 * k);
            worst = std::max(worst, std::abs(sigma + 0.5 * rate - rhs));
        }
        residual.push_back(worst);
    }
    EXPECT_NEAR(std::log2(residual[0] / residual[1]), 2.0, 0.3);
    EXPECT_NEAR(std::log2(residual[1] / residual[2]), 2.0, 0.3);
}

TEST(CrossValidate, ElasticSchemesAgreeAtSecondOrder) {
    const auto m = vwtest::elastic_rod(1.5);
    const auto cv = cross_validate(m, fem::build_mesh(m, 8, 3), 4.0, {100, 200, 400}, pulse(), {0.5, 1.0});
    ASSERT_EQ(cv.order.size(), 2u);
    for (double o : cv.order) EXPECT_NEAR(o, 2.0, 0.2);
}

TEST(CrossValidate, ZeroDataAgreeExactly) {
    const auto m = vwtest::table1_zener(2.75);
    const auto cv = cross_validate(m, fem::build_mesh(m, 4, 2), 2.0, {40}, quiet(), {1.0});
    EXPECT_EQ(cv.discrepancy[0], 0.0);
}
