#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "plancherel/pvlimits.hpp"

using namespace plancherel;
using std::numbers::pi;

namespace {

// e^{z^2} erfc(z)
double scaled_erfc(double z) { return std::exp(z * z) * std::erfc(z); }

// int_R e^{-a t^2} / (i t + c) dt for c > 0, from 1/(it + c) = int_0^inf e^{-u(c + it)} du
// and the Fourier transform of the Gaussian.
double shifted_gaussian(double a, double c) { return pi * scaled_erfc(std::sqrt(a) * c); }

// s * int_R phi(t, -t) / ((i t/h1 + s)(-i t/h2 + s)) dt for phi = exp(-|t|^2), by partial fractions.
double two_point(double h1, double h2, double s) {
    return h1 * h2 / (h1 + h2) * (shifted_gaussian(2, h1 * s) + shifted_gaussian(2, h2 * s));
}

TestFunction odd_line() {
    TestFunction f(1);
    f.add_term(1.0, MultiPoly::variable(1, 0), {1.0});
    return f;
}

// A non-radial test function on R^dim, before symmetrization.
TestFunction lopsided(std::size_t dim) {
    TestFunction f(dim);
    std::vector<std::pair<std::vector<unsigned>, mpq_class>> terms;
    std::vector<unsigned> e(dim, 0);
    terms.push_back({e, 1});
    e[0] = 2;
    terms.push_back({e, mpq_class(1, 2)});
    if (dim > 1) {
        e[0] = 1;
        e[1] = 1;
        terms.push_back({e, mpq_class(1, 3)});
    }
    std::vector<double> w(dim);
    for (std::size_t i = 0; i < dim; ++i)
        w[i] = 0.8 + 0.3 * static_cast<double>(i);
    f.add_term({1.0, 0.2}, MultiPoly::from_exponents(dim, terms), w);
    return f;
}

SpectralConfig make(std::vector<SpectralConfig::PSBlock> ps, std::vector<SpectralConfig::QTBlock> qt,
                    std::vector<SpectralConfig::RUBlock> ru) {
    SpectralConfig c;
    c.ps = std::move(ps);
    c.qt = std::move(qt);
    c.ru = std::move(ru);
    return c;
}

} // namespace

TEST(Extrapolate, RecoversModelCoefficients) {
    const auto s = default_s_grid();
    std::vector<cplx> v;
    for (double x : s)
        v.push_back(cplx(2, -1) + 3.0 * x + cplx(0, 5) * x * std::log(1 / x) - 7.0 * x * x);
    const auto e = extrapolate(s, v);
    EXPECT_NEAR(std::abs(e.value - cplx(2, -1)), 0, 1e-10);
    EXPECT_NEAR(std::abs(e.coefficients[2] - cplx(0, 5)), 0, 1e-7);
    EXPECT_LT(e.residual, 1e-12);
}

TEST(Extrapolate, RejectsBadGrids) {
    std::vector<cplx> v(6, 1.0);
    EXPECT_THROW(extrapolate({0.1, 0.1, 0.05, 0.02, 0.01, 0.005}, v), std::invalid_argument);
    EXPECT_THROW(extrapolate({0.1, 0.2, 0.05, 0.02, 0.01, 0.005}, v), std::invalid_argument);
    EXPECT_THROW(extrapolate({0.1, 0.05, 0.02, 0.01, -0.005, -0.01}, v), std::invalid_argument);
    EXPECT_THROW(extrapolate({0.1, 0.05, 0.02}, {1.0, 1.0, 1.0}), std::invalid_argument);
}

TEST(OneDimensional, ShiftedIntegralMatchesLaplaceOracle) {
    const auto g = TestFunction::gaussian(1);
    for (double s : {1.0, 0.1, 0.01, 1e-4})
        EXPECT_NEAR(std::abs(shifted_integral(g, s) - shifted_gaussian(1, s)), 0, 1e-8 * pi) << s;
}

TEST(OneDimensional, ShiftedIntegralTendsToPVPlusPiPhiZero) {
    const auto g = TestFunction::gaussian(1, 0.7);
    const cplx limit = pv_integral(g) + pi * g.at_origin();
    EXPECT_NEAR(std::abs(shifted_integral(g, 1e-6) - limit), 0, 1e-5);
    const auto f = odd_line();
    EXPECT_NEAR(std::abs(shifted_integral(f, 1e-6) - pv_integral(f)), 0, 1e-5);
}

TEST(OneDimensional, PrincipalValues) {
    EXPECT_NEAR(std::abs(pv_integral(odd_line()) - cplx(0, -std::sqrt(pi))), 0, 1e-10);
    EXPECT_EQ(pv_integral(TestFunction::gaussian(1, 2.5)), cplx(0));
    EXPECT_THROW(pv_integral(TestFunction::gaussian(2)), std::invalid_argument);
}

TEST(PVLimit, TwoPointsMatchPartialFractionOracle) {
    const std::vector<double> h{1.0, 1.7};
    const auto r = pv_limit_check(h, TestFunction::gaussian(2));
    for (std::size_t i = 0; i < r.s_grid.size(); ++i)
        EXPECT_NEAR(std::abs(r.samples[i] - two_point(1.0, 1.7, r.s_grid[i])), 0, 1e-6 * std::abs(r.target));
    EXPECT_LT(r.rel_err, 1e-5);
}

TEST(PVLimit, ThreePoints) {
    const auto r = pv_limit_check({1.0, 1.7, 2.4}, TestFunction::gaussian(3));
    EXPECT_NEAR(r.target.real(), 1.0 * 1.7 * 2.4 / 5.1 * 4 * pi * pi, 1e-12);
    EXPECT_LT(r.rel_err, 1e-4);
}

TEST(PVLimit, SymmetricInWeights) {
    const auto phi = TestFunction::gaussian(3, 0.9);
    const std::vector<double> grid{0.05, 0.025, 0.0125, 0.00625, 0.003125};
    const auto a = pv_limit_check({1.0, 1.7, 2.4}, phi, grid);
    const auto b = pv_limit_check({2.4, 1.0, 1.7}, phi, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
        EXPECT_NEAR(std::abs(a.samples[i] - b.samples[i]), 0, 1e-5 * std::abs(a.samples[i]));
}

TEST(PVLimit, CoarseGridMissesTolerance) {
    const auto r = pv_limit_check({1.0, 1.7, 2.4}, TestFunction::gaussian(3), coarse_s_grid());
    EXPECT_GT(r.rel_err, 1e-3);
}

TEST(PVLimit, Caps) {
    EXPECT_THROW(pv_limit_check({1, 1, 1, 1, 1}, TestFunction::gaussian(5)), cap_error);
    EXPECT_THROW(pv_limit_check({1, 0}, TestFunction::gaussian(2)), std::invalid_argument);
    EXPECT_THROW(pv_limit_check({1, 1}, TestFunction::gaussian(3)), std::invalid_argument);
}

TEST(PVLimit, JobsDoNotChangeSamples) {
    const auto phi = TestFunction::gaussian(3);
    NumericOptions one, three;
    three.jobs = 3;
    const auto a = pv_limit_check({1.0, 1.3, 2.0}, phi, default_s_grid(), one);
    const auto b = pv_limit_check({1.0, 1.3, 2.0}, phi, default_s_grid(), three);
    EXPECT_EQ(a.samples, b.samples);
}

TEST(Config, DerivedConstants) {
    const auto a = make({}, {{2, 1}}, {}).derive();
    EXPECT_EQ(a.W / a.Wprime, 1u);
    const auto b = make({{2, 2, 1}}, {}, {}).derive();
    EXPECT_EQ(b.W, 4u);
    EXPECT_EQ(b.Wprime, 2u);
    const auto c = make({{2, 1, 3}}, {{3, 2}}, {{3, 5}}).derive();
    EXPECT_EQ(c.S, 9u);
    EXPECT_EQ(c.n, 9u + 6 + 15);
    EXPECT_EQ(c.N, 1u + 1 + 2);
    EXPECT_EQ(c.c, 1u);
    EXPECT_DOUBLE_EQ(c.D, 3.0 * std::pow(2.0, 1.5) * 25.0);
    EXPECT_EQ(c.W, 2u * 6 * 6);
    EXPECT_EQ(c.Wprime, 1u * 2 * 2);
}

TEST(Config, Validation) {
    EXPECT_THROW(make({}, {}, {}).derive(), std::invalid_argument);
    EXPECT_THROW(make({{1, 2, 1}}, {}, {}).derive(), std::invalid_argument);
    EXPECT_THROW(make({{1, 1, 0}}, {}, {}).derive(), std::invalid_argument);
    EXPECT_THROW(make({}, {{0, 1}}, {}).derive(), std::invalid_argument);
}

TEST(Config, GroupSizeAndInvariance) {
    const auto cfg = make({{2, 1, 1}}, {{2, 1}}, {});
    EXPECT_EQ(cfg.group().size(), 4u);
    const auto phi = symmetrize(cfg, lopsided(5));
    const std::vector<double> t{0.3, -0.2, 0.5, 0.1, -0.7};
    for (const auto& w : cfg.group()) {
        std::vector<double> u(5);
        for (std::size_t i = 0; i < 5; ++i)
            u[i] = t[w[i]];
        EXPECT_NEAR(std::abs(phi(u) - phi(t)), 0, 1e-14);
    }
    EXPECT_THROW(make({}, {}, {{5, 1}, {5, 1}}).group(1000), cap_error);
}

TEST(Ds, SinglePairIsExactlyOneOverS) {
    const auto cfg = make({{1, 1, 1}}, {}, {});
    const auto phi = TestFunction::gaussian(2);
    for (double s : {0.3, 0.01})
        EXPECT_NEAR(std::abs(s * eval_Ds(cfg, phi, s) - std::sqrt(pi / 2)), 0, 1e-9);
}

TEST(Ds, PointIsPhiAtOrigin) {
    const auto cfg = make({}, {}, {{1, 1}});
    const auto phi = TestFunction::gaussian(1);
    EXPECT_NEAR(std::abs(0.2 * eval_Ds(cfg, phi, 0.2) - 1.0), 0, 1e-14);
}

TEST(Ds, Caps) {
    EXPECT_THROW(eval_Ds(make({}, {{5, 1}}, {}), TestFunction::gaussian(5), 0.1), cap_error);
    EXPECT_THROW(eval_Ds(make({}, {{2, 1}}, {}), TestFunction::gaussian(3), 0.1), std::invalid_argument);
    EXPECT_THROW(eval_Ds(make({}, {{2, 1}}, {}), TestFunction::gaussian(2), 0.0), std::invalid_argument);
}

TEST(Dprime, HandValues) {
    // int_R exp(-2 t^2) dt with prefactor (1/2)(2 pi)^0 2^1
    EXPECT_NEAR(std::abs(eval_Dprime(make({{1, 1, 1}}, {}, {}), TestFunction::gaussian(2)).value -
                         std::sqrt(pi / 2)),
                0, 1e-14);
    const auto p = eval_Dprime(make({}, {}, {{1, 1}}), TestFunction::gaussian(1));
    EXPECT_EQ(p.dim, 0u);
    EXPECT_NEAR(std::abs(p.value - 1.0), 0, 1e-14);
}

struct ResidualCase {
    SpectralConfig cfg;
    bool lopsided_phi;
};

class Residual : public ::testing::TestWithParam<ResidualCase> {};

TEST_P(Residual, ExtrapolationMatchesClosedForm) {
    const auto& c = GetParam();
    const auto S = c.cfg.derive().S;
    const auto phi = c.lopsided_phi ? symmetrize(c.cfg, lopsided(S)) : TestFunction::gaussian(S);
    const auto r = verify_residual(c.cfg, phi);
    EXPECT_EQ(r.branch, c.cfg.nonzero_branch() ? "nonzero" : "zero");
    EXPECT_TRUE(r.pass) << c.cfg.label() << " error " << r.error;
    EXPECT_LT(r.error, 1e-4);
}

INSTANTIATE_TEST_SUITE_P(Configs, Residual,
                         ::testing::Values(ResidualCase{make({{1, 1, 2}}, {}, {}), true},
                                           ResidualCase{make({}, {{2, 3}}, {}), true},
                                           ResidualCase{make({}, {}, {{2, 2}}), true},
                                           ResidualCase{make({}, {}, {{3, 2}}), true},
                                           ResidualCase{make({{1, 1, 1}}, {}, {{1, 2}}), true},
                                           ResidualCase{make({}, {{2, 1}}, {{1, 1}}), true},
                                           ResidualCase{make({{2, 1, 1}}, {}, {}), true},
                                           ResidualCase{make({}, {{3, 1}}, {}), false},
                                           ResidualCase{make({}, {{1, 1}}, {}), false},
                                           ResidualCase{make({{1, 0, 1}}, {}, {}), false}));
