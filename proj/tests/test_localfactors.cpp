#include <gtest/gtest.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_sf_gamma.h>

#include <cmath>
#include <numbers>
#include <random>

#include "plancherel/localfactors.hpp"

using namespace plancherel;
using namespace plancherel::local;
using std::numbers::pi;

namespace {

const cplx I(0, 1);

// Adaptive Gauss-Kronrod from GSL, for the oracles below.
template <class F>
double gsl_integral(F&& f, double a, double b) {
    gsl_integration_workspace* w = gsl_integration_workspace_alloc(2000);
    gsl_function g;
    g.function = [](double x, void* p) { return (*static_cast<F*>(p))(x); };
    g.params = &f;
    double r = 0, err = 0;
    gsl_integration_qags(&g, a, b, 1e-13, 1e-11, 2000, w, &r, &err);
    gsl_integration_workspace_free(w);
    return r;
}

template <class F>
cplx complex_integral(F&& f, double a, double b) {
    return {gsl_integral([&](double x) { return f(x).real(); }, a, b),
            gsl_integral([&](double x) { return f(x).imag(); }, a, b)};
}

// gamma(s, sign^delta |.|^u, psi) on R from Tate's local functional equation
// Z(f^, chi^{-1}, 1 - s) = gamma Z(f, chi, s) with f = x^delta exp(-pi x^2) and
// f^(y) = int f(x) psi(x y) dx, psi(x) = exp(2 pi i a x), all integrals numeric.
cplx tate_oracle(int delta, cplx u, int a, double s) {
    auto f = [&](double x) { return std::pow(x, delta) * std::exp(-pi * x * x); };
    auto fhat = [&](double y) {
        return complex_integral([&](double x) { return f(x) * std::exp(I * (2 * pi * a * x * y)); }, -7, 7);
    };
    // int_{R^x} g(x) sign^d |x|^{z - 1} dx, with x = w^2 on each half line
    auto zeta_int = [&](auto&& g, int d, cplx z) {
        return complex_integral(
            [&](double w) {
                const double x = w * w;
                const cplx m = 2.0 * w * std::pow(cplx(x), z - 1.0);
                return (g(x) + (d ? -1.0 : 1.0) * g(-x)) * m;
            },
            1e-12, 3.0);
    };
    const cplx lhs = zeta_int([&](double y) { return fhat(y); }, delta, 1.0 - s - u);
    const cplx rhs = zeta_int([&](double x) { return cplx(f(x)); }, delta, s + u);
    return lhs / rhs;
}

std::vector<FieldData> padic_fields() {
    std::vector<FieldData> v;
    for (unsigned q : {2u, 3u, 5u, 9u})
        for (int d : {0, 1, 2})
            v.push_back(FieldData::padic(q, Extension::unramified, d));
    FieldData r = FieldData::padic(3, Extension::ramified, 1);
    r.eta_epsilon = EpsilonMonomial{Root::unit(mpq_class(1, 4)), 1};
    v.push_back(r);
    return v;
}

std::vector<CharData> padic_catalogue() {
    std::vector<CharData> v{CharData::trivial(), CharData::eta_char(), CharData::on_F(0, 0.25),
                            CharData::on_F(1, 0), CharData::on_E(0, 0, 0.5), CharData::on_E(0, -1, 0)};
    CharData t = CharData::on_E(0, 0, 0.125);
    t.turn = mpq_class(1, 3);
    v.push_back(t);
    CharData e = CharData::eta_char();
    e.u_im = mpq_class(3, 8);
    v.push_back(e);
    return v;
}

std::vector<CharData> arch_catalogue() {
    return {CharData::trivial(),         CharData::real_char(1),        CharData::real_char(0, 0, 1.3),
            CharData::real_char(1, 0, -0.4), CharData::on_E(0),          CharData::on_E(1, 0, 0.2),
            CharData::on_E(-3),          CharData::on_E(4, 0, -2.5),   CharData::eta_char()};
}

} // namespace

TEST(Zeta, Values) {
    EXPECT_NEAR(std::abs(zeta(FieldData::padic(3))(1.0) - 1.5), 0, 1e-14);
    EXPECT_NEAR(std::abs(zeta(FieldData::real())(2.0) - 1 / pi), 0, 1e-14);
    for (const auto& f : {FieldData::padic(2), FieldData::padic(7), FieldData::real()})
        EXPECT_NEAR(std::abs(1e-7 * f.log_q() * zeta(f)(1e-7) - 1.0), 0, 1e-6) << f.label();
}

TEST(TateGamma, DisplayedPadicFormulas) {
    const auto f = FieldData::padic(3);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> d(-2, 2);
    for (int i = 0; i < 10; ++i) {
        const cplx s(d(rng), d(rng));
        const cplx T = std::pow(3.0, -s);
        EXPECT_NEAR(std::abs(tate_gamma(CharData::trivial(), f)(s) - (1.0 - T) / (1.0 - 1.0 / (3.0 * T))), 0, 1e-12);
        EXPECT_NEAR(std::abs(tate_gamma(CharData::eta_char(), f)(s) - (1.0 + T) / (1.0 + 1.0 / (3.0 * T))), 0, 1e-12);
    }
}

TEST(TateGamma, StarValues) {
    const auto p3 = FieldData::padic(3);
    auto t = tate_gamma(CharData::trivial(), p3).star_zero();
    EXPECT_EQ(t.order, 1);
    EXPECT_EQ(*t.exact, mpq_class(3, 2));
    auto e = tate_gamma(CharData::eta_char(), p3).star_zero();
    EXPECT_EQ(e.order, 0);
    EXPECT_EQ(*e.exact, mpq_class(3, 2));
    auto r = tate_gamma(CharData::real_char(1), FieldData::real()).star_zero();
    EXPECT_EQ(r.order, 0);
    EXPECT_NEAR(std::abs(r.value - cplx(0, -1 / pi)), 0, 1e-15);
    auto one = tate_gamma(CharData::trivial(), FieldData::real()).star_zero();
    EXPECT_EQ(one.order, 1);
    EXPECT_NEAR(std::abs(one.value - 1.0), 0, 1e-15);
}

TEST(TateGamma, TrivialStarIsInverseOfOneMinusQInverse) {
    for (unsigned q : {2u, 3u, 5u}) {
        const auto z = tate_gamma(CharData::trivial(), FieldData::padic(q)).star_zero();
        EXPECT_EQ(z.order, 1);
        ASSERT_TRUE(z.exact);
        EXPECT_EQ(*z.exact, mpq_class(1) / (1 - mpq_class(1, q)));
    }
}

TEST(TateGamma, RealEpsilonMatchesLocalFunctionalEquation) {
    for (int a : {-1, 1})
        for (int delta : {0, 1})
            for (cplx u : {cplx(0), cplx(0, 0.3)}) {
                const auto f = FieldData::real(a);
                const cplx g = tate_gamma(CharData::real_char(delta, u.real(), u.imag()), f)(0.5);
                EXPECT_NEAR(std::abs(g - tate_oracle(delta, u, a, 0.5)), 0, 1e-7)
                    << "psi sign " << a << " delta " << delta << " u " << u;
            }
}

TEST(TateGamma, FunctionalEquationPadicExact) {
    for (const auto& f : padic_fields())
        for (const auto& chi : padic_catalogue()) {
            if (chi.base == CharData::Base::E && f.ext == Extension::ramified && chi.turn != 0)
                continue;
            const auto g = tate_gamma(chi, f) * tate_gamma(chi.inverse(), f, true).reflected();
            EXPECT_TRUE(g.is_identity()) << f.label() << " " << chi.label() << ": " << g.to_string();
        }
}

TEST(TateGamma, FunctionalEquationPadicAtRandomRationalPoints) {
    // T -> q^{-1}/T is s -> 1 - s; evaluated exactly without the symbolic reflection
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<long> num(-40, 40), den(1, 40);
    for (unsigned q : {2u, 3u, 5u})
        for (const auto& chi : {CharData::trivial(), CharData::eta_char(), CharData::on_F(2, 0), CharData::on_E(0, 1, 0)}) {
            const auto f = FieldData::padic(q);
            const auto g = tate_gamma(chi, f), h = tate_gamma(chi.inverse(), f, true);
            int done = 0;
            while (done < 20) {
                const mpq_class T(num(rng), den(rng));
                if (T == 0)
                    continue;
                try {
                    const auto a = g.exact_at_T(T), b = h.exact_at_T(mpq_class(1) / (q * T));
                    ASSERT_TRUE(a && b);
                    EXPECT_EQ(*a * *b, 1) << chi.label() << " T=" << T.get_str();
                    ++done;
                } catch (const pole_error&) {
                }
            }
        }
}

TEST(TateGamma, FunctionalEquationArchimedean) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> d(-3, 3);
    for (int a : {-1, 1})
        for (const auto& chi : arch_catalogue())
            for (int i = 0; i < 20; ++i) {
                const cplx s(d(rng) + 0.5, d(rng));
                const auto f = FieldData::real(a);
                const cplx v = tate_gamma(chi, f)(s) * tate_gamma(chi.inverse(), f, true)(1.0 - s);
                EXPECT_NEAR(std::abs(v - 1.0), 0, 1e-10) << chi.label() << " s=" << s;
            }
}

TEST(TateGamma, NoZeroInRightHalfNoPoleInLeft) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> re(0.01, 0.99), im(-20, 20);
    auto check = [&](const GammaFactor& g) {
        for (int i = 0; i < 100; ++i) {
            const cplx s(re(rng), im(rng));
            const cplx z = g(s), p = g(cplx(-s.real(), s.imag()));
            EXPECT_GT(std::abs(z), 1e-300);
            EXPECT_TRUE(std::isfinite(std::abs(p)));
        }
    };
    for (const auto& chi : arch_catalogue())
        check(tate_gamma(chi, FieldData::real()));
    for (const auto& chi : {CharData::trivial(), CharData::eta_char(), CharData::on_F(0, 0.7), CharData::on_E(0, 0, 0.3)})
        check(tate_gamma(chi, FieldData::padic(5)));
}

TEST(TateGamma, PolynomialGrowthOfStarValues) {
    // log|gamma*(0, |.|^{iy})| against log y over 1 <= y <= 100
    for (const auto& make : {+[](double y) { return CharData::on_F(0, y); }, +[](double y) { return CharData::on_E(0, 0, y); }}) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int n = 0;
        for (double y = 1; y <= 100; y *= 1.25, ++n) {
            const double lx = std::log(y), ly = std::log(std::abs(tate_gamma(make(y), FieldData::real()).star_zero().value));
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
        }
        const double k = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        EXPECT_TRUE(std::isfinite(k));
        EXPECT_GT(k, 0.0);
        EXPECT_LT(k, 2.0);
    }
}

TEST(TateGamma, ComplexCharactersMatchInducedParameters) {
    // gamma(s, chi, psi'_C) = lambda^{-1} gamma(s, Ind chi, psi'). For weight 0, Ind chi =
    // |.|^u + sign |.|^u; otherwise L = Gamma_C(s + u + |k|/2), eps = (i a)^{|k|+1}.
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> d(-2, 2);
    for (int a : {-1, 1}) {
        const auto f = FieldData::real(a);
        const cplx lam = lambda_factor(f).value;
        for (long k : {0L, 1L, -2L, 5L})
            for (int i = 0; i < 5; ++i) {
                const cplx s(d(rng) + 0.5, d(rng));
                const double y = d(rng);
                const cplx u(0, y);
                cplx ind;
                if (k == 0) {
                    ind = tate_gamma(CharData::on_F(0, y), f)(s) * tate_gamma(CharData::real_char(1, 0, y), f)(s);
                } else {
                    const double h = 0.5 * double(std::labs(k));
                    gsl_sf_result l1, a1, l2, a2;
                    const cplx z1 = 1.0 - s - u + h, z2 = s + u + h;
                    gsl_sf_lngamma_complex_e(z1.real(), z1.imag(), &l1, &a1);
                    gsl_sf_lngamma_complex_e(z2.real(), z2.imag(), &l2, &a2);
                    const cplx ratio = std::exp(cplx(l1.val - l2.val, a1.val - a2.val)) * std::pow(2 * pi, -(z1 - z2));
                    ind = std::pow(cplx(0, a), std::labs(k) + 1) * ratio;
                }
                EXPECT_NEAR(std::abs(tate_gamma(CharData::on_E(k, 0, y), f)(s) - ind / lam), 0, 1e-10 * std::abs(ind))
                    << "k=" << k << " a=" << a;
                EXPECT_NEAR(std::abs(induced_gamma(CharData::on_E(k, 0, y), f)(s) - ind), 0, 1e-10 * std::abs(ind));
            }
    }
}

TEST(TateGamma, UnramifiedInductionPadic) {
    // Ind of an unramified chi of E is mu + mu eta with mu(w)^2 = chi(w_E)
    for (const auto& f : {FieldData::padic(3), FieldData::padic(4, Extension::unramified, 1)}) {
        for (double y : {0.0, 0.3, -1.25}) {
            const auto ind = induced_gamma(CharData::on_E(0, 0, y), f);
            const auto mu = CharData::on_F(0, y);
            const auto oracle = tate_gamma(mu, f) * tate_gamma(mu * CharData::eta_char(), f);
            EXPECT_TRUE(ind.equals(oracle)) << ind.to_string() << " vs " << oracle.to_string();
        }
    }
}

TEST(TateGamma, LFactorOfInducedIsPolynomialIdentity) {
    // (1 - b T)(1 + b T) = 1 - b^2 T^2 with b^2 = chi(w_E)
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<long> num(-30, 30), den(1, 30);
    for (unsigned q : {2u, 3u, 7u})
        for (long u : {0L, 1L, -1L}) {
            const auto f = FieldData::padic(q);
            const auto L = l_factor(CharData::on_E(0, double(u), 0), f);
            mpq_class chiw = 1; // q_E^{-u}
            for (long i = 0; i < std::labs(u); ++i)
                chiw = u > 0 ? mpq_class(chiw / (q * q)) : mpq_class(chiw * (q * q));
            for (int i = 0; i < 10; ++i) {
                const mpq_class T(num(rng), den(rng));
                mpq_class d = 1 - chiw * T * T;
                d.canonicalize();
                if (d == 0)
                    continue;
                EXPECT_EQ(*L.exact_at_T(T), 1 / d);
            }
        }
}

TEST(TateGamma, UnsupportedCharacters) {
    const auto ram = FieldData::padic(3, Extension::ramified);
    try {
        tate_gamma(CharData::eta_char(), ram);
        FAIL();
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("ramified character requires user-supplied"), std::string::npos);
    }
    EXPECT_THROW(tate_gamma(CharData::on_E(1), FieldData::padic(3)), std::invalid_argument);
    EXPECT_THROW(tate_gamma(CharData::real_char(1), FieldData::padic(3)), std::invalid_argument);
    CharData bad = CharData::eta_char();
    bad.base = CharData::Base::E;
    EXPECT_THROW(tate_gamma(bad, FieldData::real()), std::invalid_argument);
    EXPECT_THROW(FieldData::padic(6), std::invalid_argument);
    EXPECT_THROW(FieldData::padic(1), std::invalid_argument);
}

TEST(Lambda, Values) {
    EXPECT_NEAR(std::abs(lambda_factor(FieldData::real()).value - cplx(0, -1)), 0, 1e-15);
    EXPECT_NEAR(std::abs(lambda_factor(FieldData::real(1)).value - cplx(0, 1)), 0, 1e-15);
    const auto p = lambda_factor(FieldData::padic(3));
    ASSERT_TRUE(p.exact);
    EXPECT_TRUE(p.exact->is_one());
    EXPECT_NEAR(std::abs(p.value - 1.0), 0, 1e-15);
}

TEST(Lambda, FourthRootOfUnityEverywhere) {
    for (const auto& f : padic_fields()) {
        const auto l = lambda_factor(f);
        ASSERT_TRUE(l.exact) << f.label();
        EXPECT_TRUE(l.exact->pow(4).is_one()) << f.label();
        EXPECT_NEAR(std::abs(std::pow(l.value, 4) - 1.0), 0, 1e-12);
    }
    for (int a : {-1, 1})
        EXPECT_NEAR(std::abs(std::pow(lambda_factor(FieldData::real(a)).value, 4) - 1.0), 0, 1e-12);
}

TEST(Product, PointwiseAndOrders) {
    const auto f = FieldData::padic(3);
    const auto a = tate_gamma(CharData::trivial(), f), b = tate_gamma(CharData::eta_char(), f);
    EXPECT_NEAR(std::abs(product({a, b})(0.25) - a(0.25) * b(0.25)), 0, 1e-12);
    EXPECT_EQ(product({a, a}).star_zero().order, 2);
    const auto r = FieldData::real();
    const auto c = tate_gamma(CharData::on_E(2), r), d = tate_gamma(CharData::trivial(), r);
    EXPECT_NEAR(std::abs(product({c, d})(cplx(0.3, 1)) - c(cplx(0.3, 1)) * d(cplx(0.3, 1))), 0, 1e-12);
    EXPECT_EQ(product({d, d, d}).order_at_zero(), 3);
    EXPECT_NEAR(std::abs(product({d, d}).star_zero().value - 1.0), 0, 1e-14);
    EXPECT_THROW(product({a, c}), std::invalid_argument);
    EXPECT_THROW(d.inverse().star_zero(), pole_error);
}

TEST(Abelian, PadicExact) {
    const auto one = abelian_gamma_product(1, FieldData::padic(3));
    EXPECT_EQ(*one.exact, mpq_class(3, 2));
    const auto two = abelian_gamma_product(2, FieldData::padic(3));
    EXPECT_EQ(*two.exact, mpq_class(-27, 8));
    for (unsigned q : {2u, 3u, 5u})
        for (unsigned n = 1; n <= 10; ++n) {
            const auto r = abelian_gamma_product(n, FieldData::padic(q));
            ASSERT_TRUE(r.exact);
            EXPECT_NE(*r.exact, 0);
        }
}

TEST(Abelian, Real) {
    // gamma(0, sign) gamma(-1, 1) = (-i/pi) Gamma_R(2)/Gamma_R(-1) = i/(2 pi^3)
    EXPECT_NEAR(std::abs(abelian_gamma_product(2, FieldData::real()).value - cplx(0, 1 / (2 * pi * pi * pi))), 0,
                1e-15);
    for (unsigned n = 1; n <= 10; ++n) {
        const auto v = abelian_gamma_product(n, FieldData::real()).value;
        EXPECT_TRUE(std::isfinite(std::abs(v)));
        EXPECT_GT(std::abs(v), 0);
    }
    EXPECT_THROW(abelian_gamma_product(0, FieldData::real()), std::invalid_argument);
}

TEST(Rendering, PadicRationalFunction) {
    const auto s = tate_gamma(CharData::trivial(), FieldData::padic(3)).to_string();
    EXPECT_NE(s.find("T = 3^-s"), std::string::npos);
    EXPECT_NE(s.find("(1 - 3*T)"), std::string::npos);
}
