#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "plancherel/tempered.hpp"

using namespace plancherel;
using namespace plancherel::tempered;
using local::Extension;
using std::numbers::pi;

namespace {

const cplx I(0, 1);

// Characters of C^x: generic ones need a nonzero imaginary exponent, self-dual ones have
// u = 0 and are plus (odd weight) or minus (even weight).
BlockTable complex_catalogue() {
    BlockTable t(FieldData::real());
    t.add_character("a", CharData::on_E(0, 0, 0.5));
    t.add_character("b", CharData::on_E(2, 0, -1.25));
    t.add_character("c", CharData::on_E(-3, 0, 0.75));
    t.add_character("m0", CharData::on_E(0), AsaiType::minus);
    t.add_character("m2", CharData::on_E(2), AsaiType::minus);
    t.add_character("p1", CharData::on_E(1), AsaiType::plus);
    t.add_character("p3", CharData::on_E(-3), AsaiType::plus);
    return t;
}

CharData padic_char(const mpq_class& turn, double u_im = 0) {
    CharData c = CharData::on_E(0, 0, u_im);
    c.turn = turn;
    return c;
}

BlockTable padic_catalogue(unsigned q) {
    BlockTable t(FieldData::padic(q));
    t.add_character("a", padic_char(mpq_class(1, 3)));
    t.add_character("b", padic_char(0, 0.5));
    t.add_character("c", padic_char(mpq_class(1, 5), -0.25));
    t.add_character("m0", padic_char(0), AsaiType::minus);
    t.add_character("p1", padic_char(mpq_class(1, 2)), AsaiType::plus);
    return t;
}

// Formal blocks of various sizes.
BlockTable formal_catalogue() {
    BlockTable t(FieldData::real(), true);
    t.add_generic_pair("t", "t*", 2);
    t.add_generic_pair("u", "u*", 1);
    t.add_self_dual("mu", 3, AsaiType::plus);
    t.add_self_dual("mu2", 1, AsaiType::plus);
    t.add_self_dual("nu", 1, AsaiType::minus);
    t.add_self_dual("nu2", 2, AsaiType::minus);
    t.add_self_dual("nu3", 3, AsaiType::minus);
    return t;
}

std::vector<std::string> gl_ids(const BlockTable& t) {
    std::vector<std::string> v;
    for (const auto& id : t.ids())
        if (id.back() != '*')
            v.push_back(id);
    return v;
}

std::vector<std::string> minus_ids(const BlockTable& t) {
    std::vector<std::string> v;
    for (const auto& id : t.ids())
        if (t.block(id).type == AsaiType::minus)
            v.push_back(id);
    return v;
}

// A random sigma; twists are zero with probability 1/3 unless `generic`.
TemperedParamU random_sigma(std::mt19937_64& rng, const BlockTable& t, bool generic, unsigned max_gl = 3) {
    const auto gl = gl_ids(t), minus = minus_ids(t);
    std::uniform_int_distribution<std::size_t> pick(0, gl.size() - 1);
    std::uniform_int_distribution<unsigned> len(0, max_gl);
    std::uniform_int_distribution<int> coin(0, 2), k(1, 40);
    TemperedParamU s;
    const unsigned L = len(rng);
    for (unsigned i = 0; i < L; ++i) {
        double x = 0;
        if (generic || coin(rng) == 0)
            x = k(rng) / 16.0 + (generic ? 0.0137 * i : 0.0);
        s.gl.push_back({gl[pick(rng)], x});
    }
    for (const auto& m : minus)
        if (coin(rng) == 0)
            s.anchor.push_back(m);
    if (s.gl.empty() && s.anchor.empty())
        s.anchor.push_back(minus.front());
    return s;
}

TemperedParamU sorted(TemperedParamU s) {
    std::sort(s.gl.begin(), s.gl.end());
    std::sort(s.anchor.begin(), s.anchor.end());
    return s;
}

bool same(const TemperedParamU& a, const TemperedParamU& b) {
    const auto x = sorted(a), y = sorted(b);
    return x.gl == y.gl && x.anchor == y.anchor;
}

void expect_same_function(const GammaFactor& a, const GammaFactor& b, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> re(-2.5, 2.5), im(-4, 4);
    for (int k = 0; k < 20; ++k) {
        const cplx s(re(rng), im(rng));
        const cplx x = a(s), y = b(s);
        if (!std::isfinite(std::abs(x)) || !std::isfinite(std::abs(y)))
            continue;
        EXPECT_LE(std::abs(x - y), 1e-10 * std::max(1.0, std::abs(y))) << "s = " << s;
    }
}

} // namespace

TEST(Shifted, MatchesEvaluationAtShiftedArgument) {
    std::mt19937_64 rng(11);
    const auto fr = FieldData::real();
    const auto fp = FieldData::padic(5);
    const GammaFactor ga = local::induced_gamma(CharData::on_E(3, 0, 0.25), fr) * local::tate_gamma(CharData::real_char(1), fr);
    const GammaFactor gp = local::induced_gamma(padic_char(mpq_class(1, 3)), fp) * local::tate_gamma(CharData::on_F(0, 0.5), fp);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int k = 0; k < 10; ++k) {
        const mpq_class re(std::round(u(rng) * 8), 8), im(std::round(u(rng) * 16), 16);
        const cplx c(re.get_d(), im.get_d());
        const auto sa = ga.shifted(re, im), sp = gp.shifted(re, im);
        for (int j = 0; j < 5; ++j) {
            const cplx s(u(rng), 3 * u(rng));
            EXPECT_LE(std::abs(sa(s) - ga(s + c)), 1e-10 * std::abs(ga(s + c)));
            EXPECT_LE(std::abs(sp(s) - gp(s + c)), 1e-10 * std::abs(gp(s + c)));
        }
        EXPECT_TRUE(gp.shifted(re, im).shifted(-re, -im).equals(gp));
    }
}

TEST(Blocks, CatalogueTypesAreRecomputed) {
    const auto t = complex_catalogue();
    EXPECT_EQ(t.block("a").type, AsaiType::generic);
    EXPECT_EQ(t.block("a").dual, "a*");
    EXPECT_EQ(t.block("a*").dual, "a");
    EXPECT_EQ(t.block("a*").character->u_im, mpq_class(-1, 2));
    EXPECT_EQ(t.block("m2").type, AsaiType::minus);
    EXPECT_EQ(t.block("p3").type, AsaiType::plus);

    BlockTable u(FieldData::real());
    EXPECT_THROW(u.add_character("x", CharData::on_E(1), AsaiType::minus), std::invalid_argument);
    EXPECT_THROW(u.add_character("y", CharData::on_E(0, 0.5)), std::invalid_argument);
    EXPECT_THROW(u.add_character("z", CharData::on_F()), std::invalid_argument);
    u.add_character("x", CharData::on_E(1));
    EXPECT_THROW(u.add_character("x", CharData::on_E(3)), std::invalid_argument);
    EXPECT_THROW(u.add_self_dual("g", 1, AsaiType::generic), std::invalid_argument);

    const auto p = padic_catalogue(3);
    EXPECT_EQ(p.block("a*").character->turn, mpq_class(2, 3));
    EXPECT_EQ(p.block("p1").type, AsaiType::plus);
    BlockTable r(FieldData::padic(3, Extension::ramified));
    EXPECT_THROW(r.add_character("x", padic_char(0)), std::invalid_argument);
}

TEST(BaseChange, Examples) {
    const auto t = formal_catalogue();
    const auto p = bc(TemperedParamU{{}, {"nu"}}, 1, t);
    ASSERT_EQ(p.entries.size(), 1u);
    EXPECT_EQ(p.entries[0], (Entry{"nu", 0}));
    EXPECT_FALSE(p.eta_twist);

    const auto q = bc(TemperedParamU{{{"u", 0.3}}, {}}, 2, t);
    ASSERT_EQ(q.entries.size(), 2u);
    EXPECT_EQ(q.entries[0], (Entry{"u", 0.3}));
    EXPECT_EQ(q.entries[1], (Entry{"u*", -0.3}));
    EXPECT_TRUE(q.eta_twist);
    EXPECT_THROW(bc(TemperedParamU{{{"u", 0.3}}, {}}, 3, t), std::invalid_argument);
    EXPECT_THROW(bc(TemperedParamU{{}, {"mu"}}, 3, t), std::invalid_argument);
    EXPECT_THROW(bc(TemperedParamU{{}, {"nu", "nu"}}, 2, t), std::invalid_argument);

    EXPECT_FALSE(in_bc_image(TemperedParamGL{{{"mu", 0}}}, t).in_image);
    const auto nu = in_bc_image(TemperedParamGL{{{"nu", 0}}}, t);
    ASSERT_TRUE(nu.in_image);
    EXPECT_TRUE(same(*nu.witness, TemperedParamU{{}, {"nu"}}));
    EXPECT_TRUE(in_bc_image(TemperedParamGL{{{"u", 0.3}, {"u*", -0.3}}}, t).in_image);
    EXPECT_FALSE(in_bc_image(TemperedParamGL{{{"u", 0.3}, {"u*", 0.3}}}, t).in_image);
    EXPECT_FALSE(in_bc_image(TemperedParamGL{{{"nu", 0.5}}}, t).in_image);
    EXPECT_TRUE(in_bc_image(TemperedParamGL{{{"mu", 0}, {"mu", 0}}}, t).in_image);
    EXPECT_TRUE(in_bc_image(TemperedParamGL{{{"mu", 0.5}, {"mu", -0.5}}}, t).in_image);
}

TEST(BaseChange, RoundTrip) {
    std::mt19937_64 rng(2024);
    for (const auto& t : {formal_catalogue(), complex_catalogue(), padic_catalogue(7)}) {
        for (int k = 0; k < 100; ++k) {
            const auto s = random_sigma(rng, t, false);
            const auto p = bc(s, s.rank(t), t);
            const auto r = in_bc_image(p, t);
            ASSERT_TRUE(r.in_image) << s.label() << ": " << r.reason;
            EXPECT_TRUE(same(*r.witness, canonical(s, t))) << s.label() << " vs " << r.witness->label();
            EXPECT_EQ(r.witness->rank(t), s.rank(t));
        }
    }
}

TEST(Orders, CentralizerExamples) {
    const auto t = formal_catalogue();
    BlockTable g(FieldData::real(), true);
    g.add_generic_pair("pi5", "pi5*", 5);
    EXPECT_EQ(s_group_order(TemperedParamGL{{{"pi5", 0}}}, g), 10u);
    EXPECT_EQ(s_group_order(TemperedParamGL{{{"u", 0}, {"t", 0.2}}}, t), 8u);
    EXPECT_EQ(s_group_order(TemperedParamU{{}, {"nu", "nu2"}}, t), 4u);
    EXPECT_EQ(s_group_order(TemperedParamU{{{"t", 0.1}}, {"nu"}}, t), 8u);
}

TEST(Orders, CentralizerMultiplicativeUnderConcatenation) {
    std::mt19937_64 rng(5);
    const auto t = formal_catalogue();
    for (int k = 0; k < 30; ++k) {
        const auto a = random_sigma(rng, t, false), b = random_sigma(rng, t, false);
        const auto pa = bc(a, a.rank(t), t), pb = bc(b, b.rank(t), t);
        TemperedParamGL ab = pa;
        ab.entries.insert(ab.entries.end(), pb.entries.begin(), pb.entries.end());
        EXPECT_EQ(s_group_order(ab, t), s_group_order(pa, t) * s_group_order(pb, t));
        TemperedParamU u{a.gl, {}};
        u.gl.insert(u.gl.end(), b.gl.begin(), b.gl.end());
        if (!u.gl.empty())
            EXPECT_EQ(s_group_order(u, t) * (1u << a.anchor.size()) * (1u << b.anchor.size()),
                      s_group_order(a, t) * s_group_order(b, t));
    }
}

TEST(Orders, WeylExamples) {
    const auto t = formal_catalogue();
    EXPECT_EQ(weyl_order(TemperedParamU{{{"mu", 0}, {"mu", 0}}, {}}, t), 8u);
    EXPECT_EQ(weyl_order(TemperedParamU{{{"u", 0}}, {}}, t), 1u);
    EXPECT_EQ(weyl_order(TemperedParamU{{{"u", 0.5}, {"u*", -0.5}}, {}}, t), 2u);
    EXPECT_EQ(weyl_order(TemperedParamU{{{"mu", 0.5}, {"mu", -0.5}}, {}}, t), 2u);
    EXPECT_EQ(weyl_order(TemperedParamGL{{{"u", 0.5}, {"u", 0.5}, {"u", 0}}}, t), 2u);
}

// At zero twists bc(sigma) determines a SpectralConfig; its W' is the Weyl group of sigma and
// its W the permutations of the GL side.
TEST(Orders, WeylMatchesSpectralConfig) {
    std::mt19937_64 rng(77);
    const auto t = formal_catalogue();
    const auto gl = gl_ids(t), minus = minus_ids(t);
    std::uniform_int_distribution<int> mult(0, 3);
    for (int k = 0; k < 40; ++k) {
        TemperedParamU s;
        for (const auto& id : gl)
            for (int j = mult(rng); j > 0; --j)
                s.gl.push_back({id, 0});
        for (const auto& m : minus)
            if (mult(rng) == 0)
                s.anchor.push_back(m);
        if (s.gl.empty() && s.anchor.empty())
            continue;
        const auto p = bc(s, s.rank(t), t);
        const auto d = spectral_config(p, t).derive();
        EXPECT_EQ(weyl_order(s, t), d.Wprime) << s.label();
        EXPECT_EQ(weyl_order(p, t), d.W) << s.label();
    }
}

TEST(Adjoint, Examples) {
    const auto t = complex_catalogue();
    for (const auto& id : t.ids())
        EXPECT_EQ(adjoint_gamma(TemperedParamGL{{{id, 0}}}, t).order, 1) << id;

    const auto f = t.field();
    const TemperedParamGL p{{{"p1", 0}, {"m2", 0}}};
    const auto ad = adjoint_gamma(p, t);
    EXPECT_EQ(ad.order, 2);
    const CharData x1 = CharData::on_E(1), x2 = CharData::on_E(2);
    const cplx ad1 = local::induced_gamma(CharData::on_E(), f).star_zero().value;
    const cplx expect = ad1 * ad1 * local::induced_gamma(x1 * x2.inverse(), f)(0.0) *
                        local::induced_gamma(x1.inverse() * x2, f)(0.0);
    EXPECT_LE(std::abs(ad.star().value - expect), 1e-12 * std::abs(expect));

    EXPECT_EQ(adjoint_gamma(TemperedParamGL{{{"p1", 0}, {"p1", 0}}}, t).order, 4);
    EXPECT_EQ(adjoint_gamma(TemperedParamGL{{{"p1", 0}, {"p1", 0.5}}}, t).order, 2);

    BlockTable g(FieldData::real());
    g.add_generic_pair("x", "x*", 2);
    try {
        adjoint_gamma(TemperedParamGL{{{"x", 0}, {"x*", 0}}}, g);
        FAIL() << "missing handles not reported";
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("x x x*^v"), std::string::npos) << e.what();
        EXPECT_NE(std::string(e.what()).find("x, Ad"), std::string::npos) << e.what();
    }
}

TEST(Asai, Examples) {
    const auto t = complex_catalogue();
    EXPECT_EQ(asai_gamma(TemperedParamGL{{{"m0", 0}}}, t).order, 1);
    EXPECT_EQ(asai_gamma(TemperedParamGL{{{"p1", 0}}}, t).order, 0);
    // weight k against weight -k
    BlockTable w(FieldData::real());
    w.add_character("k", CharData::on_E(3));
    w.add_character("-k", CharData::on_E(-3));
    const TemperedParamGL p{{{"k", 0}, {"-k", 0}}};
    const auto a = asai_gamma(p, w);
    EXPECT_EQ(a.order, brute_force_asai(p, w).order_at_zero());
    // both are conjugate self-dual of plus type and chi_1 chi_2^c = w_6 is not trivial
    EXPECT_EQ(a.order, 0);
    BlockTable f(FieldData::real(), true);
    f.add_self_dual("k", 1, AsaiType::plus);
    f.add_self_dual("-k", 1, AsaiType::plus);
    EXPECT_EQ(asai_gamma(p, f).order, 0);
}

// The two routes: block-level handles shifted by the twists, and the product over the
// explicit decomposition of Ad and As into characters.
TEST(Assembly, MatchesBruteForceArchimedean) {
    std::mt19937_64 rng(31);
    const auto t = complex_catalogue();
    std::uniform_int_distribution<std::size_t> len(1, 4);
    std::uniform_int_distribution<int> coin(0, 1), k(-12, 12);
    const auto ids = t.ids();
    std::uniform_int_distribution<std::size_t> pick(0, ids.size() - 1);
    for (int c = 0; c < 15; ++c) {
        TemperedParamGL p;
        for (std::size_t j = len(rng); j > 0; --j)
            p.entries.push_back({ids[pick(rng)], coin(rng) ? k(rng) / 8.0 : 0.0});
        const auto ad = adjoint_gamma(p, t), as = asai_gamma(p, t);
        const auto bad = brute_force_adjoint(p, t), bas = brute_force_asai(p, t);
        EXPECT_TRUE(ad.factor->equals(bad, 1e-10)) << p.label();
        EXPECT_TRUE(as.factor->equals(bas, 1e-10)) << p.label();
        EXPECT_EQ(ad.order, bad.order_at_zero());
        EXPECT_EQ(as.order, bas.order_at_zero());
        expect_same_function(*ad.factor, bad, rng);
        expect_same_function(*as.factor, bas, rng);
    }
}

TEST(Assembly, MatchesBruteForcePadicExactly) {
    std::mt19937_64 rng(32);
    for (unsigned q : {2u, 3u, 5u}) {
        const auto t = padic_catalogue(q);
        const auto ids = t.ids();
        std::uniform_int_distribution<std::size_t> len(1, 4), pick(0, ids.size() - 1);
        std::uniform_int_distribution<int> coin(0, 1), k(-12, 12);
        for (int c = 0; c < 6; ++c) {
            TemperedParamGL p;
            for (std::size_t j = len(rng); j > 0; --j)
                p.entries.push_back({ids[pick(rng)], coin(rng) ? k(rng) / 8.0 : 0.0});
            const auto ad = adjoint_gamma(p, t), as = asai_gamma(p, t);
            EXPECT_TRUE(ad.factor->equals(brute_force_adjoint(p, t))) << p.label();
            EXPECT_TRUE(as.factor->equals(brute_force_asai(p, t))) << p.label();
            expect_same_function(*ad.factor, brute_force_adjoint(p, t), rng);
            expect_same_function(*as.factor, brute_force_asai(p, t), rng);
        }
    }
}

// At generic twists the Asai zeros come from the pairs (tau, x), (tau*, -x) and the anchors.
TEST(Asai, OrderIsNOfSpectralConfig) {
    std::mt19937_64 rng(41);
    for (const auto& t : {formal_catalogue(), complex_catalogue(), padic_catalogue(3)}) {
        for (int k = 0; k < 25; ++k) {
            const auto s = random_sigma(rng, t, true);
            const auto p = bc(s, s.rank(t), t);
            const auto d = spectral_config(p, t).derive();
            const auto as = asai_gamma(p, t), ad = adjoint_gamma(p, t);
            EXPECT_EQ(as.order, int(d.N)) << s.label();
            EXPECT_GE(ad.order, as.order) << s.label();
        }
    }
}

TEST(Asai, AdjointDominatesOnImageAtAnyTwist) {
    std::mt19937_64 rng(42);
    for (const auto& t : {formal_catalogue(), complex_catalogue(), padic_catalogue(2)}) {
        for (int k = 0; k < 40; ++k) {
            const auto s = random_sigma(rng, t, false);
            const auto p = bc(s, s.rank(t), t);
            EXPECT_GE(adjoint_gamma(p, t).order, asai_gamma(p, t).order) << s.label();
            EXPECT_GE(adjoint_gamma_U(s, t).order, 0);
        }
    }
}

TEST(Unitary, QuotientOfDiscreteMinusBlock) {
    const auto t = complex_catalogue();
    const TemperedParamU s{{}, {"m2"}};
    const auto q = adjoint_gamma_U(s, t);
    EXPECT_EQ(q.order, 0);
    const auto p = bc(s, 1, t);
    const cplx expect = adjoint_gamma(p, t).star().value / asai_gamma(p, t).star().value;
    EXPECT_LE(std::abs(q.star().value - expect), 1e-12 * std::abs(expect));
}

TEST(Unitary, RankOneIsSignCharacter) {
    const auto f = FieldData::real();
    const auto sign = local::tate_gamma(CharData::real_char(1), f);
    for (long k : {-4, -2, 0, 2, 6}) {
        BlockTable t(f);
        t.add_character("nu", CharData::on_E(k));
        const TemperedParamU s{{}, {"nu"}};
        EXPECT_TRUE(adjoint_gamma_U(s, t).factor->equals(sign, 1e-12)) << k;
        const auto d = formal_degree(s, t);
        EXPECT_NEAR(*d.value, 1 / (2 * pi), 1e-14);
        const auto c = c_sigma_phase(s, t, 1);
        EXPECT_NEAR(std::abs(c.c - I), 0, 1e-14);
        EXPECT_NEAR(std::abs(c.c * c.gamma_star - 1 / pi), 0, 1e-14);
        EXPECT_TRUE(c.c1_is_sign);
    }
}

TEST(Unitary, FormalDegreeTwoAnchors) {
    const auto t = complex_catalogue();
    const TemperedParamU s{{}, {"m0", "m2"}};
    const auto d = formal_degree(s, t);
    EXPECT_EQ(d.s_order, 4u);
    EXPECT_NEAR(*d.value, std::abs((*adjoint_gamma_U(s, t).factor)(0.0)) / 4, 1e-15);
    EXPECT_GT(*d.value, 0);
    EXPECT_THROW(formal_degree(TemperedParamU{{{"a", 0}}, {}}, t), std::invalid_argument);
}

TEST(Unitary, CPhaseIsUnimodular) {
    std::mt19937_64 rng(9);
    const auto t = complex_catalogue();
    for (int k = 0; k < 20; ++k) {
        const auto s = random_sigma(rng, t, false, 2);
        const auto c = c_sigma_phase(s, t, k % 2 ? 1 : -1);
        EXPECT_NEAR(std::abs(c.c), 1, 1e-12);
        EXPECT_NEAR(std::abs(c.c1), 1, 1e-12);
        const cplx r = c.c * c.gamma_star;
        EXPECT_NEAR(r.imag(), 0, 1e-12 * std::abs(r));
        EXPECT_GT(r.real(), 0);
    }
}

TEST(Formal, SymbolBookkeeping) {
    const auto t = formal_catalogue();
    const TemperedParamU s{{{"t", 0.5}}, {"nu"}};
    const auto q = adjoint_gamma_U(s, t);
    EXPECT_FALSE(q.factor.has_value());
    // Ad: nu, t, t*; As: nu and the pair t x t*^c at shift 0
    EXPECT_EQ(q.order, 3 - 2);
    const std::string f = q.formula();
    EXPECT_NE(f.find("gamma(s, nu, Ad)"), std::string::npos) << f;
    EXPECT_NE(f.find("gamma(s + 1.000000i, t x t*^v)"), std::string::npos) << f;
    EXPECT_NE(f.find("gamma(s + 1.000000i, t, As)"), std::string::npos) << f;
    EXPECT_NE(f.find("gamma(s, t x t*^c)"), std::string::npos) << f;
    EXPECT_NE(f.find("gamma(s, nu, As)"), std::string::npos) << f;

    const auto d = plancherel_density(TemperedParamGL{{{"u", 0}, {"t", 0.2}}}, t);
    EXPECT_FALSE(d.value.has_value());
    EXPECT_EQ(d.s_order, 8u);
    EXPECT_NE(d.formula.find("lambda^-9"), std::string::npos) << d.formula;
    const auto fd = formal_degree(TemperedParamU{{}, {"nu", "nu2"}}, t);
    EXPECT_FALSE(fd.value.has_value());
    EXPECT_NE(fd.formula.find("/ 2^2"), std::string::npos);
}

TEST(Density, RankOne) {
    for (long k : {0, 2, -4}) {
        BlockTable t(FieldData::real());
        t.add_character("x", CharData::on_E(k, 0, 0.0));
        const auto d = plancherel_density(TemperedParamGL{{{"x", 0}}}, t);
        EXPECT_NEAR(std::abs(*d.value - 1 / (2 * pi)), 0, 1e-14);
    }
    BlockTable t(FieldData::real());
    t.add_character("x", CharData::on_E(1));
    t.add_character("y", CharData::on_E(0, 0, 0.7));
    EXPECT_THROW(plancherel_density(TemperedParamGL{{{"y", 0}}}, t), std::invalid_argument);
    EXPECT_THROW(plancherel_density(TemperedParamGL{{{"x", 0}}}, t), std::invalid_argument);
    const auto fp = FieldData::padic(3);
    BlockTable u(fp);
    u.add_character("x", padic_char(0));
    const auto d = plancherel_density(TemperedParamGL{{{"x", 0}}}, u);
    // lambda^{-1} gamma(0, eta) / 2 with eta unramified quadratic
    const cplx expect = 1.0 / local::lambda_factor(fp).value * local::tate_gamma(padic_char(mpq_class(1, 2)).restricted_to_F(fp), fp)(0.0) / 2.0;
    EXPECT_NEAR(std::abs(*d.value - expect), 0, 1e-14);
}

TEST(Density, PositiveOnCentralQuotient) {
    std::mt19937_64 rng(8);
    BlockTable t(FieldData::real());
    for (long w = -4; w <= 4; w += 2)
        t.add_character("w" + std::to_string(w + 4), CharData::on_E(w));
    const auto ids = t.ids();
    std::uniform_int_distribution<std::size_t> pick(0, ids.size() - 1);
    std::uniform_int_distribution<int> k(-8, 8);
    for (int c = 0; c < 20; ++c) {
        TemperedParamGL p;
        for (int j = 0; j < 2 + c % 2; ++j)
            p.entries.push_back({ids[pick(rng)], k(rng) / 4.0});
        // push the sum of the twists to zero so the central character is trivial on F^x
        double sum = 0;
        for (const auto& e : p.entries)
            sum += e.twist;
        p.entries.back().twist -= sum;
        const auto d = plancherel_density(p, t);
        EXPECT_GT(d.value->real(), 0) << p.label();
        EXPECT_NEAR(d.value->imag(), 0, 1e-12 * std::abs(*d.value)) << p.label();
    }
}

TEST(Kappa, Examples) {
    const auto f = FieldData::real();
    const auto k = kappa_V(2, 1, f, tau_archimedean(2, 1));
    // (eta'(-i) lambda)^3 = ((-i)(-i))^3
    EXPECT_NEAR(std::abs(k.value - cplx(-1, 0)), 0, 1e-15);
    EXPECT_EQ(k.phase_order, 2u);
    for (int disc : {1, -1}) {
        const auto k1 = kappa_V(1, disc, f, tau_archimedean(1, 2.5));
        EXPECT_NEAR(std::abs(k1.value), 1, 1e-15);
        EXPECT_NEAR(std::abs(k1.value - local::lambda_factor(f).value * cplx(0, 1) * double(disc)), 0, 1e-15);
    }
    for (unsigned n = 1; n <= 6; ++n) {
        const auto tau = tau_archimedean(n, 1.7);
        const auto a = kappa_V(n, 1, f, tau), b = kappa_V(n, -1, f, tau);
        EXPECT_NEAR(std::abs(a.value * b.value), std::pow(tau.abs_tau_E, n * (n - 1) / 2.0), 1e-9);
        const auto p = kappa_V(n, -1, FieldData::padic(5), tau_padic_unramified(5, 1));
        EXPECT_NEAR(std::abs(p.value), std::pow(25.0, -double(n * (n - 1)) / 4.0) , 1e-15);
    }
    EXPECT_THROW(kappa_V(0, 1, f, tau_archimedean(1, 1)), std::invalid_argument);
    EXPECT_THROW(kappa_V(2, 0, f, tau_archimedean(2, 1)), std::invalid_argument);
}
