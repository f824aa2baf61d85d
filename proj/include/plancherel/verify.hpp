#pragma once

#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "plancherel/identities.hpp"
#include "plancherel/localfactors.hpp"
#include "plancherel/parallel.hpp"
#include "plancherel/pvlimits.hpp"
#include "plancherel/tempered.hpp"
#include "plancherel/toyplancherel.hpp"

/// The acceptance matrix: one Check per criterion, shared by the acceptance binary and the
/// CLI's verify-all.
namespace plancherel::verify {

using local::cplx;
using std::numbers::pi;

struct Check {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string metric; // what `value` measures
    double value = 0;
    double tolerance = 0;
    std::string detail;
    double seconds = 0;
    std::vector<std::string> failures;
};

struct Options {
    unsigned jobs = default_jobs();
    std::uint64_t seed = 20240101;
};

namespace detail {

inline double since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

inline std::vector<FamilySpec> family_range(unsigned max_size = 6) {
    std::vector<FamilySpec> v;
    for (unsigned m = 1; m <= max_size; ++m)
        for (unsigned n = 0; n <= m && m + n <= max_size; ++n)
            v.push_back(FamilySpec::ps(m, n));
    for (unsigned p = 1; p <= max_size; ++p)
        v.push_back(FamilySpec::qt(p));
    for (unsigned q = 1; q <= max_size; ++q)
        v.push_back(FamilySpec::ru(q));
    return v;
}

inline std::string fmt(double x) {
    std::ostringstream os;
    os.precision(3);
    os << x;
    return os.str();
}

/// Non-radial Gaussian-times-polynomial test function.
inline TestFunction lopsided(std::size_t dim) {
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

inline SpectralConfig config(std::vector<SpectralConfig::PSBlock> ps, std::vector<SpectralConfig::QTBlock> qt,
                             std::vector<SpectralConfig::RUBlock> ru) {
    SpectralConfig c;
    c.ps = std::move(ps);
    c.qt = std::move(qt);
    c.ru = std::move(ru);
    return c;
}

} // namespace detail

/// Symmetrization identities, exactly, for every family of size <= 6; each case < 60 s.
inline Check symmetrization(const Options& o = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    Check c{1, "symmetrization identities (PS m+n<=6, QT p<=6, RU q<=6)", false, "max seconds per case", 0, 60};
    const auto specs = detail::family_range();
    std::vector<SymmetrizationReport> reps(specs.size());
    parallel_for(specs.size(), o.jobs, [&](std::size_t i) { reps[i] = verify_symmetrization(specs[i]); });
    for (const auto& r : reps) {
        c.value = std::max(c.value, r.elapsed);
        if (!r.holds)
            c.failures.push_back(r.spec.label() + " does not hold");
        if (r.elapsed >= 60)
            c.failures.push_back(r.spec.label() + " took " + detail::fmt(r.elapsed) + " s");
    }
    c.detail = std::to_string(specs.size()) + " families";
    c.pass = c.failures.empty();
    c.seconds = detail::since(t0);
    return c;
}

/// Starred limits at 20 random rational points per family, with the polynomiality check.
inline Check starred_limits(const Options& o = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    Check c{2, "starred-limit identities at 20 random points, polynomial on the subspace", false,
            "failing families", 0, 0};
    const auto specs = detail::family_range();
    std::vector<StarredLimitReport> reps(specs.size());
    parallel_for(specs.size(), o.jobs, [&](std::size_t i) { reps[i] = verify_starred_limits(specs[i], 20, o.seed + i); });
    for (const auto& r : reps)
        if (!r.holds || !r.polynomial_on_subspace)
            c.failures.push_back(r.spec.label());
    c.value = double(c.failures.size());
    c.detail = std::to_string(specs.size()) + " families x 20 points";
    c.pass = c.failures.empty();
    c.seconds = detail::since(t0);
    return c;
}

/// s * (PV integral) extrapolated to s = 0 against (prod h / sum h)(2 pi)^{n-1} phi(0).
inline Check pv_limits(const Options& o = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    Check c{3, "PV limits, n = 1..4, 5 random h each", false, "max relative error", 0, 1e-3};
    std::mt19937_64 rng(o.seed);
    std::uniform_real_distribution<double> u(1, 3);
    NumericOptions opt;
    opt.jobs = o.jobs;
    for (std::size_t n = 1; n <= 4; ++n)
        for (int k = 0; k < 5; ++k) {
            std::vector<double> h(n);
            for (auto& x : h)
                x = u(rng);
            const auto r = pv_limit_check(h, TestFunction::gaussian(n), default_s_grid(), opt);
            c.value = std::max(c.value, r.rel_err);
            if (!(r.rel_err < c.tolerance))
                c.failures.push_back(r.label + " rel err " + detail::fmt(r.rel_err));
        }
    c.seconds = detail::since(t0);
    if (c.seconds >= 300)
        c.failures.push_back("runtime " + detail::fmt(c.seconds) + " s exceeds 300 s");
    c.detail = "20 cases, runtime " + detail::fmt(c.seconds) + " s (limit 300)";
    c.pass = c.failures.empty();
    return c;
}

/// Residual distributions on a matrix of configurations covering PS/QT/RU and both branches.
inline Check residual_distributions(const Options& o = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    Check c{4, "residual distributions, 10 configs, both branches", false, "max error / tolerance", 0, 1};
    const std::vector<SpectralConfig> cfgs{
        detail::config({{1, 1, 2}}, {}, {}),          detail::config({}, {{2, 3}}, {}),
        detail::config({}, {}, {{2, 2}}),             detail::config({}, {}, {{3, 2}}),
        detail::config({{1, 1, 1}}, {}, {{1, 2}}),    detail::config({}, {{2, 1}}, {{1, 1}}),
        detail::config({{2, 1, 1}}, {}, {}),          detail::config({}, {{3, 1}}, {}),
        detail::config({}, {{1, 1}}, {}),             detail::config({{1, 0, 1}}, {}, {})};
    NumericOptions opt;
    opt.jobs = o.jobs;
    int zero = 0, nonzero = 0;
    for (const auto& cfg : cfgs) {
        const auto phi = symmetrize(cfg, detail::lopsided(cfg.derive().S));
        const auto r = verify_residual(cfg, phi, default_s_grid(), opt);
        (r.branch == "zero" ? zero : nonzero)++;
        c.value = std::max(c.value, r.error / r.tolerance);
        if (!r.pass)
            c.failures.push_back(cfg.label() + " " + r.branch + " error " + detail::fmt(r.error));
    }
    if (zero == 0 || nonzero == 0)
        c.failures.push_back("both branches must be covered");
    c.detail = std::to_string(nonzero) + " nonzero (tol 1e-2 rel), " + std::to_string(zero) + " zero (tol 1e-3 of scale)";
    c.pass = c.failures.empty();
    c.seconds = detail::since(t0);
    return c;
}

inline std::vector<local::CharData> padic_characters() {
    using local::CharData;
    std::vector<CharData> v{CharData::trivial(), CharData::eta_char(), CharData::on_F(0, 0.25), CharData::on_F(1, 0),
                            CharData::on_E(0, 0, 0.5), CharData::on_E(0, -1, 0)};
    CharData t = CharData::on_E(0, 0, 0.125);
    t.turn = mpq_class(1, 3);
    v.push_back(t);
    return v;
}

inline std::vector<local::CharData> archimedean_characters() {
    using local::CharData;
    return {CharData::trivial(), CharData::real_char(1),  CharData::real_char(0, 0, 1.3), CharData::real_char(1, 0, -0.4),
            CharData::on_E(0),   CharData::on_E(1, 0, 0.2), CharData::on_E(-3),            CharData::on_E(4, 0, -2.5),
            CharData::eta_char()};
}

/// gamma(s, chi, psi') gamma(1 - s, chi^{-1}, psi'^{-1}) = 1; lambda^4 = 1; gamma*(0, 1_F) = 1/(1 - 1/q).
inline Check gamma_suite(const Options& o = {}) {
    using namespace local;
    const auto t0 = std::chrono::steady_clock::now();
    Check c{5, "gamma-factor suite: functional equation, lambda^4 = 1, gamma*(0,1)", false,
            "max |FE - 1| (archimedean)", 0, 1e-10};
    std::mt19937_64 rng(o.seed);
    std::uniform_real_distribution<double> d(-3, 3);
    std::uniform_int_distribution<long> num(-40, 40), den(1, 40);
    int padic_checks = 0, arch_checks = 0;
    for (unsigned q : {2u, 3u, 5u, 9u})
        for (int cond : {0, 1}) {
            const auto f = FieldData::padic(q, Extension::unramified, cond);
            for (const auto& chi : padic_characters()) {
                const auto g = tate_gamma(chi, f), h = tate_gamma(chi.inverse(), f, true);
                if (!(g * h.reflected()).is_identity())
                    c.failures.push_back("FE " + f.label() + " " + chi.label());
                for (int done = 0, tries = 0; done < 20 && tries < 200; ++tries) {
                    mpq_class T(num(rng), den(rng));
                    T.canonicalize();
                    if (T == 0)
                        continue;
                    try {
                        const auto a = g.exact_at_T(T), b = h.exact_at_T(mpq_class(1) / (q * T));
                        if (!a || !b) {
                            // irrational constants: compare at s with q^{-s} = T numerically
                            const double s = -std::log(std::abs(T.get_d())) / std::log(double(q));
                            const cplx z(s, T < 0 ? pi / std::log(double(q)) : 0);
                            const cplx a1 = g(z), b1 = h(1.0 - z);
                            if (!std::isfinite(std::abs(a1)) || !std::isfinite(std::abs(b1)) || std::abs(a1) < 1e-12 ||
                                std::abs(b1) < 1e-12)
                                continue; // zero against pole
                            if (std::abs(a1 * b1 - 1.0) > 1e-10)
                                c.failures.push_back("FE " + f.label() + " " + chi.label() + " T=" + T.get_str());
                        } else if (*a * *b != 1) {
                            c.failures.push_back("FE " + f.label() + " " + chi.label() + " T=" + T.get_str());
                        }
                        ++done;
                        ++padic_checks;
                    } catch (const pole_error&) {
                    }
                }
            }
        }
    for (int a : {-1, 1})
        for (const auto& chi : archimedean_characters()) {
            const auto f = FieldData::real(a);
            const auto g = tate_gamma(chi, f), h = tate_gamma(chi.inverse(), f, true);
            for (int i = 0; i < 20; ++i) {
                const cplx s(d(rng) + 0.5, d(rng));
                const double e = std::abs(g(s) * h(1.0 - s) - 1.0);
                c.value = std::max(c.value, e);
                ++arch_checks;
                if (!(e < c.tolerance))
                    c.failures.push_back("FE R " + chi.label() + " error " + detail::fmt(e));
            }
        }
    std::vector<FieldData> fields{FieldData::real(-1), FieldData::real(1)};
    for (unsigned q : {2u, 3u, 5u, 7u, 9u})
        for (int cond : {0, 1, 2})
            fields.push_back(FieldData::padic(q, Extension::unramified, cond));
    for (unsigned q : {3u, 5u})
        for (int k = 0; k < 4; ++k) {
            FieldData r = FieldData::padic(q, Extension::ramified, 1);
            r.eta_epsilon = EpsilonMonomial{Root::unit(mpq_class(k, 4)), 1};
            fields.push_back(r);
        }
    for (const auto& f : fields) {
        const auto lam = lambda_factor(f);
        const bool ok = lam.exact ? lam.exact->pow(4).is_one() : std::abs(std::pow(lam.value, 4) - 1.0) < 1e-14;
        if (!ok)
            c.failures.push_back("lambda^4 != 1 for " + f.label());
    }
    for (unsigned q : {2u, 3u, 5u}) {
        const auto st = tate_gamma(CharData::trivial(), FieldData::padic(q)).star_zero();
        const mpq_class expect = mpq_class(q, q - 1);
        if (!st.exact || *st.exact != expect || st.order != 1)
            c.failures.push_back("gamma*(0,1) for q=" + std::to_string(q));
    }
    c.detail = std::to_string(padic_checks) + " exact p-adic points, " + std::to_string(arch_checks) +
               " archimedean points, lambda on " + std::to_string(fields.size()) + " fields, gamma*(0,1) q=2,3,5 exact";
    c.pass = c.failures.empty();
    c.seconds = detail::since(t0);
    return c;
}

namespace detail {

inline tempered::BlockTable complex_table() {
    using local::CharData;
    tempered::BlockTable t(local::FieldData::real());
    t.add_character("a", CharData::on_E(0, 0, 0.5));
    t.add_character("b", CharData::on_E(2, 0, -1.25));
    t.add_character("m0", CharData::on_E(0));
    t.add_character("m2", CharData::on_E(2));
    t.add_character("p1", CharData::on_E(1));
    t.add_character("p3", CharData::on_E(-3));
    return t;
}

inline tempered::BlockTable padic_table(unsigned q) {
    using local::CharData;
    tempered::BlockTable t(local::FieldData::padic(q));
    auto ch = [](mpq_class turn, double u_im) {
        CharData c = CharData::on_E(0, 0, u_im);
        c.turn = turn;
        return c;
    };
    t.add_character("a", ch(mpq_class(1, 3), 0));
    t.add_character("b", ch(0, 0.5));
    t.add_character("m0", ch(0, 0));
    t.add_character("p1", ch(mpq_class(1, 2), 0));
    return t;
}

/// A random unitary parameter with generic, pairwise distinct twists.
inline tempered::TemperedParamU generic_sigma(std::mt19937_64& rng, const tempered::BlockTable& t) {
    std::vector<std::string> gl, minus;
    for (const auto& id : t.ids()) {
        if (id.back() != '*')
            gl.push_back(id);
        if (t.block(id).type == tempered::AsaiType::minus)
            minus.push_back(id);
    }
    std::uniform_int_distribution<std::size_t> pick(0, gl.size() - 1), len(1, 3);
    std::uniform_int_distribution<int> coin(0, 1), k(1, 40);
    tempered::TemperedParamU s;
    for (std::size_t i = len(rng); i > 0; --i)
        s.gl.push_back({gl[pick(rng)], k(rng) / 16.0 + 0.0137 * double(i)});
    for (const auto& m : minus)
        if (coin(rng))
            s.anchor.push_back(m);
    return s;
}

} // namespace detail

/// Assembled Ad/As gamma factors against the brute-force character products, and the Asai
/// order at 0 against N.
inline Check assembly(const Options& o = {}) {
    using namespace tempered;
    using local::GammaFactor;
    const auto t0 = std::chrono::steady_clock::now();
    Check c{6, "assembly vs brute force (Ad, As, Ad_U), Asai order = N", false, "max relative error (archimedean)", 0,
            1e-10};
    std::mt19937_64 rng(o.seed);
    std::uniform_real_distribution<double> re(-2.5, 2.5), im(-4, 4);
    int cases = 0, padic = 0;
    auto run = [&](const BlockTable& t) {
        const bool exact = t.field().is_padic();
        for (int k = 0; k < 6; ++k) {
            const auto s = detail::generic_sigma(rng, t);
            const auto p = bc(s, s.rank(t), t);
            const auto ad = adjoint_gamma(p, t), as = asai_gamma(p, t), adu = adjoint_gamma_U(s, t);
            const auto bad = brute_force_adjoint(p, t), bas = brute_force_asai(p, t);
            const auto badu = bad / bas;
            const std::string lbl = t.field().label() + " " + p.label();
            if (exact && !(ad.factor->equals(bad) && as.factor->equals(bas) && adu.factor->equals(badu)))
                c.failures.push_back("structure " + lbl);
            for (int j = 0; j < 20; ++j) {
                const cplx z(re(rng), im(rng));
                const std::array<std::pair<const GammaFactor*, const GammaFactor*>, 3> routes{
                    {{&*ad.factor, &bad}, {&*as.factor, &bas}, {&*adu.factor, &badu}}};
                for (const auto& [x, y] : routes) {
                    const cplx a = (*x)(z), b = (*y)(z);
                    if (!std::isfinite(std::abs(a)) || !std::isfinite(std::abs(b)))
                        continue;
                    const double e = std::abs(a - b) / std::max(1.0, std::abs(b));
                    if (!exact)
                        c.value = std::max(c.value, e);
                    if (!(e < c.tolerance))
                        c.failures.push_back("value " + lbl + " error " + detail::fmt(e));
                }
            }
            const auto N = spectral_config(p, t).derive().N;
            if (as.order != int(N) || bas.order_at_zero() != int(N))
                c.failures.push_back("Asai order " + std::to_string(as.order) + " != N = " + std::to_string(N) + " for " + lbl);
            if (ad.order < as.order)
                c.failures.push_back("order_Ad < order_As for " + lbl);
            ++cases;
            padic += exact;
        }
    };
    run(detail::complex_table());
    for (unsigned q : {2u, 3u, 5u})
        run(detail::padic_table(q));
    c.detail = std::to_string(cases) + " parameters (" + std::to_string(padic) + " p-adic exact), 20 points each";
    c.pass = c.failures.empty() && cases >= 10;
    c.seconds = detail::since(t0);
    return c;
}

/// prod_{k=1}^n gamma(1 - k, eta^k) for n <= 10, finite, nonzero, exact rationals p-adically.
inline Check abelian_constant(const Options& = {}) {
    using namespace local;
    const auto t0 = std::chrono::steady_clock::now();
    Check c{7, "abelian constant prod gamma(1-k, eta^k), n <= 10", false, "n=2 q=3 value", 0, 0};
    std::vector<FieldData> fields{FieldData::real()};
    for (unsigned q : {2u, 3u, 5u, 7u})
        fields.push_back(FieldData::padic(q));
    for (const auto& f : fields)
        for (unsigned n = 1; n <= 10; ++n) {
            try {
                const auto r = abelian_gamma_product(n, f);
                if (!(std::isfinite(std::abs(r.value)) && std::abs(r.value) > 0))
                    c.failures.push_back(f.label() + " n=" + std::to_string(n) + " not finite nonzero");
                if (f.is_padic() && !r.exact)
                    c.failures.push_back(f.label() + " n=" + std::to_string(n) + " not exact");
            } catch (const std::exception& e) {
                c.failures.push_back(f.label() + " n=" + std::to_string(n) + ": " + e.what());
            }
        }
    const auto r = abelian_gamma_product(2, FieldData::padic(3));
    c.value = r.value.real();
    if (!r.exact || *r.exact != mpq_class(-27, 8))
        c.failures.push_back("n=2 q=3 is not -27/8");
    c.detail = "n=2 q=3 -> " + (r.exact ? r.exact->get_str() : std::string("?")) + "; R and q=2,3,5,7";
    c.pass = c.failures.empty();
    c.seconds = detail::since(t0);
    return c;
}

/// |S_pi| = 2^k n_1...n_k, |S_sigma| = 2^k, weyl_order = |W'| on a 20-case table.
inline Check combinatorial_orders(const Options& o = {}) {
    using namespace tempered;
    const auto t0 = std::chrono::steady_clock::now();
    Check c{8, "centralizer and Weyl orders on a 20-case table", false, "mismatches", 0, 0};
    BlockTable t(local::FieldData::real(), true);
    t.add_generic_pair("t", "t*", 2);
    t.add_generic_pair("u", "u*", 1);
    t.add_self_dual("mu", 3, AsaiType::plus);
    t.add_self_dual("mu2", 1, AsaiType::plus);
    t.add_self_dual("nu", 1, AsaiType::minus);
    t.add_self_dual("nu2", 2, AsaiType::minus);
    t.add_self_dual("nu3", 3, AsaiType::minus);
    const std::vector<std::string> gl{"t", "u", "u*", "mu", "mu2", "nu", "nu2"}, minus{"nu", "nu2", "nu3"};
    std::mt19937_64 rng(o.seed);
    std::uniform_int_distribution<int> mult(0, 2);
    int cases = 0;
    while (cases < 20) {
        TemperedParamU s;
        for (const auto& id : gl)
            for (int j = mult(rng); j > 0; --j)
                s.gl.push_back({id, 0});
        std::uint64_t two_k = 1;
        for (const auto& m : minus)
            if (mult(rng) == 0) {
                s.anchor.push_back(m);
                two_k *= 2;
            }
        if (s.gl.empty() && s.anchor.empty())
            continue;
        const auto p = bc(s, s.rank(t), t);
        std::uint64_t expect_pi = 1;
        for (const auto& e : p.entries)
            expect_pi *= 2 * t.block(e.block).d; // 2^k n_1...n_k
        const auto d = spectral_config(p, t).derive();
        bool ok = s_group_order(p, t) == expect_pi && weyl_order(s, t) == d.Wprime && weyl_order(p, t) == d.W;
        if (!s.anchor.empty())
            ok = ok && s_group_order(TemperedParamU{{}, s.anchor}, t) == two_k;
        if (!ok)
            c.failures.push_back(s.label());
        ++cases;
    }
    // the worked examples
    if (s_group_order(TemperedParamGL{{{"u", 0}, {"t", 0.2}}}, t) != 8 ||
        s_group_order(TemperedParamU{{}, {"nu", "nu2"}}, t) != 4 ||
        weyl_order(TemperedParamU{{{"mu2", 0}, {"mu2", 0}}, {}}, t) != 8 || weyl_order(TemperedParamU{{{"u", 0}}, {}}, t) != 1)
        c.failures.push_back("worked examples");
    c.value = double(c.failures.size());
    c.detail = std::to_string(cases) + " random cases + 4 worked examples";
    c.pass = c.failures.empty();
    c.seconds = detail::since(t0);
    return c;
}

/// Rank-one Archimedean Plancherel formula on the circle.
inline Check toy_plancherel(const Options& o = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    Check c{9, "toy Plancherel, n = 1, C/R, K = 64", false, "max relative error", 0, 1e-6};
    const auto r = toy::verify_theorem(10, 64, 1e-6, o.seed, 4096, o.jobs);
    c.value = r.max_rel_err;
    if (!(r.max_rel_err < 1e-6))
        c.failures.push_back("lhs vs rhs " + detail::fmt(r.max_rel_err));
    if (!(r.max_density_spread < 1e-8 && r.max_ratio_spread < 1e-8))
        c.failures.push_back("per-mode density not constant");
    if (!(std::abs(r.fitted_constant - 1 / (2 * pi)) < 1e-6))
        c.failures.push_back("fitted constant " + std::to_string(r.fitted_constant));
    double worst = 0;
    for (int k = -64; k <= 64; ++k)
        worst = std::max(worst, std::abs(toy::mode_density(k) - 1 / (2 * pi)));
    if (!(worst < 1e-12))
        c.failures.push_back("formal degree of a U(1) mode differs from 1/(2 pi)");
    c.seconds = detail::since(t0);
    if (c.seconds >= 30)
        c.failures.push_back("runtime " + detail::fmt(c.seconds) + " s exceeds 30 s");
    std::ostringstream os;
    os.precision(12);
    os << "fitted constant " << r.fitted_constant << " (1/(2 pi) = " << 1 / (2 * pi) << "), ratio spread "
       << r.max_ratio_spread << ", runtime " << detail::fmt(c.seconds) << " s";
    c.detail = os.str();
    c.pass = c.failures.empty();
    return c;
}

inline const std::vector<std::function<Check(const Options&)>>& all() {
    static const std::vector<std::function<Check(const Options&)>> v{
        symmetrization, starred_limits, pv_limits,       residual_distributions, gamma_suite,
        assembly,       abelian_constant, combinatorial_orders, toy_plancherel};
    return v;
}

/// Runs one check, turning an exception into a failed Check.
inline Check run(int id, const Options& o = {}) {
    if (id < 1 || id > int(all().size()))
        throw std::out_of_range("no criterion " + std::to_string(id));
    try {
        return all()[id - 1](o);
    } catch (const std::exception& e) {
        Check c;
        c.id = id;
        c.name = "criterion " + std::to_string(id);
        c.failures.push_back(std::string("error: ") + e.what());
        return c;
    }
}

inline std::string line(const Check& c) {
    std::ostringstream os;
    os.precision(3);
    os << "[" << (c.pass ? "PASS" : "FAIL") << "] " << c.id << ". " << c.name << " | " << c.metric << " = " << c.value;
    if (c.tolerance > 0)
        os << " (tol " << c.tolerance << ")";
    os << " | " << c.detail << " | " << c.seconds << " s";
    if (!c.failures.empty()) {
        os << " | first failure: " << c.failures.front();
        if (c.failures.size() > 1)
            os << " (+" << c.failures.size() - 1 << " more)";
    }
    return os.str();
}

} // namespace plancherel::verify
