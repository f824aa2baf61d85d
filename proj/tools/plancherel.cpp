// Command-line front end: verification suites and calculators with JSON reports.
// Exit code 0 iff the report status is "pass"; 1 for "fail", 2 for "error".

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "config.hpp"
#include "plancherel/identities.hpp"
#include "plancherel/localfactors.hpp"
#include "plancherel/pvlimits.hpp"
#include "plancherel/tempered.hpp"
#include "plancherel/toyplancherel.hpp"
#include "plancherel/verify.hpp"

using namespace plancherel;
using cli::json;
using local::cplx;

namespace {

struct Globals {
    unsigned jobs = default_jobs();
    std::uint64_t seed = 1;
    std::string out;
};

json complex_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

/// A numeric claim with its tolerance and achieved error.
json claim(const std::string& name, double value, double error, double tol) {
    return json{{"name", name}, {"value", value}, {"error", error}, {"tolerance", tol}, {"pass", error < tol}};
}

class Report {
  public:
    Report(std::string command, const Globals& g) : g_(g) {
        j_["command"] = std::move(command);
        j_["seed"] = g.seed;
        j_["jobs"] = g.jobs;
        j_["inputs"] = json::object();
        j_["metrics"] = json::array();
        j_["status"] = "pass";
    }

    json& inputs() { return j_["inputs"]; }
    json& root() { return j_; }
    void metric(json m) {
        if (m.contains("pass") && !m["pass"].get<bool>() && j_["status"] == "pass")
            j_["status"] = "fail";
        j_["metrics"].push_back(std::move(m));
    }
    void fail() {
        if (j_["status"] == "pass")
            j_["status"] = "fail";
    }
    void error(const std::string& what) {
        j_["status"] = "error";
        j_["message"] = what;
    }

    int emit() {
        j_["elapsed_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
        const std::string s = j_.dump(2);
        if (g_.out.empty()) {
            std::cout << s << std::endl;
        } else {
            std::ofstream(g_.out) << s << std::endl;
            std::cout << "status: " << j_["status"].get<std::string>() << " (report in " << g_.out << ")" << std::endl;
        }
        if (j_["status"] == "error")
            std::cerr << "error: " << j_["message"].get<std::string>() << std::endl;
        return j_["status"] == "pass" ? 0 : j_["status"] == "fail" ? 1 : 2;
    }

  private:
    json j_;
    const Globals& g_;
    std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

template <class F>
int guarded(Report& r, F&& f) {
    try {
        f();
    } catch (const std::exception& e) {
        r.error(e.what());
    }
    return r.emit();
}

// identities ------------------------------------------------------------------------------

struct IdentitiesArgs {
    std::string family = "PS";
    unsigned m = 1, n = 0, p = 0, q = 0;
    int points = 20;
};

int cmd_identities(const IdentitiesArgs& a, const Globals& g) {
    Report r("identities", g);
    return guarded(r, [&] {
        FamilySpec spec;
        if (a.family == "PS")
            spec = FamilySpec::ps(a.m, a.n);
        else if (a.family == "QT")
            spec = FamilySpec::qt(a.p);
        else if (a.family == "RU")
            spec = FamilySpec::ru(a.q);
        else
            throw std::invalid_argument("family must be PS, QT or RU");
        r.inputs() = {{"family", spec.label()}, {"points", a.points}};
        spec.validate();
        const auto sym = verify_symmetrization(spec);
        r.metric({{"name", "symmetrization"},
                  {"pass", sym.holds},
                  {"exact", true},
                  {"group_order", sym.group_order},
                  {"subgroup_order", sym.subgroup_order},
                  {"distinct_terms", sym.distinct_terms},
                  {"seconds", sym.elapsed}});
        const auto st = verify_starred_limits(spec, a.points, g.seed);
        r.metric({{"name", "starred_limits"},
                  {"pass", st.holds && st.polynomial_on_subspace},
                  {"exact", true},
                  {"limits_agree", st.limits_agree},
                  {"starred_agree", st.starred_agree},
                  {"polynomial_on_subspace", st.polynomial_on_subspace},
                  {"points", st.points},
                  {"seconds", st.elapsed}});
    });
}

// pv ----------------------------------------------------------------------------------------

TestFunction test_function(const json& j, std::size_t dim) {
    const std::string kind = j.is_string() ? j.get<std::string>() : j.value("kind", "gaussian");
    if (kind == "gaussian")
        return TestFunction::gaussian(dim, j.is_object() ? j.value("width", 1.0) : 1.0);
    if (kind == "lopsided")
        return verify::detail::lopsided(dim);
    throw std::invalid_argument("test function must be gaussian or lopsided");
}

int cmd_pv(const std::string& path, double tol, const std::vector<double>& grid_in, const Globals& g) {
    Report r("pv", g);
    return guarded(r, [&] {
        const json c = cli::load_json(path);
        r.inputs() = c;
        const auto grid = grid_in.empty() ? default_s_grid() : grid_in;
        r.inputs()["s_grid"] = grid;
        NumericOptions opt;
        opt.jobs = g.jobs;
        const std::string kind = c.value("kind", "residual");
        if (kind == "pv") {
            const auto h = c.at("h").get<std::vector<double>>();
            const auto phi = test_function(c.value("phi", json("gaussian")), h.size());
            const auto rep = pv_limit_check(h, phi, grid, opt);
            json m = claim("pv_limit", std::abs(rep.extrapolated), rep.rel_err, tol);
            m["extrapolated"] = complex_json(rep.extrapolated);
            m["target"] = complex_json(rep.target);
            m["fit_residual"] = rep.fit.residual;
            r.metric(m);
        } else if (kind == "residual") {
            const auto cfg = cli::spectral_config(c);
            const auto d = cfg.derive();
            auto phi = test_function(c.value("phi", json("lopsided")), d.S);
            phi = symmetrize(cfg, phi);
            const auto rep = verify_residual(cfg, phi, grid, opt);
            json m = claim("residual_" + rep.branch + "_branch", std::abs(rep.limit.extrapolated), rep.error, rep.tolerance);
            m["extrapolated"] = complex_json(rep.limit.extrapolated);
            m["target"] = complex_json(rep.limit.target);
            m["scale"] = rep.scale;
            m["fit_residual"] = rep.limit.fit.residual;
            m["derived"] = {{"S", d.S}, {"N", d.N}, {"c", d.c}, {"D", d.D}, {"W", d.W}, {"Wprime", d.Wprime}};
            r.metric(m);
        } else {
            throw std::invalid_argument("config kind must be pv or residual");
        }
    });
}

// factors -------------------------------------------------------------------------------------

struct FactorsArgs {
    bool real = false;
    unsigned padic = 0;
    std::string extension = "unramified";
    int conductor = 0;
    int psi_sign = -1;
    std::string eps_turn;
    std::string chr = "trivial";
    long weight = 0;
    std::string turn = "0";
    double u_re = 0, u_im = 0;
    bool induced = false;
    std::vector<double> s;
    bool star0 = false, lambda = false;
};

int cmd_factors(const FactorsArgs& a, const Globals& g) {
    Report r("factors", g);
    return guarded(r, [&] {
        json fj = a.padic ? json{{"kind", "padic"}, {"q", a.padic}, {"extension", a.extension}, {"conductor", a.conductor}}
                          : json{{"kind", "real"}, {"psi_sign", a.psi_sign}};
        if (!a.eps_turn.empty())
            fj["eta_epsilon_turn"] = a.eps_turn;
        const auto f = cli::field(fj);
        r.inputs() = {{"field", fj}, {"character", a.chr}};
        if (a.lambda) {
            const auto lam = local::lambda_factor(f);
            json m = {{"name", "lambda"}, {"value", complex_json(lam.value)}, {"fourth_power_error", std::abs(std::pow(lam.value, 4) - 1.0)}};
            if (lam.exact)
                m["exact"] = lam.exact->to_string(f.q);
            r.metric(m);
            return;
        }
        local::CharData chi;
        if (a.chr == "trivial")
            chi = local::CharData::trivial();
        else if (a.chr == "eta")
            chi = local::CharData::eta_char();
        else if (a.chr == "sign")
            chi = local::CharData::real_char(1, a.u_re, a.u_im);
        else if (a.chr == "F")
            chi = local::CharData::on_F(a.u_re, a.u_im);
        else if (a.chr == "E")
            chi = local::CharData::on_E(a.weight, a.u_re, a.u_im);
        else
            throw std::invalid_argument("character must be trivial, eta, sign, F or E");
        if (a.chr == "F" || a.chr == "E") {
            chi.turn = mpq_class(a.turn);
            chi.turn.canonicalize();
        }
        chi.validate(f);
        const auto gam = a.induced ? local::induced_gamma(chi, f) : local::tate_gamma(chi, f);
        r.inputs()["character"] = chi.label();
        r.inputs()["induced"] = a.induced;
        r.root()["gamma"] = gam.to_string();
        if (a.star0) {
            const auto st = gam.star_zero();
            json m = {{"name", "gamma_star_0"}, {"order", st.order}, {"value", complex_json(st.value)}};
            if (st.exact)
                m["exact"] = st.exact->get_str();
            r.metric(m);
        }
        if (!a.s.empty()) {
            const cplx s(a.s[0], a.s.size() > 1 ? a.s[1] : 0.0);
            const cplx v = gam(s);
            json m = {{"name", "gamma"}, {"s", complex_json(s)}, {"value", complex_json(v)}};
            if (s.imag() == 0 && s.real() == std::round(s.real()) && f.is_padic())
                if (const auto e = gam.exact_at_integer(long(s.real())))
                    m["exact"] = e->get_str();
            // functional equation at the same point
            const cplx fe = v * (a.induced ? local::induced_gamma(chi.inverse(), local::FieldData(f))
                                           : local::tate_gamma(chi.inverse(), f, true))(1.0 - s);
            if (!a.induced && std::isfinite(std::abs(fe)) && std::abs(v) > 0)
                m["functional_equation"] = claim("gamma(s) gamma(1-s, dual)", 1, std::abs(fe - 1.0), 1e-10);
            r.metric(m);
        }
        if (!a.star0 && a.s.empty())
            r.metric({{"name", "order_at_0"}, {"value", gam.order_at_zero()}});
    });
}

// tempered ------------------------------------------------------------------------------------

json gamma_terms(const tempered::Assembled& a, const tempered::BlockTable& t) {
    json v = json::array();
    for (const auto& tm : a.terms)
        v.push_back({{"handle", tm.key.to_string()},
                     {"shift", tm.shift.get_d()},
                     {"exp", tm.exp},
                     {"provenance", t.provenance(tm.key)}});
    return v;
}

struct TemperedArgs {
    std::string params;
    std::string query = "density";
    unsigned n = 1;
    int disc = 1;
    double tau = 1;
    int omega = 1;
};

int cmd_tempered(const TemperedArgs& a, const Globals& g) {
    using namespace tempered;
    Report r("tempered", g);
    return guarded(r, [&] {
        r.inputs() = {{"query", a.query}, {"params", a.params}};
        if (a.query == "kappa") {
            const json pj = a.params.empty() ? json::object() : cli::load_json(a.params);
            const auto f = cli::field(pj.value("field", json::object()));
            const unsigned n = pj.value("n", a.n);
            const int disc = pj.value("disc", a.disc);
            const double tau = pj.value("tau", a.tau);
            const auto choice = f.is_padic() ? tau_padic_unramified(f.q, long(tau)) : tau_archimedean(n, tau);
            if (f.is_padic() && f.ext != local::Extension::unramified)
                throw std::invalid_argument("kappa: p-adic tau choice supports unramified E only");
            const auto k = kappa_V(n, disc, f, choice);
            r.inputs()["n"] = n;
            r.inputs()["disc"] = disc;
            r.inputs()["tau"] = tau;
            const double modulus = std::pow(choice.abs_tau_E, double(n * (n - 1)) / 4.0);
            json m = claim("kappa_V modulus", std::abs(k.value), std::abs(std::abs(k.value) - modulus), 1e-12);
            m["kappa"] = complex_json(k.value);
            m["phase"] = complex_json(k.phase);
            m["phase_order"] = k.phase_order;
            r.metric(m);
            return;
        }
        const json pj = cli::load_json(a.params);
        const auto t = cli::block_table(pj);
        r.inputs()["field"] = t.field().label();
        r.inputs()["formal"] = t.formal();
        std::optional<TemperedParamGL> pi;
        std::optional<TemperedParamU> sigma;
        if (pj.contains("gl"))
            pi = cli::gl_param(pj["gl"]);
        if (pj.contains("u"))
            sigma = cli::u_param(pj["u"]);
        std::optional<TemperedParamU> discrete;
        if (pj.contains("discrete"))
            discrete = cli::u_param(pj["discrete"]);
        auto need_pi = [&] {
            if (!pi)
                throw std::invalid_argument("query " + a.query + " needs a 'gl' parameter");
            return *pi;
        };
        auto need_sigma = [&] {
            if (!sigma)
                throw std::invalid_argument("query " + a.query + " needs a 'u' parameter");
            return *sigma;
        };
        if (a.query == "density") {
            const auto p = need_pi();
            const auto d = plancherel_density(p, t);
            json m = {{"name", "plancherel_density"}, {"formula", d.formula}, {"s_order", d.s_order}, {"ad_order", d.ad_order}};
            if (d.value) {
                m["value"] = complex_json(*d.value);
                m["positivity"] = claim("imaginary part / modulus", d.value->real(), std::abs(d.value->imag()) / std::abs(*d.value), 1e-9);
                if (!(d.value->real() > 0))
                    r.fail();
            }
            m["gamma_terms"] = gamma_terms(adjoint_gamma(p, t), t);
            r.metric(m);
        } else if (a.query == "degree") {
            const auto s = discrete ? *discrete : need_sigma();
            const auto d = formal_degree(s, t);
            json m = {{"name", "formal_degree"}, {"formula", d.formula}, {"s_order", d.s_order}};
            if (d.value)
                m["value"] = *d.value;
            m["parameter"] = s.label();
            m["gamma_terms"] = gamma_terms(adjoint_gamma_U(s, t), t);
            r.metric(m);
        } else if (a.query == "phase") {
            const auto c = c_sigma_phase(need_sigma(), t, a.omega);
            r.metric({{"name", "c_sigma"},
                      {"c", complex_json(c.c)},
                      {"c1", complex_json(c.c1)},
                      {"c1_is_sign", c.c1_is_sign},
                      {"gamma_star", complex_json(c.gamma_star)},
                      {"unimodular", claim("|c|", std::abs(c.c), std::abs(std::abs(c.c) - 1), 1e-12)}});
        } else if (a.query == "sgroup") {
            if (pi)
                r.metric({{"name", "S_pi"}, {"parameter", pi->label()}, {"value", s_group_order(*pi, t)}});
            if (sigma)
                r.metric({{"name", "S_sigma"}, {"parameter", sigma->label()}, {"value", s_group_order(*sigma, t)}});
            if (!pi && !sigma)
                throw std::invalid_argument("sgroup needs a 'gl' or 'u' parameter");
        } else if (a.query == "weyl") {
            if (pi)
                r.metric({{"name", "W_pi"}, {"parameter", pi->label()}, {"value", weyl_order(*pi, t)}});
            if (sigma)
                r.metric({{"name", "W_sigma"}, {"parameter", sigma->label()}, {"value", weyl_order(*sigma, t)}});
            if (!pi && !sigma)
                throw std::invalid_argument("weyl needs a 'gl' or 'u' parameter");
        } else if (a.query == "bc") {
            const auto s = need_sigma();
            const auto p = bc(s, s.rank(t), t);
            json e = json::array();
            for (const auto& x : p.entries)
                e.push_back({x.block, x.twist});
            r.metric({{"name", "bc"}, {"parameter", s.label()}, {"entries", e}, {"eta_twist", p.eta_twist}, {"label", p.label()}});
        } else if (a.query == "image") {
            const auto res = in_bc_image(need_pi(), t);
            json m = {{"name", "in_bc_image"}, {"value", res.in_image}};
            if (res.witness)
                m["witness"] = res.witness->label();
            else
                m["reason"] = res.reason;
            r.metric(m);
        } else {
            throw std::invalid_argument("query must be density, degree, phase, sgroup, weyl, bc, image or kappa");
        }
    });
}

// toy ---------------------------------------------------------------------------------------

struct ToyArgs {
    int K = 64, nodes = 4096, trials = 10;
    double tol = 1e-6;
    std::string pair = "random";
};

int cmd_toy(const ToyArgs& a, const Globals& g) {
    using std::numbers::pi;
    Report r("toy", g);
    return guarded(r, [&] {
        r.inputs() = {{"K", a.K}, {"nodes", a.nodes}, {"trials", a.trials}, {"pair", a.pair}, {"tolerance", a.tol}};
        if (a.pair == "random") {
            const auto rep = toy::verify_theorem(a.trials, a.K, a.tol, g.seed, a.nodes, g.jobs);
            r.metric(claim("lhs vs rhs (max relative)", rep.max_rel_err, rep.max_rel_err, a.tol));
            json fit = claim("fitted constant", rep.fitted_constant, std::abs(rep.fitted_constant - rep.expected_constant), a.tol);
            fit["expected"] = rep.expected_constant;
            r.metric(fit);
            r.metric(claim("per-mode density spread", rep.max_density_spread, rep.max_density_spread, 1e-8));
            r.metric(claim("per-mode ratio spread", rep.max_ratio_spread, rep.max_ratio_spread, 1e-8));
            r.metric({{"name", "positivity"}, {"min_rhs_phi_phi", rep.min_self_rhs}, {"pass", rep.min_self_rhs >= 0}});
            r.metric({{"name", "coefficient decay"}, {"pass", rep.decay_ok}});
            return;
        }
        toy::CircleFunction::Eval f;
        if (a.pair == "constants")
            f = [](double) { return cplx(1); };
        else if (a.pair == "cos2")
            f = [](double t) { return cplx(std::cos(2 * t)); };
        else
            throw std::invalid_argument("pair must be random, constants or cos2");
        const toy::CircleFunction phi(f, a.K, a.nodes);
        const cplx lhs = toy::lhs_inner(phi, phi, a.nodes), rhs = toy::rhs_spectral(phi, phi, a.K);
        json m = claim("lhs vs rhs", lhs.real(), std::abs(lhs - rhs) / std::abs(lhs), a.tol);
        m["lhs"] = complex_json(lhs);
        m["rhs"] = complex_json(rhs);
        if (!(std::abs(lhs - rhs) / std::abs(lhs) < a.tol))
            m["note"] = "truncation: the input has modes beyond K";
        r.metric(m);
    });
}

// verify-all ----------------------------------------------------------------------------------

int cmd_verify_all(const std::vector<int>& only, const Globals& g) {
    Report r("verify-all", g);
    return guarded(r, [&] {
        verify::Options o;
        o.jobs = g.jobs;
        o.seed = g.seed;
        std::vector<int> ids = only;
        if (ids.empty())
            for (int i = 1; i <= int(verify::all().size()); ++i)
                ids.push_back(i);
        r.inputs() = {{"criteria", ids}};
        for (int id : ids) {
            const auto c = verify::run(id, o);
            std::cerr << verify::line(c) << std::endl;
            r.metric({{"name", c.name},
                      {"criterion", c.id},
                      {"pass", c.pass},
                      {"metric", c.metric},
                      {"value", c.value},
                      {"tolerance", c.tolerance},
                      {"detail", c.detail},
                      {"seconds", c.seconds},
                      {"failures", c.failures}});
        }
    });
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Plancherel toolkit: exact identities, PV limits, gamma factors, tempered parameters"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--jobs", g.jobs, "worker threads (default: PLANCHEREL_JOBS or 1)")->check(CLI::PositiveNumber);
    app.add_option("--seed", g.seed, "random seed");
    app.add_option("--out", g.out, "write the JSON report to this file");

    IdentitiesArgs ia;
    auto* id = app.add_subcommand("identities", "exact symmetrization and starred-limit identities");
    id->add_option("--family", ia.family, "PS, QT or RU")->check(CLI::IsMember({"PS", "QT", "RU"}));
    id->add_option("--m", ia.m, "PS: size of the first group");
    id->add_option("--n", ia.n, "PS: size of the second group");
    id->add_option("--p", ia.p, "QT size");
    id->add_option("--q", ia.q, "RU size");
    id->add_option("--points", ia.points, "random rational points for the starred limits");

    std::string pv_config;
    double pv_tol = 1e-3;
    std::vector<double> pv_grid;
    auto* pv = app.add_subcommand("pv", "PV limits and residual distributions from a JSON config");
    pv->add_option("config", pv_config, "config file")->required()->check(CLI::ExistingFile);
    pv->add_option("--tol", pv_tol, "relative tolerance for pv configs");
    pv->add_option("--s-grid", pv_grid, "decreasing s values (default 0.0125 * 2^-j, j = 0..5)")->delimiter(',');

    FactorsArgs fa;
    auto* fc = app.add_subcommand("factors", "local gamma, L and epsilon factors");
    auto* fr = fc->add_flag("--real", fa.real, "E/F = C/R");
    auto* fp = fc->add_option("--padic", fa.padic, "p-adic with residue field size q");
    fr->excludes(fp);
    fc->add_option("--extension", fa.extension, "unramified or ramified")->check(CLI::IsMember({"unramified", "ramified"}));
    fc->add_option("--conductor", fa.conductor, "conductor exponent of psi'");
    fc->add_option("--psi-sign", fa.psi_sign, "archimedean psi'(x) = exp(psi_sign 2 pi i x)");
    fc->add_option("--eta-epsilon-turn", fa.eps_turn, "ramified E: epsilon(1/2, eta) = exp(2 pi i turn)");
    fc->add_option("--char", fa.chr, "trivial, eta, sign, F or E");
    fc->add_option("--weight", fa.weight, "E over C: weight");
    fc->add_option("--turn", fa.turn, "p-adic unramified part, a rational");
    fc->add_option("--u-re", fa.u_re, "real part of the exponent");
    fc->add_option("--u-im", fa.u_im, "imaginary part of the exponent");
    fc->add_flag("--induced", fa.induced, "gamma of the induced parameter (character of E)");
    fc->add_option("--s", fa.s, "evaluate at s = re[,im]")->delimiter(',')->expected(1, 2);
    fc->add_flag("--star0", fa.star0, "regularized value and order at s = 0");
    fc->add_flag("--lambda", fa.lambda, "the Langlands constant lambda_{E/F}(psi')");

    TemperedArgs ta;
    auto* tp = app.add_subcommand("tempered", "tempered parameters, densities, formal degrees, constants");
    tp->add_option("--params", ta.params, "parameter file");
    tp->add_option("--query", ta.query, "density, degree, phase, sgroup, weyl, bc, image or kappa");
    tp->add_option("--n", ta.n, "kappa: rank");
    tp->add_option("--disc", ta.disc, "kappa: sign of the discriminant");
    tp->add_option("--tau", ta.tau, "kappa: tau = i t on C/R, or its valuation p-adically");
    tp->add_option("--omega", ta.omega, "phase: omega_sigma(-1)");

    ToyArgs ya;
    auto* ty = app.add_subcommand("toy", "rank-one Plancherel formula on the circle");
    ty->add_option("--K", ya.K, "mode cutoff")->check(CLI::NonNegativeNumber);
    ty->add_option("--nodes", ya.nodes, "quadrature nodes");
    ty->add_option("--trials", ya.trials, "random test pairs");
    ty->add_option("--tol", ya.tol, "relative tolerance");
    ty->add_option("--pair", ya.pair, "random, constants or cos2");

    std::vector<int> only;
    auto* va = app.add_subcommand("verify-all", "the acceptance matrix, one aggregated report");
    va->add_option("--only", only, "criterion ids")->delimiter(',');

    CLI11_PARSE(app, argc, argv);
    if (id->parsed())
        return cmd_identities(ia, g);
    if (pv->parsed())
        return cmd_pv(pv_config, pv_tol, pv_grid, g);
    if (fc->parsed()) {
        if (!fa.real && fa.padic == 0)
            fa.real = true;
        return cmd_factors(fa, g);
    }
    if (tp->parsed())
        return cmd_tempered(ta, g);
    if (ty->parsed())
        return cmd_toy(ya, g);
    return cmd_verify_all(only, g);
}
