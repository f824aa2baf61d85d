#pragma once

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "plancherel/identities.hpp"
#include "plancherel/kernel.hpp"
#include "plancherel/parallel.hpp"
#include "plancherel/testfunction.hpp"

namespace plancherel {

using cplx = std::complex<double>;

/// s_j = 0.0125 * 2^-j, j = 0..5.
inline std::vector<double> default_s_grid() {
    std::vector<double> g;
    for (int j = 0; j < 6; ++j)
        g.push_back(0.0125 * std::ldexp(1.0, -j));
    return g;
}

/// s_j = 0.2 * 2^-j, j = 0..5. Too coarse for 1e-3 agreement beyond two dimensions.
inline std::vector<double> coarse_s_grid() {
    std::vector<double> g;
    for (int j = 0; j < 6; ++j)
        g.push_back(0.2 * std::ldexp(1.0, -j));
    return g;
}

inline void check_s_grid(const std::vector<double>& s) {
    if (s.size() < 5)
        throw std::invalid_argument("s grid needs at least 5 points");
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!(s[i] > 0))
            throw std::invalid_argument("s grid values must be positive");
        if (i > 0 && !(s[i] < s[i - 1]))
            throw std::invalid_argument("s grid must be strictly decreasing");
    }
}

struct Extrapolation {
    cplx value;                     // A
    std::vector<cplx> coefficients; // A, B, C, D
    double residual = 0;            // max |fit - sample|
};

/// Least-squares fit of A + B s + C s log(1/s) + D s^2; A is the s -> 0+ limit.
inline Extrapolation extrapolate(const std::vector<double>& s, const std::vector<cplx>& v) {
    check_s_grid(s);
    const Eigen::Index rows = static_cast<Eigen::Index>(s.size());
    Eigen::MatrixXd M(rows, 4), rhs(rows, 2);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const double x = s[static_cast<std::size_t>(i)];
        M(i, 0) = 1;
        M(i, 1) = x;
        M(i, 2) = x * std::log(1 / x);
        M(i, 3) = x * x;
        rhs(i, 0) = v[static_cast<std::size_t>(i)].real();
        rhs(i, 1) = v[static_cast<std::size_t>(i)].imag();
    }
    const Eigen::MatrixXd c = M.colPivHouseholderQr().solve(rhs);
    Extrapolation e;
    for (int j = 0; j < 4; ++j)
        e.coefficients.emplace_back(c(j, 0), c(j, 1));
    e.value = e.coefficients[0];
    const Eigen::MatrixXd fit = M * c;
    for (Eigen::Index i = 0; i < rows; ++i)
        e.residual = std::max(e.residual, std::hypot(fit(i, 0) - rhs(i, 0), fit(i, 1) - rhs(i, 1)));
    return e;
}

struct NumericOptions {
    double rel_tol = 1e-6;
    std::size_t max_intervals = 3000;
    unsigned jobs = 1;
};

inline double truncation_radius(const TestFunction& phi) { return 8.0 / std::sqrt(phi.min_width()); }

/// PV of int_{iR} phi(x)/x dx for the Lebesgue measure dt on x = it, i.e.
/// -i int_0^inf (phi(it) - phi(-it))/t dt. Exactly 0 for even phi.
inline cplx pv_integral(const TestFunction& phi, double rel_tol = 1e-11) {
    if (phi.dim() != 1)
        throw std::invalid_argument("pv_integral needs a one-dimensional test function");
    auto f = [&](double t) {
        const double p = t, m = -t;
        return (phi(std::span<const double>(&p, 1)) - phi(std::span<const double>(&m, 1))) / t;
    };
    const double T = truncation_radius(phi);
    std::vector<double> mesh{0.0};
    for (double x = T / 64; x < T; x *= 2)
        mesh.push_back(x);
    mesh.push_back(T);
    quad::Options o;
    o.rel_tol = rel_tol;
    o.abs_tol = 1e-15;
    const auto r = quad::integrate(f, mesh, o);
    if (!r.converged)
        throw convergence_error("principal value quadrature did not converge", r.error);
    return cplx(0, -1) * r.value;
}

/// int_{iR} phi(x)/(x + s) dx, which tends to PV + pi phi(0) as s -> 0+.
inline cplx shifted_integral(const TestFunction& phi, double s, double rel_tol = 1e-10) {
    if (phi.dim() != 1)
        throw std::invalid_argument("shifted_integral needs a one-dimensional test function");
    KernelIntegrand k;
    k.dim = 1;
    k.ambient = 1;
    k.embedding = {{1.0}};
    k.atoms.push_back({{1.0}, 1.0, -1});
    k.phi = [&](std::span<const double> t) { return phi(t); };
    k.half_width = truncation_radius(phi);
    KernelOptions o;
    o.rel_tol = rel_tol;
    o.abs_tol = 1e-14;
    return integrate_kernel(k, s, o).value;
}

struct LimitReport {
    std::string label;
    std::vector<double> s_grid;
    std::vector<cplx> samples; // s * integral at each s
    Extrapolation fit;
    cplx extrapolated;
    cplx target;
    double rel_err = 0;
    std::size_t evaluations = 0;
    double elapsed = 0;
};

namespace detail {

/// s * (integral at s) over the grid, run in parallel over s; the magnitude of a
/// cheap pass at the largest s sets the absolute tolerance of the others.
inline std::vector<cplx> scaled_samples(const KernelIntegrand& k, const std::vector<double>& grid,
                                        const NumericOptions& opt, std::size_t& evaluations) {
    KernelOptions coarse;
    coarse.rel_tol = 1e-3;
    coarse.abs_tol = 0;
    coarse.max_intervals = 200;
    const auto probe = integrate_kernel(k, grid.front(), coarse);
    const double scale = std::max(std::abs(probe.value) * grid.front(), 1e-300);
    std::vector<cplx> out(grid.size());
    std::vector<std::size_t> evals(grid.size());
    parallel_for(grid.size(), opt.jobs, [&](std::size_t i) {
        KernelOptions o;
        o.rel_tol = opt.rel_tol;
        o.abs_tol = opt.rel_tol * scale / grid[i];
        o.max_intervals = opt.max_intervals;
        const auto r = integrate_kernel(k, grid[i], o);
        if (!std::isfinite(r.value.real()) || !std::isfinite(r.value.imag()))
            throw pole_error("integrand pole hit at a quadrature node; use a larger s");
        out[i] = grid[i] * r.value;
        evals[i] = r.evaluations;
    });
    evaluations = probe.evaluations + std::accumulate(evals.begin(), evals.end(), std::size_t{0});
    return out;
}

} // namespace detail

/// s * int_{(iR^n)_0} phi(x) / prod(x_i/h_i + s) dx against (prod h / sum h)(2 pi)^{n-1} phi(0).
/// (iR^n)_0 is parametrized by t_1..t_{n-1} with t_n = -sum; the quotient by the sum
/// map is then Lebesgue, so the Haar measure is dt_1...dt_{n-1}.
inline LimitReport pv_limit_check(const std::vector<double>& h, const TestFunction& phi,
                                  const std::vector<double>& s_grid = default_s_grid(),
                                  const NumericOptions& opt = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t n = h.size();
    if (n < 1)
        throw std::invalid_argument("pv_limit_check needs at least one weight");
    if (n > 4)
        throw cap_error("pv_limit_check supports n <= 4 (quadrature dimension cap)");
    for (double x : h)
        if (!(x > 0))
            throw std::invalid_argument("weights h must be positive");
    if (phi.dim() != n)
        throw std::invalid_argument("test function dimension does not match h");
    check_s_grid(s_grid);

    KernelIntegrand k;
    k.dim = n - 1;
    k.ambient = n;
    k.embedding = KernelIntegrand::hyperplane_embedding(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> c(n, 0.0);
        c[i] = 1.0 / h[i];
        k.atoms.push_back({k.pull_back(c), 1.0, -1});
    }
    k.phi = [&](std::span<const double> t) { return phi(t); };
    k.half_width = truncation_radius(phi);

    LimitReport rep;
    rep.label = "pv n=" + std::to_string(n);
    rep.s_grid = s_grid;
    rep.samples = detail::scaled_samples(k, s_grid, opt, rep.evaluations);
    rep.fit = extrapolate(s_grid, rep.samples);
    rep.extrapolated = rep.fit.value;
    const double prod = std::accumulate(h.begin(), h.end(), 1.0, std::multiplies<>());
    const double sum = std::accumulate(h.begin(), h.end(), 0.0);
    rep.target = prod / sum * std::pow(2 * std::numbers::pi, static_cast<double>(n - 1)) * phi.at_origin();
    rep.rel_err = std::abs(rep.extrapolated - rep.target) / std::abs(rep.target);
    rep.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

/// Configuration data of the residual distributions: blocks of the three family kinds,
/// each with a scale. Variables of A are ordered block by block, PS blocks first.
struct SpectralConfig {
    struct PSBlock {
        unsigned m, n, d;
    };
    struct QTBlock {
        unsigned p, e;
    };
    struct RUBlock {
        unsigned q, f;
    };
    std::vector<PSBlock> ps;
    std::vector<QTBlock> qt;
    std::vector<RUBlock> ru;

    struct Derived {
        std::size_t S = 0;   // dim A
        std::uint64_t n = 0; // sum of sizes times scales
        unsigned N = 0;
        unsigned c = 0;
        double D = 1;
        std::uint64_t W = 1;
        std::uint64_t Wprime = 1;
        bool operator==(const Derived&) const = default;
    };

    void validate() const {
        if (ps.empty() && qt.empty() && ru.empty())
            throw std::invalid_argument("configuration has no blocks");
        for (const auto& b : ps)
            if (b.m < 1 || b.m < b.n || b.d < 1)
                throw std::invalid_argument("PS block needs m >= 1, m >= n, d >= 1");
        for (const auto& b : qt)
            if (b.p < 1 || b.e < 1)
                throw std::invalid_argument("QT block needs p >= 1, e >= 1");
        for (const auto& b : ru)
            if (b.q < 1 || b.f < 1)
                throw std::invalid_argument("RU block needs q >= 1, f >= 1");
    }

    Derived derive() const {
        validate();
        Derived r;
        for (const auto& b : ps) {
            r.S += b.m + b.n;
            r.n += std::uint64_t{b.m + b.n} * b.d;
            r.N += b.n;
            r.D *= std::pow(double(b.d), double(b.n));
            r.W *= factorial(b.m) * factorial(b.n);
            r.Wprime *= factorial(b.n) * factorial(b.m - b.n);
        }
        for (const auto& b : qt) {
            r.S += b.p;
            r.n += std::uint64_t{b.p} * b.e;
            r.N += b.p / 2;
            r.D *= std::pow(double(b.e), b.p / 2.0);
            r.W *= factorial(b.p);
            r.Wprime *= factorial(b.p / 2) << (b.p / 2);
        }
        for (const auto& b : ru) {
            r.S += b.q;
            r.n += std::uint64_t{b.q} * b.f;
            r.N += (b.q + 1) / 2;
            r.c += b.q % 2;
            r.D *= std::pow(double(b.f), double((b.q + 1) / 2));
            r.W *= factorial(b.q);
            r.Wprime *= factorial(b.q / 2) << (b.q / 2);
        }
        return r;
    }

    /// All m_i = n_i and all p_j even.
    bool nonzero_branch() const {
        for (const auto& b : ps)
            if (b.m != b.n)
                return false;
        for (const auto& b : qt)
            if (b.p % 2)
                return false;
        return true;
    }

    struct Block {
        FamilySpec spec;
        unsigned scale;
        std::size_t offset;
    };

    std::vector<Block> blocks() const {
        std::vector<Block> out;
        std::size_t off = 0;
        for (const auto& b : ps) {
            out.push_back({FamilySpec::ps(b.m, b.n), b.d, off});
            off += b.m + b.n;
        }
        for (const auto& b : qt) {
            out.push_back({FamilySpec::qt(b.p), b.e, off});
            off += b.p;
        }
        for (const auto& b : ru) {
            out.push_back({FamilySpec::ru(b.q), b.f, off});
            off += b.q;
        }
        return out;
    }

    /// The product group W acting on A, as ambient variable maps.
    std::vector<std::vector<std::size_t>> group(std::uint64_t limit = 3628800) const {
        const auto bl = blocks();
        std::uint64_t total = 1;
        for (const auto& b : bl)
            total *= b.spec.group_order();
        if (total > limit)
            throw cap_error("group enumeration needs " + std::to_string(total) + " elements, limit is " +
                            std::to_string(limit));
        std::vector<std::vector<std::size_t>> out{{}};
        for (const auto& b : bl) {
            std::vector<std::vector<std::size_t>> next;
            for (const auto& prefix : out)
                for (const auto& w : enumerate_group(b.spec)) {
                    auto v = prefix;
                    for (auto x : w)
                        v.push_back(b.offset + x);
                    next.push_back(std::move(v));
                }
            out = std::move(next);
        }
        return out;
    }

    std::string label() const {
        std::string s = "(r=" + std::to_string(ps.size()) + ",s=" + std::to_string(qt.size()) +
                        ",t=" + std::to_string(ru.size());
        for (const auto& b : ps)
            s += "; m=" + std::to_string(b.m) + ",n=" + std::to_string(b.n) + ",d=" + std::to_string(b.d);
        for (const auto& b : qt)
            s += "; p=" + std::to_string(b.p) + ",e=" + std::to_string(b.e);
        for (const auto& b : ru)
            s += "; q=" + std::to_string(b.q) + ",f=" + std::to_string(b.f);
        return s + ")";
    }
};

/// Average of phi over W; radially symmetric Gaussians are already invariant.
inline TestFunction symmetrize(const SpectralConfig& cfg, const TestFunction& phi) {
    return phi.averaged(cfg.group());
}

/// The integrand of D_s as a kernel over the hyperplane sum = 0 of A: each family
/// member is a product of linear forms, and x -> x/d + s/2 turns a form with
/// coefficients a into a/d on x plus (sum a)/2 on s.
inline KernelIntegrand ds_integrand(const SpectralConfig& cfg, const TestFunction& phi) {
    const auto der = cfg.derive();
    if (phi.dim() != der.S)
        throw std::invalid_argument("test function dimension does not match the configuration");
    if (der.S - 1 > 3)
        throw cap_error("D_s needs dim A_0 <= 3 (quadrature dimension cap)");
    KernelIntegrand k;
    k.ambient = der.S;
    k.dim = der.S - 1;
    k.embedding = KernelIntegrand::hyperplane_embedding(der.S);
    double scalar = 1;
    for (const auto& b : cfg.blocks()) {
        const RatFun f = build(b.spec, Variant::sym);
        scalar *= f.scalar().get_d();
        for (const auto& fac : f.factors()) {
            if (fac.poly.total_degree() != 1)
                throw std::logic_error("family member is not a product of linear forms");
            std::vector<double> amb(der.S, 0.0);
            double shift = 0;
            for (const auto& t : fac.poly.terms()) {
                if (t.mono.is_one())
                    throw std::logic_error("family member has an affine factor");
                std::size_t v = 0;
                while (t.mono[v] == 0)
                    ++v;
                const double a = t.coeff.get_d();
                amb[b.offset + v] = a / b.scale;
                shift += a / 2;
            }
            k.atoms.push_back({k.pull_back(amb), shift, fac.exp});
        }
    }
    k.scalar = scalar;
    k.phi = [phi](std::span<const double> t) { return phi(t); };
    k.half_width = truncation_radius(phi);
    return k;
}

inline cplx eval_Ds(const SpectralConfig& cfg, const TestFunction& phi, double s, const NumericOptions& opt = {}) {
    if (!(s > 0))
        throw std::invalid_argument("s must be positive");
    const auto k = ds_integrand(cfg, phi);
    KernelOptions o;
    o.rel_tol = opt.rel_tol;
    o.max_intervals = opt.max_intervals;
    o.abs_tol = 1e-12 / s;
    const auto r = integrate_kernel(k, s, o);
    if (!std::isfinite(r.value.real()) || !std::isfinite(r.value.imag()))
        throw pole_error("integrand pole hit at a quadrature node; use a larger s");
    return r.value;
}

namespace detail {

/// int_R t^k exp(-b t^2) dt
inline double gaussian_moment(double b, unsigned k) {
    if (k % 2)
        return 0;
    return std::tgamma((k + 1) / 2.0) / std::pow(b, (k + 1) / 2.0);
}

/// Polynomial with complex rational coefficients as (real, imaginary) parts.
struct ComplexPoly {
    MultiPoly re, im;
    ComplexPoly operator*(const ComplexPoly& o) const { return {re * o.re - im * o.im, re * o.im + im * o.re}; }
};

} // namespace detail

struct DprimeValue {
    cplx value;
    cplx integral;     // int_{A'} phi * starred product
    double prefactor;  // (D/n)(2 pi)^{N-1} 2^{1-c}
    std::size_t dim = 0; // dim A'
};

/// D'(phi), with the A' integral of (Gaussian x polynomial) done in closed form by
/// Gaussian moments. On A' each coordinate of A is +-1 times a coordinate of A' or 0,
/// so Gaussian widths stay diagonal.
inline DprimeValue eval_Dprime(const SpectralConfig& cfg, const TestFunction& phi) {
    const auto der = cfg.derive();
    if (phi.dim() != der.S)
        throw std::invalid_argument("test function dimension does not match the configuration");
    std::vector<std::optional<Alias>> aliases(der.S);
    std::vector<std::size_t> survivor_index(der.S, 0);
    std::size_t dim = 0;
    for (const auto& b : cfg.blocks()) {
        const auto local = subspace_aliases(b.spec);
        for (std::size_t v = 0; v < local.size(); ++v)
            if (local[v])
                aliases[b.offset + v] = Alias{local[v]->target + b.offset, local[v]->sign};
    }
    for (std::size_t v = 0; v < der.S; ++v)
        if (!aliases[v])
            survivor_index[v] = dim++;
    if (dim > 3)
        throw cap_error("D' needs dim A' <= 3");

    // starred product in the A' coordinates t (x = i t), with x -> x/scale
    detail::ComplexPoly star{MultiPoly::constant(dim, 1), MultiPoly(dim)};
    for (const auto& b : cfg.blocks()) {
        const auto local = subspace_aliases(b.spec);
        const auto p = build_starred(b.spec, Variant::sym).restricted(local).as_polynomial();
        if (!p)
            throw std::logic_error("starred form is not polynomial on the subspace");
        std::vector<std::size_t> place; // local survivor -> A' index
        for (std::size_t v = 0; v < local.size(); ++v)
            if (!local[v])
                place.push_back(survivor_index[b.offset + v]);
        std::vector<std::pair<std::vector<unsigned>, mpq_class>> re, im;
        for (const auto& t : p->terms()) {
            std::vector<unsigned> e(dim, 0);
            unsigned deg = 0;
            for (std::size_t v = 0; v < place.size(); ++v) {
                e[place[v]] = t.mono[v];
                deg += t.mono[v];
            }
            mpq_class c = t.coeff;
            for (unsigned j = 0; j < deg; ++j)
                c /= b.scale;
            // i^deg
            if (deg % 4 == 2 || deg % 4 == 3)
                c = -c;
            (deg % 2 ? im : re).emplace_back(std::move(e), std::move(c));
        }
        star = star * detail::ComplexPoly{MultiPoly::from_exponents(dim, re), MultiPoly::from_exponents(dim, im)};
    }

    cplx integral = 0;
    for (const auto& term : phi.terms()) {
        const MultiPoly p = term.poly.substituted(aliases); // survivors renumbered densely in order
        std::vector<double> b(dim, 0.0);
        for (std::size_t v = 0; v < der.S; ++v) {
            if (!aliases[v])
                b[survivor_index[v]] += term.widths[v];
            else if (aliases[v]->sign != 0)
                b[survivor_index[aliases[v]->target]] += term.widths[v];
        }
        auto integrate = [&](const MultiPoly& q) {
            double total = 0;
            for (const auto& t : q.terms()) {
                double m = t.coeff.get_d();
                for (std::size_t v = 0; v < dim; ++v)
                    m *= detail::gaussian_moment(b[v], t.mono[v]);
                total += m;
            }
            return total;
        };
        integral += term.coeff * cplx(integrate(p * star.re), integrate(p * star.im));
    }
    DprimeValue out;
    out.integral = integral;
    out.prefactor = der.D / static_cast<double>(der.n) * std::pow(2 * std::numbers::pi, double(der.N) - 1) *
                    std::pow(2.0, 1.0 - der.c);
    out.value = out.prefactor * integral;
    out.dim = dim;
    return out;
}

struct ResidualReport {
    LimitReport limit;
    std::string branch; // "nonzero" or "zero"
    double scale = 0;   // max_s |s D_s|
    double error = 0;   // relative error (nonzero branch) or |extrapolated| / scale (zero branch)
    double tolerance = 0;
    bool pass = false;
};

/// Extrapolates s D_s(phi) and compares with |W|/|W'| D'(phi) or with 0.
/// phi must be W-invariant (see symmetrize).
inline ResidualReport verify_residual(const SpectralConfig& cfg, const TestFunction& phi,
                                      const std::vector<double>& s_grid = default_s_grid(),
                                      const NumericOptions& opt = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    check_s_grid(s_grid);
    const auto der = cfg.derive();
    const auto k = ds_integrand(cfg, phi);
    ResidualReport rep;
    rep.limit.label = cfg.label();
    rep.limit.s_grid = s_grid;
    rep.limit.samples = detail::scaled_samples(k, s_grid, opt, rep.limit.evaluations);
    rep.limit.fit = extrapolate(s_grid, rep.limit.samples);
    rep.limit.extrapolated = rep.limit.fit.value;
    for (const auto& v : rep.limit.samples)
        rep.scale = std::max(rep.scale, std::abs(v));
    if (cfg.nonzero_branch()) {
        rep.branch = "nonzero";
        rep.limit.target = double(der.W) / double(der.Wprime) * eval_Dprime(cfg, phi).value;
        rep.error = std::abs(rep.limit.extrapolated - rep.limit.target) / std::abs(rep.limit.target);
        rep.tolerance = 1e-2;
    } else {
        rep.branch = "zero";
        rep.limit.target = 0;
        rep.error = std::abs(rep.limit.extrapolated) / rep.scale;
        rep.tolerance = 1e-3;
    }
    rep.limit.rel_err = rep.error;
    rep.pass = rep.error < rep.tolerance;
    rep.limit.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

} // namespace plancherel
