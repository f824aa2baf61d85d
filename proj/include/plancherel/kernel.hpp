#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "plancherel/error.hpp"
#include "plancherel/quadrature.hpp"

namespace plancherel {

/// (i <coef, t> + shift * s)^power for real coordinates t.
struct LinearAtom {
    std::vector<double> coef;
    double shift = 0;
    int power = 1;
};

/// phi(E t) * scalar * prod of linear atoms, integrated over t in R^dim with
/// Lebesgue measure. E embeds the free coordinates into the ambient space of phi.
struct KernelIntegrand {
    std::size_t dim = 0;
    std::size_t ambient = 0;
    std::vector<std::vector<double>> embedding; // ambient x dim
    std::complex<double> scalar{1.0};
    std::vector<LinearAtom> atoms;
    std::function<std::complex<double>(std::span<const double>)> phi;
    double half_width = 8.0; // integration box [-h, h]^dim

    /// Free coordinates t_1..t_{n-1} of the hyperplane sum t = 0, with t_n = -sum.
    static std::vector<std::vector<double>> hyperplane_embedding(std::size_t n) {
        std::vector<std::vector<double>> e(n, std::vector<double>(n - 1, 0.0));
        for (std::size_t i = 0; i + 1 < n; ++i)
            e[i][i] = 1.0;
        for (std::size_t j = 0; j + 1 < n; ++j)
            e[n - 1][j] = -1.0;
        return e;
    }

    /// Rewrite an atom given in ambient coordinates in terms of the free ones.
    std::vector<double> pull_back(const std::vector<double>& ambient_coef) const {
        std::vector<double> c(dim, 0.0);
        for (std::size_t a = 0; a < ambient; ++a)
            for (std::size_t j = 0; j < dim; ++j)
                c[j] += ambient_coef[a] * embedding[a][j];
        return c;
    }
};

struct KernelOptions {
    double rel_tol = 1e-9;
    double abs_tol = 0;
    std::size_t max_intervals = 3000;
};

struct KernelResult {
    std::complex<double> value;
    double error = 0;
    std::size_t evaluations = 0;
    bool converged = true;
};

namespace detail {

/// A hyperplane near which an intermediate integrand varies on scale |shift| * s:
/// it behaves like 1 / (i <coef, t> + shift * s).
struct Ridge {
    std::vector<double> coef;
    double shift;
};

inline void normalize(Ridge& r) {
    double m = 0;
    for (double c : r.coef)
        m = std::max(m, std::abs(c));
    if (m == 0)
        return;
    for (double& c : r.coef)
        c /= m;
    r.shift /= m;
}

inline bool same_ridge(const Ridge& a, const Ridge& b) {
    if (std::abs(a.shift - b.shift) > 1e-12 * (1 + std::abs(a.shift)))
        return false;
    for (std::size_t i = 0; i < a.coef.size(); ++i)
        if (std::abs(a.coef[i] - b.coef[i]) > 1e-12)
            return false;
    return true;
}

/// Ridges seen by each integration level. Level l integrates t_l with t_0..t_{l-1}
/// fixed and t_{l+1}.. already integrated out. When t_l is integrated, two poles
/// on opposite sides of the real axis pinch the contour where their roots meet,
/// which produces a ridge of the outer integrand.
inline std::vector<std::vector<Ridge>> ridge_levels(const KernelIntegrand& k) {
    std::vector<Ridge> current;
    for (const auto& a : k.atoms)
        if (a.power < 0 && a.shift != 0) {
            Ridge r{a.coef, a.shift};
            normalize(r);
            current.push_back(std::move(r));
        }
    std::vector<std::vector<Ridge>> levels(k.dim);
    for (std::size_t l = k.dim; l-- > 0;) {
        std::vector<Ridge> mine, next;
        for (auto& r : current)
            (std::abs(r.coef[l]) > 1e-13 ? mine : next).push_back(r);
        for (std::size_t i = 0; i < mine.size(); ++i)
            for (std::size_t j = i + 1; j < mine.size(); ++j) {
                const double ai = mine[i].coef[l], aj = mine[j].coef[l];
                const double oi = mine[i].shift / ai, oj = mine[j].shift / aj;
                if ((oi > 0) == (oj > 0))
                    continue; // both poles on one side: no pinch
                Ridge p{std::vector<double>(l + 1), oi - oj};
                for (std::size_t c = 0; c < l; ++c)
                    p.coef[c] = mine[i].coef[c] / ai - mine[j].coef[c] / aj;
                normalize(p);
                bool nonzero = false;
                for (std::size_t c = 0; c < l; ++c)
                    nonzero = nonzero || std::abs(p.coef[c]) > 1e-12;
                if (nonzero)
                    next.push_back(std::move(p));
            }
        for (auto& r : next)
            r.coef.resize(l);
        std::vector<Ridge> dedup;
        for (auto& r : next)
            if (std::none_of(dedup.begin(), dedup.end(), [&](const Ridge& d) { return same_ridge(d, r); }))
                dedup.push_back(std::move(r));
        if (dedup.size() > 4096)
            throw cap_error("too many pinch ridges in kernel integrand");
        levels[l] = std::move(mine);
        current = std::move(dedup);
    }
    return levels;
}

} // namespace detail

/// Nested adaptive Gauss-Kronrod over the box, with each 1-D mesh graded toward
/// the roots of the ridges visible at that level.
inline KernelResult integrate_kernel(const KernelIntegrand& k, double s, const KernelOptions& opt = {}) {
    const auto levels = detail::ridge_levels(k);
    const std::size_t na = k.atoms.size();
    std::vector<double> t(k.dim, 0.0), amb(k.ambient, 0.0);
    std::vector<std::vector<double>> lin(k.dim + 1, std::vector<double>(na, 0.0));
    KernelResult out;

    auto leaf = [&]() -> std::complex<double> {
        ++out.evaluations;
        for (std::size_t a = 0; a < k.ambient; ++a) {
            double v = 0;
            for (std::size_t j = 0; j < k.dim; ++j)
                v += k.embedding[a][j] * t[j];
            amb[a] = v;
        }
        std::complex<double> num = k.scalar, den = 1.0;
        const auto& L = lin[k.dim];
        for (std::size_t a = 0; a < na; ++a) {
            const std::complex<double> z(k.atoms[a].shift * s, L[a]);
            int p = k.atoms[a].power;
            for (; p > 0; --p)
                num *= z;
            for (; p < 0; ++p)
                den *= z;
        }
        return k.phi(amb) * num / den;
    };

    std::function<std::complex<double>(std::size_t)> level = [&](std::size_t l) -> std::complex<double> {
        if (l == k.dim)
            return leaf();
        std::vector<quad::Hotspot> spots;
        for (const auto& r : levels[l]) {
            double rest = 0;
            for (std::size_t c = 0; c < l; ++c)
                rest += r.coef[c] * t[c];
            const double a = r.coef[l];
            spots.push_back({-rest / a, std::abs(r.shift * s / a)});
        }
        const auto mesh = quad::graded_mesh(-k.half_width, k.half_width, spots);
        auto f = [&](double v) {
            t[l] = v;
            for (std::size_t a = 0; a < na; ++a)
                lin[l + 1][a] = lin[l][a] + k.atoms[a].coef[l] * v;
            return level(l + 1);
        };
        quad::Options qo;
        qo.rel_tol = opt.rel_tol;
        // inner results are integrated over a box of side 2h per remaining outer level
        qo.abs_tol = opt.abs_tol / std::pow(2 * k.half_width, static_cast<double>(l));
        qo.max_intervals = opt.max_intervals;
        const auto r = quad::integrate(f, mesh, qo);
        if (l == 0)
            out.error = r.error;
        out.converged = out.converged && r.converged;
        return r.value;
    };

    out.value = level(0);
    return out;
}

} // namespace plancherel
