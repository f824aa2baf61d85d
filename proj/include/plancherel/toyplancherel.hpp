#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "plancherel/parallel.hpp"
#include "plancherel/tempered.hpp"

namespace plancherel::toy {

using local::cplx;
using std::numbers::pi;

/// A smooth function on R^x \ C^x, i.e. of theta in [0, pi) with z = t e^{i theta}, kept with
/// its coefficients a_k = int_0^pi phi(theta) e^{2 i k theta} d theta for |k| <= K.
class CircleFunction {
  public:
    using Eval = std::function<cplx(double)>;

    /// Coefficients by the trapezoid rule on `nodes` points, which is spectrally accurate for
    /// smooth pi-periodic phi.
    CircleFunction(Eval f, int K, int nodes = 4096) : f_(std::move(f)), K_(K) {
        if (K < 0)
            throw std::invalid_argument("mode cutoff must be >= 0");
        if (nodes < 2 * K + 1)
            throw std::invalid_argument("need at least 2K+1 quadrature nodes");
        const double h = pi / nodes;
        std::vector<cplx> v(nodes);
        for (int j = 0; j < nodes; ++j)
            v[j] = f_(j * h);
        a_.assign(2 * K + 1, 0.0);
        for (int k = -K; k <= K; ++k) {
            cplx s = 0;
            for (int j = 0; j < nodes; ++j)
                s += v[j] * std::polar(1.0, 2.0 * k * j * h);
            a_[k + K] = s * h;
        }
    }

    /// phi = sum_i c[i] e^{-2 i k theta} with k = i - offset, so that a_k = pi c[i].
    static CircleFunction trig(const std::vector<cplx>& c, int offset, int K, int nodes = 4096) {
        return CircleFunction(
            [coeffs = c, off = offset](double th) {
                cplx s = 0;
                for (std::size_t i = 0; i < coeffs.size(); ++i)
                    s += coeffs[i] * std::polar(1.0, -2.0 * (int(i) - off) * th);
                return s;
            },
            K, nodes);
    }

    int K() const { return K_; }
    cplx operator()(double theta) const { return f_(theta); }
    cplx coeff(int k) const {
        if (k < -K_ || k > K_)
            throw std::out_of_range("mode outside stored range");
        return a_[k + K_];
    }

    /// max_k |a_k| (1 + k^2).
    double decay_constant() const {
        double c = 0;
        for (int k = -K_; k <= K_; ++k)
            c = std::max(c, std::abs(a_[k + K_]) * (1.0 + double(k) * k));
        return c;
    }

    /// |a_k| (1 + k^2) on the upper half of the modes stays below its maximum on the lower half.
    bool decays() const {
        double low = 0, high = 0;
        for (int k = -K_; k <= K_; ++k) {
            const double w = std::abs(a_[k + K_]) * (1.0 + double(k) * k);
            double& side = 2 * std::abs(k) <= K_ ? low : high;
            side = std::max(side, w);
        }
        return high <= low + 1e-12;
    }

  private:
    Eval f_;
    int K_;
    std::vector<cplx> a_;
};

/// (phi_1, phi_2) = int_0^pi phi_1 conj(phi_2) 2 d theta, by the trapezoid rule.
inline cplx lhs_inner(const CircleFunction& f, const CircleFunction& g, int nodes = 4096) {
    const double h = pi / nodes;
    cplx s = 0;
    for (int j = 0; j < nodes; ++j)
        s += f(j * h) * std::conj(g(j * h));
    return 2.0 * h * s;
}

/// rho_k = d(sigma_k) for the U(1) character sigma_k with BC(sigma_k) = (z/|z|)^{2k}.
inline double mode_density(int k) {
    tempered::BlockTable t(local::FieldData::real());
    t.add_character("sigma", local::CharData::on_E(2L * k), tempered::AsaiType::minus);
    return *tempered::formal_degree(tempered::TemperedParamU{{}, {"sigma"}}, t).value;
}

/// |gamma(0, sign, psi')| / |S_sigma| with |S_sigma| = 2.
inline double expected_density() {
    return std::abs(local::tate_gamma(local::CharData::real_char(1), local::FieldData::real())(0.0)) / 2;
}

/// The hermitian form (2 a_k(phi_1)) conj(2 a_k(phi_2)) of mode k.
inline cplx mode_form(const CircleFunction& f, const CircleFunction& g, int k) {
    return 2.0 * f.coeff(k) * std::conj(2.0 * g.coeff(k));
}

/// sum_{|k| <= K} rho_k (2 a_k(phi_1)) conj(2 a_k(phi_2)).
inline cplx rhs_spectral(const CircleFunction& f, const CircleFunction& g, int K, const std::vector<double>& rho) {
    if (K > f.K() || K > g.K())
        throw std::invalid_argument("K exceeds the stored coefficients");
    if (rho.size() != std::size_t(2 * K + 1))
        throw std::invalid_argument("need one density per mode");
    cplx s = 0;
    for (int k = -K; k <= K; ++k)
        s += rho[k + K] * mode_form(f, g, k);
    return s;
}

inline std::vector<double> mode_densities(int K) {
    std::vector<double> rho;
    for (int k = -K; k <= K; ++k)
        rho.push_back(mode_density(k));
    return rho;
}

inline cplx rhs_spectral(const CircleFunction& f, const CircleFunction& g, int K) {
    return rhs_spectral(f, g, K, mode_densities(K));
}

/// A random trigonometric polynomial of degree <= 12 plus a periodized Gaussian bump.
inline CircleFunction random_test_function(std::mt19937_64& rng, int K, int nodes = 4096) {
    std::normal_distribution<double> n(0, 1);
    std::uniform_real_distribution<double> u(0, 1);
    const int deg = 1 + int(u(rng) * 12);
    std::vector<cplx> c(2 * deg + 1);
    for (int i = 0; i < 2 * deg + 1; ++i) {
        const double k = i - deg;
        c[i] = cplx(n(rng), n(rng)) / (1.0 + k * k);
    }
    const double center = pi * u(rng), width = 0.2 + 0.25 * u(rng), amp = 1 + 2 * u(rng);
    return CircleFunction(
        [c, deg, center, width, amp](double th) {
            cplx s = 0;
            for (int i = 0; i < 2 * deg + 1; ++i)
                s += c[i] * std::polar(1.0, -2.0 * (i - deg) * th);
            double b = 0;
            for (int m = -3; m <= 3; ++m) {
                const double d = th - center + m * pi;
                b += std::exp(-d * d / (2 * width * width));
            }
            return s + amp * b;
        },
        K, nodes);
}

struct TheoremReport {
    int K = 0, nodes = 0, trials = 0;
    double max_rel_err = 0;
    double fitted_constant = 0;
    double expected_constant = 0;
    double max_density_spread = 0; // max_k |rho_k - rho_0|
    double max_ratio_spread = 0;   // max_k |ratio_k - ratio_0| for |k| <= 16
    double min_self_rhs = 0;       // smallest rhs(phi, phi), must be >= 0
    bool decay_ok = true;
    double tol = 0;

    bool pass() const {
        return max_rel_err < tol && std::abs(fitted_constant - expected_constant) < tol &&
               max_density_spread < 1e-8 && max_ratio_spread < 1e-8 && min_self_rhs >= 0 && decay_ok;
    }
};

/// Random pairs: lhs against rhs, the fitted global constant, and the per-mode ratio of the
/// quadrature norm of e^{-2 i k theta} to its hermitian form.
inline TheoremReport verify_theorem(int trials, int K, double tol, std::uint64_t seed = 1, int nodes = 4096,
                                    unsigned jobs = default_jobs()) {
    if (trials < 1)
        throw std::invalid_argument("need at least one trial");
    TheoremReport r;
    r.K = K;
    r.nodes = nodes;
    r.trials = trials;
    r.tol = tol;
    r.expected_constant = expected_density();
    const auto rho = mode_densities(K);
    for (int k = -K; k <= K; ++k)
        r.max_density_spread = std::max(r.max_density_spread, std::abs(rho[k + K] - rho[K]));

    std::vector<CircleFunction> fs, gs;
    std::mt19937_64 rng(seed);
    for (int i = 0; i < trials; ++i) {
        fs.push_back(random_test_function(rng, K, nodes));
        gs.push_back(random_test_function(rng, K, nodes));
    }
    std::vector<cplx> lhs(trials), rhs(trials), form(trials);
    std::vector<double> self(trials);
    parallel_for(trials, jobs, [&](std::size_t i) {
        lhs[i] = lhs_inner(fs[i], gs[i], nodes);
        rhs[i] = rhs_spectral(fs[i], gs[i], K, rho);
        cplx fsum = 0;
        for (int k = -K; k <= K; ++k)
            fsum += mode_form(fs[i], gs[i], k);
        form[i] = fsum;
        self[i] = rhs_spectral(fs[i], fs[i], K, rho).real();
    });
    cplx num = 0;
    double den = 0;
    r.min_self_rhs = self[0];
    for (int i = 0; i < trials; ++i) {
        r.max_rel_err = std::max(r.max_rel_err, std::abs(lhs[i] - rhs[i]) / std::abs(lhs[i]));
        num += lhs[i] * std::conj(form[i]);
        den += std::norm(form[i]);
        r.min_self_rhs = std::min(r.min_self_rhs, self[i]);
        r.decay_ok = r.decay_ok && fs[i].decays() && gs[i].decays();
    }
    r.fitted_constant = num.real() / den;

    const int kr = std::min(K, 16);
    double ratio0 = 0;
    for (int k = 0; k <= kr; ++k)
        for (int sgn : {1, -1}) {
            const auto e = CircleFunction::trig({1.0}, -sgn * k, K, nodes);
            const double ratio = (lhs_inner(e, e, nodes) / mode_form(e, e, sgn * k)).real();
            if (k == 0)
                ratio0 = ratio;
            r.max_ratio_spread = std::max(r.max_ratio_spread, std::abs(ratio - ratio0));
        }
    return r;
}

} // namespace plancherel::toy
