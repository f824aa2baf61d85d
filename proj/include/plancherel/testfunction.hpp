#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "plancherel/multipoly.hpp"

namespace plancherel {

/// Schwartz function on iR^S written as sum_j c_j p_j(t) exp(-sum_i a_ji t_i^2),
/// evaluated through the real coordinates t of the point x = i t.
class TestFunction {
  public:
    struct Term {
        std::complex<double> coeff{1.0};
        MultiPoly poly;             // polynomial in t (not in x)
        std::vector<double> widths; // a_i > 0
    };

    TestFunction() = default;
    explicit TestFunction(std::size_t dim) : dim_(dim) {}

    /// exp(-a |t|^2)
    static TestFunction gaussian(std::size_t dim, double a = 1.0) {
        TestFunction f(dim);
        f.add_term(1.0, MultiPoly::constant(dim, 1), std::vector<double>(dim, a));
        return f;
    }

    void add_term(std::complex<double> c, MultiPoly p, std::vector<double> widths) {
        if (p.nvars() != dim_ || widths.size() != dim_)
            throw std::invalid_argument("test function term has wrong dimension");
        for (double a : widths)
            if (!(a > 0) || !std::isfinite(a))
                throw std::invalid_argument("Gaussian widths must be positive");
        Compiled k;
        k.coeff = c;
        for (const auto& t : p.terms()) {
            std::vector<unsigned> e(dim_);
            for (std::size_t i = 0; i < dim_; ++i)
                e[i] = t.mono[i];
            k.monos.push_back({t.coeff.get_d(), std::move(e)});
        }
        k.widths = widths;
        compiled_.push_back(std::move(k));
        terms_.push_back({c, std::move(p), std::move(widths)});
    }

    std::size_t dim() const { return dim_; }
    const std::vector<Term>& terms() const { return terms_; }

    std::complex<double> operator()(std::span<const double> t) const {
        std::complex<double> sum = 0;
        for (const auto& k : compiled_) {
            double g = 0;
            for (std::size_t i = 0; i < dim_; ++i)
                g += k.widths[i] * t[i] * t[i];
            double p = 0;
            for (const auto& [c, e] : k.monos) {
                double m = c;
                for (std::size_t i = 0; i < dim_; ++i)
                    for (unsigned j = 0; j < e[i]; ++j)
                        m *= t[i];
                p += m;
            }
            sum += k.coeff * p * std::exp(-g);
        }
        return sum;
    }

    std::complex<double> at_origin() const {
        std::vector<double> z(dim_, 0.0);
        return (*this)(z);
    }

    double min_width() const {
        double m = INFINITY;
        for (const auto& t : terms_)
            for (double a : t.widths)
                m = std::min(m, a);
        return m;
    }

    /// t -> phi(t_{w(0)}, t_{w(1)}, ...), matching MultiPoly::permuted.
    TestFunction permuted(const std::vector<std::size_t>& w) const {
        TestFunction out(dim_);
        std::vector<std::size_t> inv(dim_);
        for (std::size_t i = 0; i < dim_; ++i)
            inv[w[i]] = i;
        for (const auto& t : terms_) {
            std::vector<double> a(dim_);
            for (std::size_t j = 0; j < dim_; ++j)
                a[j] = t.widths[inv[j]];
            out.add_term(t.coeff, t.poly.permuted(w), std::move(a));
        }
        return out;
    }

    /// Average of phi o w over the given permutations.
    TestFunction averaged(const std::vector<std::vector<std::size_t>>& group) const {
        TestFunction out(dim_);
        const double k = 1.0 / static_cast<double>(group.size());
        for (const auto& w : group)
            for (const auto& t : permuted(w).terms_)
                out.add_term(t.coeff * k, t.poly, t.widths);
        return out;
    }

  private:
    struct Compiled {
        std::complex<double> coeff;
        std::vector<std::pair<double, std::vector<unsigned>>> monos;
        std::vector<double> widths;
    };
    std::size_t dim_ = 0;
    std::vector<Term> terms_;
    std::vector<Compiled> compiled_;
};

} // namespace plancherel
