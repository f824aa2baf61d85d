#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "plancherel/error.hpp"
#include "plancherel/multipoly.hpp"

namespace plancherel {

/// Exact rational function over Q, stored as scalar * prod f_i^{e_i}.
///
/// Every f_i is a nonconstant polynomial with leading coefficient 1 and the
/// list is sorted by MultiPoly::structural_compare with distinct entries, so
/// equal factors always merge. Exponents are nonzero; negative ones form the
/// denominator. Semantic equality is decided by subtraction, which expands
/// only the parts the two operands do not share.
class RatFun {
public:
    struct Factor {
        MultiPoly poly;
        int exp = 0;
    };

    RatFun() = default;
    explicit RatFun(std::size_t nvars) : nvars_(nvars), scalar_(0) {}

    static RatFun constant(std::size_t nvars, const mpq_class& c) {
        RatFun r(nvars);
        r.scalar_ = c;
        return r;
    }

    static RatFun variable(std::size_t nvars, std::size_t i) { return RatFun(MultiPoly::variable(nvars, i)); }

    explicit RatFun(const MultiPoly& p) : nvars_(p.nvars()), scalar_(1) {
        if (p.is_zero())
            scalar_ = 0;
        else
            insert(p, 1);
    }

    static RatFun fraction(const MultiPoly& num, const MultiPoly& den) {
        if (num.nvars() != den.nvars())
            throw std::invalid_argument("numerator and denominator differ in nvars");
        if (den.is_zero())
            throw std::domain_error("rational function with zero denominator");
        RatFun r(num);
        if (!r.is_zero())
            r.insert(den, -1);
        return r;
    }

    std::size_t nvars() const noexcept { return nvars_; }
    bool is_zero() const noexcept { return scalar_ == 0; }
    const mpq_class& scalar() const noexcept { return scalar_; }
    const std::vector<Factor>& factors() const noexcept { return factors_; }

    bool is_polynomial_form() const {
        return std::all_of(factors_.begin(), factors_.end(), [](const Factor& f) { return f.exp > 0; });
    }

    /// Expanded numerator, including the scalar.
    MultiPoly numerator() const {
        if (is_zero())
            return MultiPoly(nvars_);
        return product_of(true) * scalar_;
    }

    /// Expanded denominator; its leading coefficient is 1.
    MultiPoly denominator() const { return product_of(false); }

    friend RatFun operator*(const RatFun& a, const RatFun& b) {
        check_same(a, b);
        if (a.is_zero() || b.is_zero())
            return RatFun(a.nvars_);
        RatFun r = a;
        r.scalar_ *= b.scalar_;
        for (const auto& f : b.factors_)
            r.insert_monic(f.poly, f.exp);
        return r;
    }

    RatFun inverse() const {
        if (is_zero())
            throw std::domain_error("division by the zero rational function");
        RatFun r = *this;
        r.scalar_ = 1 / scalar_;
        for (auto& f : r.factors_)
            f.exp = -f.exp;
        return r;
    }

    friend RatFun operator/(const RatFun& a, const RatFun& b) {
        check_same(a, b);
        return a * b.inverse();
    }

    RatFun pow(int k) const {
        if (k < 0)
            return inverse().pow(-k);
        RatFun r = *this;
        if (k == 0)
            return constant(nvars_, 1);
        mpq_class s = 1;
        for (int i = 0; i < k; ++i)
            s *= scalar_;
        r.scalar_ = s;
        for (auto& f : r.factors_)
            f.exp *= k;
        return r;
    }

    RatFun operator-() const {
        RatFun r = *this;
        r.scalar_ = -r.scalar_;
        return r;
    }

    friend RatFun operator*(const RatFun& a, const mpq_class& c) {
        if (c == 0)
            return RatFun(a.nvars_);
        RatFun r = a;
        r.scalar_ *= c;
        return r;
    }
    friend RatFun operator*(const mpq_class& c, const RatFun& a) { return a * c; }

    friend RatFun operator+(const RatFun& a, const RatFun& b) { return add(a, b, false); }
    friend RatFun operator-(const RatFun& a, const RatFun& b) { return add(a, b, true); }
    RatFun& operator+=(const RatFun& b) { return *this = *this + b; }
    RatFun& operator-=(const RatFun& b) { return *this = *this - b; }
    RatFun& operator*=(const RatFun& b) { return *this = *this * b; }

    /// Exact equality of the represented functions.
    friend bool operator==(const RatFun& a, const RatFun& b) { return (a - b).is_zero(); }

    /// Same stored representation (implies equality, not conversely).
    bool same_representation(const RatFun& o) const {
        if (nvars_ != o.nvars_ || scalar_ != o.scalar_ || factors_.size() != o.factors_.size())
            return false;
        for (std::size_t i = 0; i < factors_.size(); ++i)
            if (factors_[i].exp != o.factors_[i].exp || !(factors_[i].poly == o.factors_[i].poly))
                return false;
        return true;
    }

    std::size_t representation_hash() const {
        std::size_t h = std::hash<std::string>{}(scalar_.get_str());
        for (const auto& f : factors_)
            h = h * 1000003u ^ (f.poly.hash() + static_cast<std::size_t>(f.exp + 64));
        return h;
    }

    /// Variable i is renamed to variable perm[i].
    RatFun permuted(std::span<const std::size_t> perm) const {
        RatFun r(nvars_);
        r.scalar_ = scalar_;
        if (is_zero()) {
            MultiPoly(nvars_).permuted(perm);
            return r;
        }
        for (const auto& f : factors_)
            r.insert(f.poly.permuted(perm), f.exp);
        return r;
    }
    RatFun permuted(const std::vector<std::size_t>& perm) const { return permuted(std::span<const std::size_t>(perm)); }

    /// f(x1 + s/2, ..., xn + s/2) with s appended as variable n.
    RatFun shift_s() const {
        const std::size_t s = nvars_;
        RatFun r(nvars_ + 1);
        r.scalar_ = scalar_;
        if (is_zero())
            return r;
        for (const auto& f : factors_) {
            MultiPoly g = f.poly.with_extra_vars(1);
            MultiPoly acc = g;
            mpq_class c = 1;
            for (unsigned k = 1; k <= f.poly.total_degree(); ++k) {
                g = g.diagonal_derivative();
                if (g.is_zero())
                    break;
                c /= 2 * k;
                acc += g.times_term(Monomial::variable(s, k), c);
            }
            r.insert(acc, f.exp);
        }
        return r;
    }

    /// Restriction to the subspace where each aliased variable equals sign * target
    /// (or 0). Result lives in the surviving variables, renumbered in order.
    RatFun restricted(const std::vector<std::optional<Alias>>& aliases) const {
        if (aliases.size() != nvars_)
            throw std::invalid_argument("alias table has wrong length");
        std::size_t nsurv = 0;
        for (const auto& a : aliases)
            nsurv += a ? 0 : 1;
        if (is_zero())
            return RatFun(nsurv);
        RatFun src = cancel_vanishing(aliases);
        RatFun r(nsurv);
        r.scalar_ = src.scalar_;
        for (const auto& f : src.factors_) {
            MultiPoly g = f.poly.substituted(aliases);
            if (g.is_zero()) {
                if (f.exp > 0)
                    return RatFun(nsurv);
                throw restriction_error("restriction undefined: a denominator factor vanishes identically");
            }
            r.insert(g, f.exp);
        }
        return r;
    }

    /// (s^N f)|_{s=0}, s being the last variable.
    RatFun limit_s_power(int N) const {
        if (nvars_ == 0)
            throw std::invalid_argument("limit_s_power needs at least one variable");
        const std::size_t s = nvars_ - 1;
        if (is_zero())
            return RatFun(nvars_ - 1);
        long v = N;
        for (const auto& f : factors_)
            v += static_cast<long>(f.exp) * f.poly.valuation(s);
        if (v < 0)
            throw pole_error("residual pole at s=0: s-valuation of s^N f is " + std::to_string(v));
        if (v > 0)
            return RatFun(nvars_ - 1);
        RatFun r(nvars_ - 1);
        r.scalar_ = scalar_;
        for (const auto& f : factors_)
            r.insert(f.poly.coefficient_of(s, f.poly.valuation(s)), f.exp);
        return r;
    }

    /// Appends k unused variables.
    RatFun with_extra_vars(std::size_t k) const {
        RatFun r(nvars_ + k);
        r.scalar_ = scalar_;
        for (const auto& f : factors_)
            r.factors_.push_back({f.poly.with_extra_vars(k), f.exp});
        return r;
    }

    /// The polynomial this function equals, if it is one.
    std::optional<MultiPoly> as_polynomial() const {
        if (is_polynomial_form())
            return numerator();
        RatFun c = cancel_denominators();
        if (c.is_polynomial_form())
            return c.numerator();
        std::optional<MultiPoly> q = c.numerator().divide_exact(c.denominator());
        return q;
    }

    template <class T>
    T eval(std::span<const T> x) const {
        if (x.size() != nvars_)
            throw std::invalid_argument("evaluation point has wrong dimension");
        T num = convert<T>(scalar_);
        T den(1);
        for (const auto& f : factors_) {
            const T v = f.poly.eval(x);
            if (f.exp < 0 && v == T(0))
                throw pole_error("rational function evaluated at a pole");
            T p(1);
            for (int k = 0; k < std::abs(f.exp); ++k)
                p *= v;
            if (f.exp > 0)
                num *= p;
            else
                den *= p;
        }
        return num / den;
    }
    template <class T>
    T eval(const std::vector<T>& x) const { return eval(std::span<const T>(x)); }

    std::string to_string(const std::vector<std::string>& names) const {
        if (is_polynomial_form())
            return numerator().to_string(names);
        return "(" + numerator().to_string(names) + ") / (" + denominator().to_string(names) + ")";
    }
    std::string to_string() const { return to_string(default_names(nvars_)); }

    /// scalar * (f1)^e1 * ... without expanding.
    std::string to_factored_string(const std::vector<std::string>& names) const {
        std::string s = scalar_.get_str();
        for (const auto& f : factors_)
            s += " * (" + f.poly.to_string(names) + ")^" + std::to_string(f.exp);
        return s;
    }

private:
    static void check_same(const RatFun& a, const RatFun& b) {
        if (a.nvars_ != b.nvars_)
            throw std::invalid_argument("rational functions have different numbers of variables");
    }

    template <class T>
    static T convert(const mpq_class& c) {
        if constexpr (std::is_same_v<T, mpq_class>)
            return c;
        else
            return T(c.get_d());
    }

    void insert(const MultiPoly& p, int e) {
        if (e == 0)
            return;
        if (p.is_zero()) {
            if (e < 0)
                throw std::domain_error("division by the zero polynomial");
            scalar_ = 0;
            factors_.clear();
            return;
        }
        if (p.is_constant()) {
            mpq_class c = p.constant_value();
            for (int k = 0; k < std::abs(e); ++k)
                scalar_ = e > 0 ? mpq_class(scalar_ * c) : mpq_class(scalar_ / c);
            return;
        }
        auto [lc, m] = p.monic();
        for (int k = 0; k < std::abs(e); ++k)
            scalar_ = e > 0 ? mpq_class(scalar_ * lc) : mpq_class(scalar_ / lc);
        insert_monic(m, e);
    }

    void insert_monic(const MultiPoly& m, int e) {
        auto it = std::lower_bound(factors_.begin(), factors_.end(), m, [](const Factor& f, const MultiPoly& q) {
            return MultiPoly::structural_compare(f.poly, q) < 0;
        });
        if (it != factors_.end() && MultiPoly::structural_compare(it->poly, m) == 0) {
            it->exp += e;
            if (it->exp == 0)
                factors_.erase(it);
        } else {
            factors_.insert(it, Factor{m, e});
        }
    }

    MultiPoly product_of(bool numerator_side) const {
        std::vector<const MultiPoly*> ps;
        std::vector<int> ks;
        for (const auto& f : factors_)
            if ((f.exp > 0) == numerator_side) {
                ps.push_back(&f.poly);
                ks.push_back(std::abs(f.exp));
            }
        return expand(ps, ks, nvars_);
    }

    static MultiPoly expand(const std::vector<const MultiPoly*>& ps, const std::vector<int>& ks, std::size_t nvars) {
        std::vector<MultiPoly> items;
        for (std::size_t i = 0; i < ps.size(); ++i)
            for (int k = 0; k < ks[i]; ++k)
                items.push_back(*ps[i]);
        if (items.empty())
            return MultiPoly::constant(nvars, 1);
        // Multiply smallest first; pair-wise tree keeps intermediate sizes balanced.
        std::sort(items.begin(), items.end(), [](const MultiPoly& a, const MultiPoly& b) { return a.size() < b.size(); });
        while (items.size() > 1) {
            std::vector<MultiPoly> next;
            for (std::size_t i = 0; i + 1 < items.size(); i += 2)
                next.push_back(items[i] * items[i + 1]);
            if (items.size() % 2)
                next.push_back(items.back());
            items = std::move(next);
        }
        return items.front();
    }

    static RatFun add(const RatFun& a, const RatFun& b, bool subtract) {
        check_same(a, b);
        if (b.is_zero())
            return a;
        if (a.is_zero())
            return subtract ? -b : b;
        // Common part: exponent min(ea, eb) per factor, which is gcd of numerators
        // and lcm of denominators at once. What remains on each side is a polynomial.
        RatFun common(a.nvars_);
        common.scalar_ = 1;
        std::vector<const MultiPoly*> pa, pb;
        std::vector<int> ka, kb;
        std::size_t i = 0, j = 0;
        auto take = [&](const MultiPoly& p, int ea, int eb) {
            const int g = std::min(ea, eb);
            if (g != 0)
                common.factors_.push_back({p, g});
            if (ea - g > 0) {
                pa.push_back(&p);
                ka.push_back(ea - g);
            }
            if (eb - g > 0) {
                pb.push_back(&p);
                kb.push_back(eb - g);
            }
        };
        while (i < a.factors_.size() || j < b.factors_.size()) {
            int c;
            if (i == a.factors_.size())
                c = 1;
            else if (j == b.factors_.size())
                c = -1;
            else
                c = MultiPoly::structural_compare(a.factors_[i].poly, b.factors_[j].poly);
            if (c < 0) {
                take(a.factors_[i].poly, a.factors_[i].exp, 0);
                ++i;
            } else if (c > 0) {
                take(b.factors_[j].poly, 0, b.factors_[j].exp);
                ++j;
            } else {
                take(a.factors_[i].poly, a.factors_[i].exp, b.factors_[j].exp);
                ++i;
                ++j;
            }
        }
        MultiPoly sum = expand(pa, ka, a.nvars_) * a.scalar_;
        MultiPoly rhs = expand(pb, kb, a.nvars_) * b.scalar_;
        sum = subtract ? sum - rhs : sum + rhs;
        if (sum.is_zero())
            return RatFun(a.nvars_);
        common.insert(sum, 1);
        return common;
    }

    /// Cancels denominator factors against numerator factors they divide.
    RatFun cancel_denominators() const {
        RatFun r = *this;
        bool progress = true;
        while (progress) {
            progress = false;
            for (std::size_t d = 0; d < r.factors_.size() && !progress; ++d) {
                if (r.factors_[d].exp >= 0)
                    continue;
                for (std::size_t n = 0; n < r.factors_.size() && !progress; ++n) {
                    if (r.factors_[n].exp <= 0)
                        continue;
                    auto q = r.factors_[n].poly.divide_exact(r.factors_[d].poly);
                    if (!q)
                        continue;
                    const MultiPoly dp = r.factors_[d].poly;
                    const MultiPoly np = r.factors_[n].poly;
                    r.insert_monic(np, -1);
                    r.insert_monic(dp, 1);
                    r.insert(*q, 1);
                    progress = true;
                }
            }
        }
        return r;
    }

    /// Removes, by exact division, denominator factors that vanish on the alias subspace.
    RatFun cancel_vanishing(const std::vector<std::optional<Alias>>& aliases) const {
        RatFun r = *this;
        for (;;) {
            const Factor* bad = nullptr;
            for (const auto& f : r.factors_)
                if (f.exp < 0 && f.poly.substituted(aliases).is_zero()) {
                    bad = &f;
                    break;
                }
            if (!bad)
                return r;
            const MultiPoly d = bad->poly;
            bool done = false;
            for (const auto& f : r.factors_) {
                if (f.exp <= 0)
                    continue;
                if (auto q = f.poly.divide_exact(d)) {
                    const MultiPoly np = f.poly;
                    r.insert_monic(np, -1);
                    r.insert_monic(d, 1);
                    r.insert(*q, 1);
                    done = true;
                    break;
                }
            }
            if (!done) {
                auto q = r.product_of(true).divide_exact(d);
                if (!q)
                    throw restriction_error("restriction undefined: a denominator factor vanishes identically");
                RatFun t(r.nvars_);
                t.scalar_ = r.scalar_;
                for (const auto& f : r.factors_)
                    if (f.exp < 0)
                        t.factors_.push_back(f);
                t.insert_monic(d, 1);
                t.insert(*q, 1);
                r = std::move(t);
            }
        }
    }

    std::size_t nvars_ = 0;
    mpq_class scalar_ = 0;
    std::vector<Factor> factors_;
};

} // namespace plancherel
