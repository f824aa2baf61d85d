#pragma once

#include <algorithm>
#include <cctype>
#include <complex>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "plancherel/monomial.hpp"

namespace plancherel {

/// How a restricted variable is expressed on the subspace: sign * x[target], or 0 when sign == 0.
struct Alias {
    std::size_t target = 0;
    int sign = 0;
};

/// Default variable names x1..xn.
inline std::vector<std::string> default_names(std::size_t nvars) {
    std::vector<std::string> v;
    for (std::size_t i = 0; i < nvars; ++i)
        v.push_back("x" + std::to_string(i + 1));
    return v;
}

/// Sparse polynomial over Q in at most 16 variables.
///
/// Terms are kept strictly decreasing in graded lexicographic order with no
/// zero coefficients, so structural equality is polynomial equality.
class MultiPoly {
public:
    struct Term {
        Monomial mono;
        mpq_class coeff;
    };

    MultiPoly() = default;
    explicit MultiPoly(std::size_t nvars) : nvars_(check_nvars(nvars)) {}

    static MultiPoly constant(std::size_t nvars, const mpq_class& c) {
        MultiPoly p(nvars);
        if (c != 0)
            p.terms_.push_back({Monomial{}, c});
        return p;
    }

    static MultiPoly variable(std::size_t nvars, std::size_t i) {
        if (i >= nvars)
            throw std::out_of_range("variable index out of range");
        MultiPoly p(nvars);
        p.terms_.push_back({Monomial::variable(i), mpq_class(1)});
        return p;
    }

    /// sum of coeffs[k].second * x[coeffs[k].first] + c0
    static MultiPoly linear(std::size_t nvars, const std::vector<std::pair<std::size_t, mpq_class>>& coeffs,
                            const mpq_class& c0 = 0) {
        std::vector<Term> t;
        for (const auto& [i, c] : coeffs) {
            if (i >= nvars)
                throw std::out_of_range("variable index out of range");
            t.push_back({Monomial::variable(i), c});
        }
        t.push_back({Monomial{}, c0});
        return from_terms(nvars, std::move(t));
    }

    static MultiPoly from_terms(std::size_t nvars, std::vector<Term> terms) {
        MultiPoly p(nvars);
        for (const auto& t : terms)
            for (std::size_t i = nvars; i < max_vars; ++i)
                if (t.mono[i] != 0)
                    throw std::invalid_argument("exponent vector longer than nvars");
        p.terms_ = std::move(terms);
        p.canonicalize();
        return p;
    }

    static MultiPoly from_exponents(std::size_t nvars,
                                    const std::vector<std::pair<std::vector<unsigned>, mpq_class>>& terms) {
        std::vector<Term> t;
        for (const auto& [e, c] : terms) {
            if (e.size() != nvars)
                throw std::invalid_argument("exponent vector length differs from nvars");
            t.push_back({Monomial(e), c});
        }
        return from_terms(nvars, std::move(t));
    }

    std::size_t nvars() const noexcept { return nvars_; }
    const std::vector<Term>& terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    bool is_zero() const noexcept { return terms_.empty(); }
    bool is_constant() const noexcept { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one()); }
    mpq_class constant_value() const { return terms_.empty() ? mpq_class(0) : terms_.back().mono.is_one() ? terms_.back().coeff : mpq_class(0); }
    unsigned total_degree() const noexcept { return terms_.empty() ? 0 : terms_.front().mono.degree(); }
    const Term& leading() const { return terms_.front(); }

    std::vector<unsigned> exponents(std::size_t k) const {
        std::vector<unsigned> e(nvars_);
        for (std::size_t i = 0; i < nvars_; ++i)
            e[i] = terms_[k].mono[i];
        return e;
    }

    bool operator==(const MultiPoly& o) const {
        if (nvars_ != o.nvars_ || terms_.size() != o.terms_.size())
            return false;
        for (std::size_t i = 0; i < terms_.size(); ++i)
            if (terms_[i].mono != o.terms_[i].mono || terms_[i].coeff != o.terms_[i].coeff)
                return false;
        return true;
    }

    /// Total order used to keep factor lists canonical; unrelated to any algebraic order.
    static int structural_compare(const MultiPoly& a, const MultiPoly& b) {
        if (a.nvars_ != b.nvars_)
            return a.nvars_ < b.nvars_ ? -1 : 1;
        if (a.total_degree() != b.total_degree())
            return a.total_degree() < b.total_degree() ? -1 : 1;
        if (a.terms_.size() != b.terms_.size())
            return a.terms_.size() < b.terms_.size() ? -1 : 1;
        for (std::size_t i = 0; i < a.terms_.size(); ++i) {
            if (auto c = a.terms_[i].mono <=> b.terms_[i].mono; c != 0)
                return c < 0 ? -1 : 1;
            if (int c = cmp(a.terms_[i].coeff, b.terms_[i].coeff); c != 0)
                return c < 0 ? -1 : 1;
        }
        return 0;
    }

    std::size_t hash() const noexcept {
        std::size_t h = nvars_ * 1000003u + terms_.size();
        for (const auto& t : terms_) {
            h = h * 31 + t.mono.hash();
            h ^= std::hash<long>{}(mpz_get_si(t.coeff.get_num_mpz_t())) + 0x9e3779b9 + (h << 6) + (h >> 2);
        }
        return h;
    }

    MultiPoly operator-() const {
        MultiPoly r = *this;
        for (auto& t : r.terms_)
            t.coeff = -t.coeff;
        return r;
    }

    friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) { return merge(a, b, false); }
    friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) { return merge(a, b, true); }
    MultiPoly& operator+=(const MultiPoly& b) { return *this = *this + b; }
    MultiPoly& operator-=(const MultiPoly& b) { return *this = *this - b; }

    friend MultiPoly operator*(const MultiPoly& a, const mpq_class& c) {
        if (c == 0)
            return MultiPoly(a.nvars_);
        MultiPoly r = a;
        for (auto& t : r.terms_)
            t.coeff *= c;
        return r;
    }
    friend MultiPoly operator*(const mpq_class& c, const MultiPoly& a) { return a * c; }

    /// Multiply by c * m; order is preserved so no resort is needed.
    MultiPoly times_term(const Monomial& m, const mpq_class& c) const {
        MultiPoly r(nvars_);
        if (c == 0)
            return r;
        r.terms_.reserve(terms_.size());
        for (const auto& t : terms_)
            r.terms_.push_back({t.mono * m, t.coeff * c});
        return r;
    }

    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
        check_same(a, b);
        const MultiPoly& small = a.size() <= b.size() ? a : b;
        const MultiPoly& big = a.size() <= b.size() ? b : a;
        if (small.is_zero())
            return MultiPoly(a.nvars_);
        if (small.size() <= 8) {
            MultiPoly acc = big.times_term(small.terms_[0].mono, small.terms_[0].coeff);
            for (std::size_t i = 1; i < small.size(); ++i)
                acc += big.times_term(small.terms_[i].mono, small.terms_[i].coeff);
            return acc;
        }
        std::unordered_map<Monomial, std::size_t, MonomialHash> index;
        index.reserve(small.size() * big.size() / 2 + 16);
        std::vector<Term> out;
        mpq_class prod;
        for (const auto& s : small.terms_)
            for (const auto& t : big.terms_) {
                const Monomial m = s.mono * t.mono;
                mpq_mul(prod.get_mpq_t(), s.coeff.get_mpq_t(), t.coeff.get_mpq_t());
                auto [it, fresh] = index.try_emplace(m, out.size());
                if (fresh)
                    out.push_back({m, prod});
                else
                    out[it->second].coeff += prod;
            }
        MultiPoly r(a.nvars_);
        r.terms_ = std::move(out);
        r.canonicalize();
        return r;
    }
    MultiPoly& operator*=(const MultiPoly& b) { return *this = *this * b; }

    MultiPoly pow(unsigned k) const {
        MultiPoly r = constant(nvars_, 1), base = *this;
        while (k) {
            if (k & 1u)
                r *= base;
            k >>= 1;
            if (k)
                base *= base;
        }
        return r;
    }

    template <class T>
    T eval(std::span<const T> x) const {
        if (x.size() != nvars_)
            throw std::invalid_argument("evaluation point has wrong dimension");
        // powers cached per variable up to the maximal exponent
        std::vector<std::vector<T>> pw(nvars_);
        for (std::size_t i = 0; i < nvars_; ++i)
            pw[i].push_back(T(1));
        T acc(0);
        for (const auto& t : terms_) {
            T v = convert<T>(t.coeff);
            for (std::size_t i = 0; i < nvars_; ++i) {
                const unsigned e = t.mono[i];
                if (!e)
                    continue;
                while (pw[i].size() <= e)
                    pw[i].push_back(pw[i].back() * x[i]);
                v *= pw[i][e];
            }
            acc += v;
        }
        return acc;
    }
    template <class T>
    T eval(const std::vector<T>& x) const { return eval(std::span<const T>(x)); }

    MultiPoly derivative(std::size_t i) const {
        std::vector<Term> out;
        for (const auto& t : terms_) {
            const unsigned e = t.mono[i];
            if (!e)
                continue;
            Monomial m = t.mono;
            m.set(i, e - 1);
            out.push_back({m, t.coeff * e});
        }
        return from_terms(nvars_, std::move(out));
    }

    /// Sum of all first partial derivatives, the generator of simultaneous translation.
    MultiPoly diagonal_derivative() const {
        std::vector<Term> out;
        for (const auto& t : terms_)
            for (std::size_t i = 0; i < nvars_; ++i) {
                const unsigned e = t.mono[i];
                if (!e)
                    continue;
                Monomial m = t.mono;
                m.set(i, e - 1);
                out.push_back({m, t.coeff * e});
            }
        return from_terms(nvars_, std::move(out));
    }

    MultiPoly with_extra_vars(std::size_t k) const {
        MultiPoly r = *this;
        r.nvars_ = check_nvars(nvars_ + k);
        return r;
    }

    /// Relabel: variable i becomes variable perm[i].
    MultiPoly permuted(std::span<const std::size_t> perm) const {
        check_permutation(perm, nvars_);
        std::vector<Term> out;
        out.reserve(terms_.size());
        for (const auto& t : terms_) {
            Monomial m;
            for (std::size_t i = 0; i < nvars_; ++i)
                if (unsigned e = t.mono[i])
                    m.set(perm[i], e);
            out.push_back({m, t.coeff});
        }
        return from_terms(nvars_, std::move(out));
    }

    /// Substitute x[i] -> sign * x[target] for aliased i, then renumber the survivors densely.
    /// `aliases[i]` is empty for surviving variables.
    MultiPoly substituted(const std::vector<std::optional<Alias>>& aliases) const {
        if (aliases.size() != nvars_)
            throw std::invalid_argument("alias table has wrong length");
        std::vector<std::size_t> newindex(nvars_, 0);
        std::size_t nsurv = 0;
        for (std::size_t i = 0; i < nvars_; ++i)
            if (!aliases[i])
                newindex[i] = nsurv++;
        for (std::size_t i = 0; i < nvars_; ++i) {
            if (!aliases[i] || aliases[i]->sign == 0)
                continue;
            const Alias& a = *aliases[i];
            if ((a.sign != 1 && a.sign != -1) || a.target >= nvars_ || aliases[a.target])
                throw std::invalid_argument("alias must point to a surviving variable with sign +1 or -1");
        }
        std::vector<Term> out;
        out.reserve(terms_.size());
        for (const auto& t : terms_) {
            std::vector<unsigned> e(nsurv, 0);
            bool negative = false, vanish = false;
            for (std::size_t i = 0; i < nvars_; ++i) {
                const unsigned k = t.mono[i];
                if (!k)
                    continue;
                if (!aliases[i]) {
                    e[newindex[i]] += k;
                } else if (aliases[i]->sign == 0) {
                    vanish = true;
                    break;
                } else {
                    e[newindex[aliases[i]->target]] += k;
                    if (aliases[i]->sign < 0 && (k & 1u))
                        negative = !negative;
                }
            }
            if (vanish)
                continue;
            out.push_back({Monomial(e), negative ? mpq_class(-t.coeff) : t.coeff});
        }
        return from_terms(nsurv, std::move(out));
    }

    /// Smallest exponent of variable i over all terms (0 for the zero polynomial).
    unsigned valuation(std::size_t i) const {
        if (terms_.empty())
            return 0;
        unsigned v = max_degree;
        for (const auto& t : terms_)
            v = std::min(v, t.mono[i]);
        return v;
    }

    /// Coefficient of x[i]^k as a polynomial in the remaining variables (x[i] dropped).
    MultiPoly coefficient_of(std::size_t i, unsigned k) const {
        std::vector<Term> out;
        for (const auto& t : terms_) {
            if (t.mono[i] != k)
                continue;
            Monomial m;
            for (std::size_t j = 0, jj = 0; j < nvars_; ++j) {
                if (j == i)
                    continue;
                if (unsigned e = t.mono[j])
                    m.set(jj, e);
                ++jj;
            }
            out.push_back({m, t.coeff});
        }
        return from_terms(nvars_ - 1, std::move(out));
    }

    /// Exact quotient *this / d, or nothing when d does not divide.
    std::optional<MultiPoly> divide_exact(const MultiPoly& d) const {
        check_same(*this, d);
        if (d.is_zero())
            throw std::domain_error("polynomial division by zero");
        if (is_zero())
            return MultiPoly(nvars_);
        if (d.is_constant())
            return *this * mpq_class(1 / d.terms_[0].coeff);
        std::map<Monomial, mpq_class, std::greater<>> rem;
        for (const auto& t : terms_)
            rem.emplace(t.mono, t.coeff);
        const Term& ld = d.terms_.front();
        std::vector<Term> q;
        while (!rem.empty()) {
            auto it = rem.begin();
            if (!ld.mono.divides(it->first))
                return std::nullopt;
            const Monomial qm = ld.mono.quotient_of(it->first);
            const mpq_class qc = it->second / ld.coeff;
            q.push_back({qm, qc});
            for (const auto& t : d.terms_) {
                const Monomial m = t.mono * qm;
                auto [jt, fresh] = rem.try_emplace(m, 0);
                jt->second -= qc * t.coeff;
                if (jt->second == 0)
                    rem.erase(jt);
            }
        }
        MultiPoly r(nvars_);
        r.terms_ = std::move(q);
        return r;
    }

    /// Returns (lc, this / lc) with lc the leading coefficient.
    std::pair<mpq_class, MultiPoly> monic() const {
        if (is_zero())
            throw std::domain_error("zero polynomial has no leading coefficient");
        const mpq_class lc = terms_.front().coeff;
        return {lc, *this * mpq_class(1 / lc)};
    }

    /// Text form: `c * x1^a * x3^b + ...` in canonical term order.
    std::string to_string(const std::vector<std::string>& names) const {
        if (names.size() < nvars_)
            throw std::invalid_argument("not enough variable names");
        if (terms_.empty())
            return "0";
        std::string s;
        for (std::size_t k = 0; k < terms_.size(); ++k) {
            if (k)
                s += " + ";
            s += terms_[k].coeff.get_str();
            for (std::size_t i = 0; i < nvars_; ++i)
                if (unsigned e = terms_[k].mono[i])
                    s += " * " + names[i] + "^" + std::to_string(e);
        }
        return s;
    }
    std::string to_string() const { return to_string(default_names(nvars_)); }

    static MultiPoly parse(std::string_view text, const std::vector<std::string>& names) {
        Parser p{text, names};
        return p.run();
    }

private:
    static std::size_t check_nvars(std::size_t n) {
        if (n > max_vars)
            throw std::invalid_argument("at most 16 variables are supported");
        return n;
    }

    static void check_same(const MultiPoly& a, const MultiPoly& b) {
        if (a.nvars_ != b.nvars_)
            throw std::invalid_argument("polynomials have different numbers of variables");
    }

    template <class T>
    static T convert(const mpq_class& c) {
        if constexpr (std::is_same_v<T, mpq_class>)
            return c;
        else if constexpr (std::is_same_v<T, std::complex<double>>)
            return std::complex<double>(c.get_d(), 0.0);
        else
            return T(c.get_d());
    }

    void canonicalize() {
        for (auto& t : terms_)
            t.coeff.canonicalize();
        std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.mono > b.mono; });
        std::size_t w = 0;
        for (std::size_t r = 0; r < terms_.size();) {
            Term t = std::move(terms_[r]);
            std::size_t k = r + 1;
            while (k < terms_.size() && terms_[k].mono == t.mono)
                t.coeff += terms_[k++].coeff;
            r = k;
            if (t.coeff != 0)
                terms_[w++] = std::move(t);
        }
        terms_.resize(w);
    }

    static MultiPoly merge(const MultiPoly& a, const MultiPoly& b, bool subtract) {
        check_same(a, b);
        MultiPoly r(a.nvars_);
        r.terms_.reserve(a.size() + b.size());
        std::size_t i = 0, j = 0;
        while (i < a.size() || j < b.size()) {
            if (j == b.size() || (i < a.size() && a.terms_[i].mono > b.terms_[j].mono)) {
                r.terms_.push_back(a.terms_[i++]);
            } else if (i == a.size() || b.terms_[j].mono > a.terms_[i].mono) {
                r.terms_.push_back({b.terms_[j].mono, subtract ? mpq_class(-b.terms_[j].coeff) : b.terms_[j].coeff});
                ++j;
            } else {
                mpq_class c = subtract ? mpq_class(a.terms_[i].coeff - b.terms_[j].coeff)
                                       : mpq_class(a.terms_[i].coeff + b.terms_[j].coeff);
                if (c != 0)
                    r.terms_.push_back({a.terms_[i].mono, std::move(c)});
                ++i;
                ++j;
            }
        }
        return r;
    }

    static void check_permutation(std::span<const std::size_t> perm, std::size_t n) {
        if (perm.size() != n)
            throw std::invalid_argument("permutation has wrong length");
        std::vector<bool> seen(n, false);
        for (auto p : perm) {
            if (p >= n || seen[p])
                throw std::invalid_argument("malformed permutation");
            seen[p] = true;
        }
    }

    struct Parser {
        std::string_view s;
        const std::vector<std::string>& names;
        std::size_t pos = 0;

        void skip() {
            while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
                ++pos;
        }
        [[noreturn]] void fail(const std::string& msg) const {
            throw std::invalid_argument("polynomial parse error at offset " + std::to_string(pos) + ": " + msg);
        }
        bool eat(char c) {
            skip();
            if (pos < s.size() && s[pos] == c) {
                ++pos;
                return true;
            }
            return false;
        }
        mpq_class number() {
            skip();
            std::size_t start = pos;
            if (pos < s.size() && (s[pos] == '-' || s[pos] == '+'))
                ++pos;
            while (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '/'))
                ++pos;
            std::string tok(s.substr(start, pos - start));
            if (tok.empty() || tok == "-" || tok == "+")
                fail("expected coefficient");
            if (tok[0] == '+')
                tok.erase(0, 1);
            mpq_class q;
            if (q.set_str(tok, 10) != 0)
                fail("bad rational '" + tok + "'");
            q.canonicalize();
            return q;
        }
        std::size_t variable() {
            skip();
            std::size_t start = pos;
            while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
                ++pos;
            std::string_view tok = s.substr(start, pos - start);
            for (std::size_t i = 0; i < names.size(); ++i)
                if (names[i] == tok)
                    return i;
            fail("unknown variable '" + std::string(tok) + "'");
        }
        MultiPoly run() {
            const std::size_t n = names.size();
            std::vector<Term> terms;
            skip();
            if (s.substr(pos) == "0")
                return MultiPoly(n);
            do {
                mpq_class c = number();
                std::vector<unsigned> e(n, 0);
                while (eat('*')) {
                    std::size_t v = variable();
                    unsigned k = 1;
                    if (eat('^')) {
                        mpq_class q = number();
                        if (q < 0 || q.get_den() != 1)
                            fail("exponent must be a nonnegative integer");
                        k = static_cast<unsigned>(q.get_num().get_ui());
                    }
                    e[v] += k;
                }
                terms.push_back({Monomial(e), c});
            } while (eat('+'));
            skip();
            if (pos != s.size())
                fail("trailing input");
            return from_terms(n, std::move(terms));
        }
    };

    std::size_t nvars_ = 0;
    std::vector<Term> terms_;
};

} // namespace plancherel
