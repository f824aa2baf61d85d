#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "plancherel/ratfun.hpp"

namespace plancherel {

enum class Family { PS, QT, RU };
enum class Variant { sym, asym };

inline std::string to_string(Family f) {
    switch (f) {
    case Family::PS: return "PS";
    case Family::QT: return "QT";
    case Family::RU: return "RU";
    }
    return "?";
}

/// ((k(k-1)/2 - floor(k/2)) / 2; the numerator is always even.
inline long sign_exponent(long k) {
    const long twice = k * (k - 1) / 2 - k / 2;
    if (twice < 0 || twice % 2 != 0)
        throw std::logic_error("sign exponent is not a nonnegative integer");
    return twice / 2;
}

inline std::uint64_t factorial(unsigned k) {
    std::uint64_t r = 1;
    for (unsigned i = 2; i <= k; ++i)
        r *= i;
    return r;
}

/// One of the three families. For QT and RU the size lives in `m`.
struct FamilySpec {
    Family kind = Family::PS;
    unsigned m = 0;
    unsigned n = 0;

    static FamilySpec ps(unsigned m, unsigned n) { return {Family::PS, m, n}; }
    static FamilySpec qt(unsigned p) { return {Family::QT, p, 0}; }
    static FamilySpec ru(unsigned q) { return {Family::RU, q, 0}; }

    void validate() const {
        if (kind == Family::PS) {
            if (m < n)
                throw std::invalid_argument("PS family requires m >= n");
            if (m + n == 0)
                throw std::invalid_argument("PS family requires m + n >= 1");
        } else if (m < 1) {
            throw std::invalid_argument(to_string(kind) + " family requires size >= 1");
        }
        if (nvars() + 1 > max_vars)
            throw cap_error("family has too many variables");
    }

    std::size_t nvars() const { return kind == Family::PS ? m + n : m; }

    std::vector<std::string> variable_names() const {
        std::vector<std::string> v;
        if (kind == Family::PS) {
            for (unsigned i = 1; i <= m; ++i)
                v.push_back("x" + std::to_string(i));
            for (unsigned i = 1; i <= n; ++i)
                v.push_back("xs" + std::to_string(i));
        } else {
            const char* base = kind == Family::QT ? "y" : "z";
            for (unsigned i = 1; i <= m; ++i)
                v.push_back(base + std::to_string(i));
        }
        return v;
    }

    long epsilon() const { return kind == Family::PS ? 0 : sign_exponent(m); }

    /// Power of s in the starred limit.
    unsigned limit_exponent() const {
        switch (kind) {
        case Family::PS: return n;
        case Family::QT: return m / 2;
        case Family::RU: return (m + 1) / 2;
        }
        return 0;
    }

    std::uint64_t group_order() const { return kind == Family::PS ? factorial(m) * factorial(n) : factorial(m); }

    std::uint64_t subgroup_order() const {
        if (kind == Family::PS)
            return factorial(n) * factorial(m - n);
        return factorial(m / 2) * (std::uint64_t{1} << (m / 2));
    }

    std::string label() const {
        if (kind == Family::PS)
            return "PS(" + std::to_string(m) + "," + std::to_string(n) + ")";
        return to_string(kind) + "(" + std::to_string(m) + ")";
    }
};

namespace detail {

inline MultiPoly lin2(std::size_t nvars, std::size_t i, long a, std::size_t j, long b) {
    return MultiPoly::linear(nvars, {{i, mpq_class(a)}, {j, mpq_class(b)}});
}

} // namespace detail

/// The family members as written: `sym` gives P, Q, R and `asym` gives S, T, U.
inline RatFun build(const FamilySpec& spec, Variant which) {
    spec.validate();
    using detail::lin2;
    const std::size_t nv = spec.nvars();
    RatFun f = RatFun::constant(nv, 1);
    auto mul = [&](const MultiPoly& p) { f *= RatFun(p); };
    auto div = [&](const MultiPoly& p) { f = f / RatFun(p); };
    const unsigned m = spec.m;
    if (spec.kind == Family::PS) {
        const unsigned n = spec.n;
        auto X = [](unsigned j) { return std::size_t{j - 1}; };
        auto Xs = [m](unsigned j) { return std::size_t{m + j - 1}; };
        if (which == Variant::sym) {
            for (unsigned j = 1; j <= m; ++j)
                for (unsigned k = 1; k <= m; ++k)
                    if (j != k)
                        mul(lin2(nv, X(j), 1, X(k), -1));
            for (unsigned j = 1; j <= n; ++j)
                for (unsigned k = 1; k <= n; ++k)
                    if (j != k)
                        mul(lin2(nv, Xs(j), 1, Xs(k), -1));
            for (unsigned j = 1; j <= m; ++j)
                for (unsigned k = 1; k <= n; ++k)
                    div(lin2(nv, X(j), 1, Xs(k), 1));
        } else {
            for (unsigned j = 1; j <= n; ++j)
                for (unsigned k = j + 1; k <= n; ++k)
                    mul(lin2(nv, Xs(j), 1, Xs(k), -1));
            for (unsigned j = 1; j <= m; ++j)
                for (unsigned k = j + 1; k <= m; ++k)
                    mul(lin2(nv, X(j), 1, X(k), -1));
            for (unsigned k = n + 1; k <= m; ++k)
                for (unsigned j = k + 1; j <= m; ++j)
                    mul(lin2(nv, X(j), 1, X(k), -1));
            for (unsigned k = 1; k <= n; ++k)
                div(lin2(nv, X(k), 1, Xs(k), 1));
        }
        return f;
    }
    auto V = [](unsigned j) { return std::size_t{j - 1}; };
    const mpq_class sign = spec.epsilon() % 2 ? -1 : 1;
    if (spec.kind == Family::QT) {
        if (which == Variant::sym) {
            for (unsigned j = 1; j <= m; ++j)
                for (unsigned k = 1; k <= m; ++k)
                    if (j != k)
                        mul(lin2(nv, V(j), 1, V(k), -1));
            for (unsigned j = 1; j <= m; ++j)
                for (unsigned k = j + 1; k <= m; ++k)
                    div(lin2(nv, V(j), 1, V(k), 1));
        } else {
            f = f * sign;
            for (unsigned j = 1; j <= m; ++j)
                for (unsigned k = j + 1; k <= m; ++k)
                    mul(lin2(nv, V(j), 1, V(k), -1));
            for (unsigned k = 1; k <= m / 2; ++k)
                mul(lin2(nv, V(m + 1 - k), 1, V(k), -1));
            for (unsigned k = 1; k <= m / 2; ++k)
                div(lin2(nv, V(k), 1, V(m + 1 - k), 1));
        }
        return f;
    }
    if (which == Variant::sym) {
        for (unsigned j = 1; j <= m; ++j)
            for (unsigned k = 1; k <= m; ++k)
                if (j != k)
                    mul(lin2(nv, V(j), 1, V(k), -1));
        for (unsigned j = 1; j <= m; ++j)
            for (unsigned k = j; k <= m; ++k)
                div(j == k ? MultiPoly::linear(nv, {{V(j), mpq_class(2)}}) : lin2(nv, V(j), 1, V(k), 1));
    } else {
        f = f * sign;
        for (unsigned j = 1; j <= m; ++j)
            for (unsigned k = j + 1; k <= m; ++k)
                mul(lin2(nv, V(j), 1, V(k), -1));
        for (unsigned k = 1; k <= m / 2; ++k)
            div(lin2(nv, V(k), 1, V(m + 1 - k), 1));
        for (unsigned k = 1; k <= (m + 1) / 2; ++k)
            div(MultiPoly::linear(nv, {{V(k), mpq_class(2)}}));
    }
    return f;
}

/// The product that turns a family member into its starred form.
inline RatFun star_multiplier(const FamilySpec& spec) {
    spec.validate();
    const std::size_t nv = spec.nvars();
    RatFun f = RatFun::constant(nv, 1);
    if (spec.kind == Family::PS) {
        for (unsigned k = 0; k < spec.n; ++k)
            f *= RatFun(detail::lin2(nv, k, 1, spec.m + k, 1));
        return f;
    }
    const unsigned p = spec.m;
    const unsigned upto = spec.kind == Family::QT ? p / 2 : (p + 1) / 2;
    for (unsigned k = 1; k <= upto; ++k) {
        const std::size_t a = k - 1, b = p - k;
        f *= RatFun(a == b ? MultiPoly::linear(nv, {{a, mpq_class(2)}}) : detail::lin2(nv, a, 1, b, 1));
    }
    return f;
}

inline RatFun build_starred(const FamilySpec& spec, Variant which) { return star_multiplier(spec) * build(spec, which); }

/// Alias table of the subspace on which the starred limits live.
inline std::vector<std::optional<Alias>> subspace_aliases(const FamilySpec& spec) {
    spec.validate();
    std::vector<std::optional<Alias>> a(spec.nvars());
    if (spec.kind == Family::PS) {
        for (unsigned k = 0; k < spec.n; ++k)
            a[spec.m + k] = Alias{k, -1};
        return a;
    }
    const unsigned p = spec.m;
    for (unsigned l = 1; l <= p / 2; ++l)
        a[p - l] = Alias{l - 1, -1};
    if (spec.kind == Family::RU && p % 2 == 1)
        a[p / 2] = Alias{0, 0};
    return a;
}

/// All elements of the permutation group acting on the family, as variable maps.
inline std::vector<std::vector<std::size_t>> enumerate_group(const FamilySpec& spec,
                                                              std::uint64_t limit = 3628800) {
    spec.validate();
    if (spec.group_order() > limit)
        throw cap_error("group enumeration needs " + std::to_string(spec.group_order()) + " elements, limit is " +
                        std::to_string(limit));
    std::vector<std::vector<std::size_t>> out;
    if (spec.kind == Family::PS) {
        std::vector<std::size_t> a(spec.m), b(spec.n);
        std::iota(a.begin(), a.end(), 0);
        do {
            std::iota(b.begin(), b.end(), 0);
            do {
                std::vector<std::size_t> w(a);
                for (auto x : b)
                    w.push_back(spec.m + x);
                out.push_back(std::move(w));
            } while (std::next_permutation(b.begin(), b.end()));
        } while (std::next_permutation(a.begin(), a.end()));
        return out;
    }
    std::vector<std::size_t> a(spec.m);
    std::iota(a.begin(), a.end(), 0);
    do
        out.push_back(a);
    while (std::next_permutation(a.begin(), a.end()));
    return out;
}

/// Membership in the distinguished subgroup, by its closed-form description.
inline bool in_subgroup(const FamilySpec& spec, const std::vector<std::size_t>& w) {
    if (spec.kind == Family::PS) {
        for (unsigned i = 0; i < spec.n; ++i)
            if (w[i] != w[spec.m + i] - spec.m)
                return false;
        return true;
    }
    const std::size_t p = spec.m;
    for (std::size_t l = 0; l < p; ++l)
        if (w[p - 1 - l] != p - 1 - w[l])
            return false;
    return true;
}

struct SymmetrizationReport {
    FamilySpec spec;
    bool holds = false;
    std::uint64_t group_order = 0;
    std::uint64_t subgroup_order = 0;
    std::size_t distinct_terms = 0;
    RatFun lhs;
    RatFun rhs;
    double elapsed = 0;
};

/// Checks that averaging the asym member over the group (normalized by the
/// subgroup order) reproduces the sym member exactly.
inline SymmetrizationReport verify_symmetrization(const FamilySpec& spec, std::uint64_t limit = 3628800) {
    const auto t0 = std::chrono::steady_clock::now();
    SymmetrizationReport rep;
    rep.spec = spec;
    const auto group = enumerate_group(spec, limit);
    rep.group_order = group.size();
    rep.subgroup_order = static_cast<std::uint64_t>(
        std::count_if(group.begin(), group.end(), [&](const auto& w) { return in_subgroup(spec, w); }));
    const RatFun base = build(spec, Variant::asym);

    // Identical images are grouped and weighted; no coset structure is assumed.
    std::unordered_map<std::size_t, std::vector<std::pair<RatFun, std::uint64_t>>> buckets;
    std::vector<std::pair<std::size_t, std::size_t>> order;
    for (const auto& w : group) {
        RatFun img = base.permuted(w);
        auto& bucket = buckets[img.representation_hash()];
        bool found = false;
        for (auto& [r, c] : bucket)
            if (r.same_representation(img)) {
                ++c;
                found = true;
                break;
            }
        if (!found) {
            order.emplace_back(img.representation_hash(), bucket.size());
            bucket.emplace_back(std::move(img), 1);
        }
    }
    rep.distinct_terms = order.size();
    RatFun sum(spec.nvars());
    for (const auto& [h, k] : order) {
        const auto& [r, c] = buckets[h][k];
        sum += r * mpq_class(static_cast<unsigned long>(c));
    }
    rep.lhs = sum * mpq_class(1, static_cast<unsigned long>(rep.subgroup_order));
    rep.rhs = build(spec, Variant::sym);
    rep.holds = rep.lhs == rep.rhs;
    rep.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

/// Group elements fixing the given member (compared exactly).
inline std::vector<std::vector<std::size_t>> stabilizer(const FamilySpec& spec, Variant which) {
    const RatFun f = build(spec, which);
    std::vector<std::vector<std::size_t>> out;
    for (const auto& w : enumerate_group(spec))
        if (f.permuted(w) == f)
            out.push_back(w);
    return out;
}

/// Random rational in [-bound, bound] with denominator in [1, bound].
inline mpq_class random_rational(std::mt19937_64& rng, long bound = 20) {
    std::uniform_int_distribution<long> num(-bound, bound), den(1, bound);
    mpq_class q(num(rng), den(rng));
    q.canonicalize();
    return q;
}

struct StarredLimitReport {
    FamilySpec spec;
    bool holds = false;
    bool limits_agree = false;
    bool starred_agree = false;
    bool polynomial_on_subspace = false;
    int points = 0;
    int resamples = 0;
    RatFun limit_sym;
    RatFun starred_sym;
    std::optional<MultiPoly> starred_polynomial;
    double elapsed = 0;
};

/// On the subspace, compares lim s^N (shifted sym), lim s^N (shifted asym), and the
/// restricted starred forms of both, at random rational points; also checks that the
/// starred restriction is a polynomial.
inline StarredLimitReport verify_starred_limits(const FamilySpec& spec, int npoints, std::uint64_t seed = 1) {
    const auto t0 = std::chrono::steady_clock::now();
    StarredLimitReport rep;
    rep.spec = spec;
    const auto aliases = subspace_aliases(spec);
    auto with_s = aliases;
    with_s.push_back(std::nullopt);
    const int N = static_cast<int>(spec.limit_exponent());

    const RatFun sym = build(spec, Variant::sym), asym = build(spec, Variant::asym);
    rep.limit_sym = sym.shift_s().restricted(with_s).limit_s_power(N);
    const RatFun limit_asym = asym.shift_s().restricted(with_s).limit_s_power(N);
    rep.starred_sym = build_starred(spec, Variant::sym).restricted(aliases);
    const RatFun starred_asym = build_starred(spec, Variant::asym).restricted(aliases);

    rep.starred_polynomial = rep.starred_sym.as_polynomial();
    const auto asym_poly = starred_asym.as_polynomial();
    rep.polynomial_on_subspace = rep.starred_polynomial.has_value() && asym_poly.has_value();

    std::mt19937_64 rng(seed);
    const std::size_t dim = rep.starred_sym.nvars();
    bool limits_ok = true, starred_ok = true;
    for (int k = 0; k < npoints; ++k) {
        for (int attempt = 0;; ++attempt) {
            if (attempt == 10)
                throw pole_error("starred limit check: 10 consecutive sample points hit poles");
            std::vector<mpq_class> pt(dim);
            for (auto& x : pt)
                x = random_rational(rng);
            try {
                const mpq_class a = rep.limit_sym.eval(pt);
                const mpq_class b = limit_asym.eval(pt);
                const mpq_class c = rep.starred_sym.eval(pt);
                const mpq_class d = starred_asym.eval(pt);
                limits_ok = limits_ok && a == b && a == c;
                starred_ok = starred_ok && c == d;
                if (rep.starred_polynomial)
                    starred_ok = starred_ok && rep.starred_polynomial->eval(pt) == c;
                break;
            } catch (const pole_error&) {
                ++rep.resamples;
            }
        }
        ++rep.points;
    }
    rep.limits_agree = limits_ok;
    rep.starred_agree = starred_ok;
    rep.holds = limits_ok && starred_ok && rep.polynomial_on_subspace;
    rep.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

} // namespace plancherel
