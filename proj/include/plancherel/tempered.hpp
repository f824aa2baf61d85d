#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "plancherel/localfactors.hpp"
#include "plancherel/pvlimits.hpp"

namespace plancherel::tempered {

using local::CharData;
using local::cplx;
using local::FieldData;
using local::GammaFactor;

/// generic: tau not isomorphic to tau*; plus/minus: tau = tau* with gamma(0, tau, As)
/// nonzero / zero.
enum class AsaiType { generic, plus, minus };

inline std::string to_string(AsaiType t) {
    switch (t) {
    case AsaiType::generic:
        return "generic";
    case AsaiType::plus:
        return "plus";
    case AsaiType::minus:
        return "minus";
    }
    return "?";
}

inline AsaiType asai_type_from_string(const std::string& s) {
    if (s == "generic")
        return AsaiType::generic;
    if (s == "plus")
        return AsaiType::plus;
    if (s == "minus")
        return AsaiType::minus;
    throw std::invalid_argument("unknown asai_type '" + s + "'");
}

/// Stand-in for a discrete series of G_d(E): a label, its dimension, its symmetry type and
/// the label of tau* = (tau^c)^v. A character of E^x when d = 1 and it comes from the catalogue.
struct DiscreteBlock {
    std::string id;
    unsigned d = 1;
    AsaiType type = AsaiType::generic;
    std::string dual;
    std::optional<CharData> character;

    bool self_dual() const { return type != AsaiType::generic; }
};

/// gamma(s, tau, Ad), gamma(s, tau, As), gamma(s, tau x tau'^v), gamma(s, tau x tau'^c).
enum class HandleKind { Ad, As, CrossDual, CrossConj };

struct HandleKey {
    HandleKind kind;
    std::string a, b;

    auto operator<=>(const HandleKey&) const = default;

    std::string to_string() const {
        switch (kind) {
        case HandleKind::Ad:
            return a + ", Ad";
        case HandleKind::As:
            return a + ", As";
        case HandleKind::CrossDual:
            return a + " x " + b + "^v";
        case HandleKind::CrossConj:
            return a + " x " + b + "^c";
        }
        return "?";
    }

    static HandleKey ad(const std::string& a) { return {HandleKind::Ad, a, ""}; }
    static HandleKey as(const std::string& a) { return {HandleKind::As, a, ""}; }
    static HandleKey cross_dual(const std::string& a, const std::string& b) { return {HandleKind::CrossDual, a, b}; }
    /// tau x tau'^c and tau' x tau^c are conjugate, so the key is unordered.
    static HandleKey cross_conj(const std::string& a, const std::string& b) {
        return a <= b ? HandleKey{HandleKind::CrossConj, a, b} : HandleKey{HandleKind::CrossConj, b, a};
    }
};

namespace detail {

inline bool same_character(const CharData& x, const CharData& y) {
    return x.base == y.base && x.u_re == y.u_re && x.u_im == y.u_im && x.eta == y.eta && x.sign == y.sign &&
           x.weight == y.weight && mpq_class(x.turn - y.turn).get_den() == 1;
}

inline CharData conjugate_dual(const CharData& chi) {
    CharData c = chi.conj().inverse();
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), c.turn.get_num_mpz_t(), c.turn.get_den_mpz_t());
    c.turn -= f;
    c.turn.canonicalize();
    return c;
}

} // namespace detail

/// Registered blocks and their gamma handles. Registration is single threaded; afterwards the
/// table is read only. In formal mode no handle is evaluated and orders at 0 follow from the
/// block data alone.
class BlockTable {
  public:
    explicit BlockTable(FieldData field, bool formal = false) : field_(std::move(field)), formal_(formal) {
        field_.validate();
    }

    const FieldData& field() const { return field_; }
    bool formal() const { return formal_; }

    void add_self_dual(const std::string& id, unsigned d, AsaiType type) {
        if (type == AsaiType::generic)
            throw std::invalid_argument("block " + id + ": a self-dual block must be of plus or minus type");
        insert(DiscreteBlock{id, d, type, id, std::nullopt});
    }

    void add_generic_pair(const std::string& id, const std::string& dual_id, unsigned d) {
        if (id == dual_id)
            throw std::invalid_argument("generic block " + id + " cannot be its own conjugate dual");
        insert(DiscreteBlock{id, d, AsaiType::generic, dual_id, std::nullopt});
        insert(DiscreteBlock{dual_id, d, AsaiType::generic, id, std::nullopt});
    }

    /// A unitary character of E^x. The Asai type is computed from the restriction to F^x and
    /// checked against `declared` when given; a generic character also registers its dual as
    /// id + "*". Returns the id of the dual.
    std::string add_character(const std::string& id, const CharData& chi, std::optional<AsaiType> declared = {}) {
        if (field_.is_padic() && field_.ext != local::Extension::unramified)
            throw std::invalid_argument("d=1 catalogue supports C/R and unramified p-adic data only");
        if (chi.base != CharData::Base::E)
            throw std::invalid_argument("block " + id + ": catalogue characters live on E^x");
        chi.validate(field_);
        if (!chi.is_unitary())
            throw std::invalid_argument("block " + id + ": catalogue characters must be unitary");
        const CharData star = detail::conjugate_dual(chi);
        AsaiType type = AsaiType::generic;
        if (detail::same_character(chi, star)) {
            const int ord = local::tate_gamma(chi.restricted_to_F(field_), field_).order_at_zero();
            type = ord > 0 ? AsaiType::minus : AsaiType::plus;
        }
        if (declared && *declared != type)
            throw std::invalid_argument("block " + id + ": declared asai_type " + tempered::to_string(*declared) +
                                        " but the character is " + tempered::to_string(type));
        if (type != AsaiType::generic) {
            insert(DiscreteBlock{id, 1, type, id, chi});
            return id;
        }
        const std::string dual_id = id + "*";
        insert(DiscreteBlock{id, 1, type, dual_id, chi});
        insert(DiscreteBlock{dual_id, 1, type, id, star});
        return dual_id;
    }

    void set_handle(const HandleKey& key, const GammaFactor& g) {
        block(key.a);
        if (key.kind == HandleKind::CrossDual || key.kind == HandleKind::CrossConj)
            block(key.b);
        if (g.kind() != field_.kind || g.q() != field_.q)
            throw std::invalid_argument("handle " + key.to_string() + " lives over a different field");
        user_[key] = g;
    }

    bool has(const std::string& id) const { return blocks_.count(id) > 0; }

    const DiscreteBlock& block(const std::string& id) const {
        auto it = blocks_.find(id);
        if (it == blocks_.end())
            throw std::invalid_argument("unknown block '" + id + "'");
        return it->second;
    }

    std::vector<std::string> ids() const {
        std::vector<std::string> v;
        for (const auto& [k, b] : blocks_)
            v.push_back(k);
        return v;
    }

    /// User handle, else derived from the characters (d = 1), else nothing.
    std::optional<GammaFactor> handle(const HandleKey& key) const {
        if (auto it = user_.find(key); it != user_.end())
            return it->second;
        const auto& A = block(key.a);
        if (!A.character)
            return std::nullopt;
        const CharData& x = *A.character;
        switch (key.kind) {
        case HandleKind::Ad:
            // Ad of a character of E^x is Ind(1_E) = 1_F + eta
            return local::induced_gamma(CharData::on_E(), field_);
        case HandleKind::As:
            return local::tate_gamma(x.restricted_to_F(field_), field_);
        case HandleKind::CrossDual:
        case HandleKind::CrossConj: {
            const auto& B = block(key.b);
            if (!B.character)
                return std::nullopt;
            const CharData y = key.kind == HandleKind::CrossDual ? B.character->inverse() : B.character->conj();
            return local::induced_gamma(x * y, field_);
        }
        }
        return std::nullopt;
    }

    /// "supplied", "derived", "formal" or "missing".
    std::string provenance(const HandleKey& key) const {
        if (user_.count(key))
            return "supplied";
        if (formal_)
            return "formal";
        return handle(key) ? "derived" : "missing";
    }

    /// Order at s = 0 predicted by the block data: Ad has a simple zero; tau x tau'^v vanishes
    /// iff tau = tau'; tau x tau'^c iff tau = tau'*; As iff tau is of minus type.
    int formal_order(const HandleKey& key) const {
        switch (key.kind) {
        case HandleKind::Ad:
            return 1;
        case HandleKind::As:
            return block(key.a).type == AsaiType::minus ? 1 : 0;
        case HandleKind::CrossDual:
            return key.a == key.b ? 1 : 0;
        case HandleKind::CrossConj:
            return key.a == block(key.b).dual ? 1 : 0;
        }
        return 0;
    }

  private:
    FieldData field_;
    bool formal_;
    std::map<std::string, DiscreteBlock> blocks_;
    std::map<HandleKey, GammaFactor> user_;

    void insert(DiscreteBlock b) {
        if (b.id.empty())
            throw std::invalid_argument("block id must be nonempty");
        if (b.d < 1)
            throw std::invalid_argument("block " + b.id + ": dimension must be >= 1");
        if (blocks_.count(b.id))
            throw std::invalid_argument("block '" + b.id + "' registered twice");
        blocks_.emplace(b.id, std::move(b));
    }
};

/// One entry tau |det|_E^{i x}.
struct Entry {
    std::string block;
    double twist = 0;
    bool operator==(const Entry&) const = default;
    friend bool operator<(const Entry& a, const Entry& b) {
        return a.block != b.block ? a.block < b.block : a.twist < b.twist;
    }
};

/// tau_1 x ... x tau_k with twists, a tempered representation of G_n(E).
struct TemperedParamGL {
    std::vector<Entry> entries;
    bool eta_twist = false; // produced by the unstable base change BC_n, n even

    unsigned size(const BlockTable& t) const {
        unsigned n = 0;
        for (const auto& e : entries)
            n += t.block(e.block).d;
        return n;
    }

    void validate(const BlockTable& t) const {
        if (entries.empty())
            throw std::invalid_argument("GL parameter needs at least one block");
        for (const auto& e : entries) {
            t.block(e.block);
            if (!std::isfinite(e.twist))
                throw std::invalid_argument("twist of " + e.block + " is not finite");
        }
    }

    std::string label() const {
        std::ostringstream os;
        for (std::size_t i = 0; i < entries.size(); ++i)
            os << (i ? " x " : "") << entries[i].block << (entries[i].twist != 0 ? "[" + fmt(entries[i].twist) + "]" : "");
        return os.str();
    }

  private:
    static std::string fmt(double x) {
        std::ostringstream os;
        os << x;
        return os.str();
    }
};

/// tau_1 x ... x tau_k x| sigma_0 with sigma_0 described by BC(sigma_0) = product of the anchors.
struct TemperedParamU {
    std::vector<Entry> gl;
    std::vector<std::string> anchor;

    unsigned rank(const BlockTable& t) const {
        unsigned n = 0;
        for (const auto& e : gl)
            n += 2 * t.block(e.block).d;
        for (const auto& a : anchor)
            n += t.block(a).d;
        return n;
    }

    bool discrete() const { return gl.empty(); }

    void validate(const BlockTable& t) const {
        if (gl.empty() && anchor.empty())
            throw std::invalid_argument("unitary parameter of rank 0");
        for (const auto& e : gl) {
            t.block(e.block);
            if (!std::isfinite(e.twist))
                throw std::invalid_argument("twist of " + e.block + " is not finite");
        }
        std::vector<std::string> a = anchor;
        std::sort(a.begin(), a.end());
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (t.block(a[i]).type != AsaiType::minus)
                throw std::invalid_argument("anchor block " + a[i] + " is not of minus type");
            if (i && a[i] == a[i - 1])
                throw std::invalid_argument("anchor block " + a[i] + " repeated");
        }
    }

    std::string label() const {
        std::ostringstream os;
        os << "[";
        for (std::size_t i = 0; i < gl.size(); ++i)
            os << (i ? " x " : "") << gl[i].block << (gl[i].twist != 0 ? "[" + std::to_string(gl[i].twist) + "]" : "");
        os << "] x| {";
        for (std::size_t i = 0; i < anchor.size(); ++i)
            os << (i ? "," : "") << anchor[i];
        os << "}";
        return os.str();
    }
};

/// (tau, x) and (tau*, -x) give the same unitary parameter; pick one and sort.
inline TemperedParamU canonical(const TemperedParamU& s, const BlockTable& t) {
    TemperedParamU r = s;
    for (auto& e : r.gl) {
        const std::string& dual = t.block(e.block).dual;
        if (e.twist < 0 || (e.twist == 0 && dual < e.block))
            e = Entry{dual, e.twist == 0 ? 0.0 : -e.twist};
    }
    std::sort(r.gl.begin(), r.gl.end());
    std::sort(r.anchor.begin(), r.anchor.end());
    return r;
}

/// BC_n(sigma): each (tau, x) contributes (tau, x) and (tau*, -x), the anchors sit at twist 0.
/// Blocks are read in the BC_n normalization, so the eta'_n twist is only recorded.
inline TemperedParamGL bc(const TemperedParamU& s, unsigned n, const BlockTable& t) {
    s.validate(t);
    if (s.rank(t) != n)
        throw std::invalid_argument("bc: parameter has rank " + std::to_string(s.rank(t)) + ", not " + std::to_string(n));
    TemperedParamGL p;
    for (const auto& e : s.gl) {
        p.entries.push_back(e);
        p.entries.push_back(Entry{t.block(e.block).dual, e.twist == 0 ? 0.0 : -e.twist});
    }
    for (const auto& a : s.anchor)
        p.entries.push_back(Entry{a, 0});
    p.eta_twist = n % 2 == 0;
    return p;
}

struct BCImage {
    bool in_image = false;
    std::optional<TemperedParamU> witness;
    std::string reason;
};

/// pi is in the image iff it pairs up as {(tau, x), (tau*, -x)} with the leftovers distinct
/// minus-type blocks at twist 0. Twists are compared exactly.
inline BCImage in_bc_image(const TemperedParamGL& p, const BlockTable& t) {
    p.validate(t);
    std::map<Entry, unsigned> count;
    for (const auto& e : p.entries)
        ++count[Entry{e.block, e.twist == 0 ? 0.0 : e.twist}];
    BCImage r;
    TemperedParamU s;
    for (const auto& [e, c] : count) {
        const DiscreteBlock& b = t.block(e.block);
        const Entry partner{b.dual, e.twist == 0 ? 0.0 : -e.twist};
        if (partner == e) {
            if (b.type == AsaiType::plus && c % 2) {
                r.reason = "plus-type block " + e.block + " occurs an odd number of times";
                return r;
            }
            for (unsigned i = 0; i < c / 2; ++i)
                s.gl.push_back(e);
            if (c % 2)
                s.anchor.push_back(e.block);
            continue;
        }
        auto it = count.find(partner);
        const unsigned cp = it == count.end() ? 0 : it->second;
        if (cp != c) {
            r.reason = e.block + " occurs " + std::to_string(c) + " times but its conjugate dual partner " +
                       partner.block + " occurs " + std::to_string(cp) + " times";
            return r;
        }
        if (partner < e)
            continue; // counted from the other side
        for (unsigned i = 0; i < c; ++i)
            s.gl.push_back(e);
    }
    r.in_image = true;
    r.witness = canonical(s, t);
    return r;
}

/// |S_pi| = prod over the entries of 2 d.
inline std::uint64_t s_group_order(const TemperedParamGL& p, const BlockTable& t) {
    std::uint64_t r = 1;
    for (const auto& e : p.entries)
        r *= 2 * t.block(e.block).d;
    return r;
}

/// |S_sigma| = prod over the GL part of 2 d, times 2 per anchor block.
inline std::uint64_t s_group_order(const TemperedParamU& s, const BlockTable& t) {
    std::uint64_t r = 1;
    for (const auto& e : s.gl)
        r *= 2 * t.block(e.block).d;
    return r << s.anchor.size();
}

/// prod of mult! over distinct (block, twist).
inline std::uint64_t weyl_order(const TemperedParamGL& p, const BlockTable& t) {
    p.validate(t);
    std::map<Entry, unsigned> count;
    for (const auto& e : p.entries)
        ++count[Entry{e.block, e.twist == 0 ? 0.0 : e.twist}];
    std::uint64_t r = 1;
    for (const auto& [e, c] : count)
        r *= factorial(c);
    return r;
}

/// Signed permutations of the GL part fixing sigma: a class {(tau, x), (tau*, -x)} of total
/// multiplicity k contributes k!, times 2^k when the class is a single self-dual point.
inline std::uint64_t weyl_order(const TemperedParamU& s, const BlockTable& t) {
    s.validate(t);
    const TemperedParamU c = canonical(s, t);
    std::map<Entry, unsigned> count;
    for (const auto& e : c.gl)
        ++count[e];
    std::uint64_t r = 1;
    for (const auto& [e, k] : count) {
        r *= factorial(k);
        if (e.twist == 0 && t.block(e.block).self_dual())
            r <<= k;
    }
    return r;
}

/// The residual-distribution data of pi with its twists forgotten: a PS block per generic pair
/// {tau, tau*}, a QT block per plus-type and an RU block per minus-type block.
inline SpectralConfig spectral_config(const TemperedParamGL& p, const BlockTable& t) {
    p.validate(t);
    std::map<std::string, unsigned> count;
    for (const auto& e : p.entries)
        ++count[e.block];
    SpectralConfig cfg;
    for (const auto& [id, c] : count) {
        const DiscreteBlock& b = t.block(id);
        if (b.type == AsaiType::plus) {
            cfg.qt.push_back({c, b.d});
        } else if (b.type == AsaiType::minus) {
            cfg.ru.push_back({c, b.d});
        } else {
            auto it = count.find(b.dual);
            const unsigned cd = it == count.end() ? 0 : it->second;
            if (cd > c || (cd == c && b.dual < id))
                continue; // listed with its partner
            cfg.ps.push_back({c, cd, b.d});
        }
    }
    return cfg;
}

/// gamma(s + i shift, key)^exp.
struct Term {
    HandleKey key;
    mpq_class shift = 0;
    int exp = 1;
};

/// A product of block-level gamma handles.
struct Assembled {
    std::vector<Term> terms;
    int order = 0;                    // at s = 0
    std::optional<GammaFactor> factor; // when every handle is concrete

    std::string formula() const {
        std::ostringstream os;
        std::string num, den;
        for (const auto& tm : terms) {
            std::string f = "gamma(s";
            if (tm.shift != 0)
                f += (tm.shift > 0 ? " + " : " - ") + std::to_string(std::abs(tm.shift.get_d())) + "i";
            f += ", " + tm.key.to_string() + ")";
            if (std::abs(tm.exp) != 1)
                f += "^" + std::to_string(std::abs(tm.exp));
            std::string& side = tm.exp > 0 ? num : den;
            side += (side.empty() ? "" : " * ") + f;
        }
        os << (num.empty() ? "1" : num);
        if (!den.empty())
            os << " / (" << den << ")";
        return os.str();
    }

    local::StarValue star() const {
        if (!factor)
            throw std::logic_error("formal gamma factor has no value");
        return factor->star_zero();
    }
};

namespace detail {

inline Assembled finish(std::vector<Term> terms, const BlockTable& t) {
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
        return a.key != b.key ? a.key < b.key : a.shift < b.shift;
    });
    Assembled r;
    for (auto& tm : terms) {
        tm.shift.canonicalize();
        if (!r.terms.empty() && r.terms.back().key == tm.key && r.terms.back().shift == tm.shift)
            r.terms.back().exp += tm.exp;
        else
            r.terms.push_back(tm);
        if (r.terms.back().exp == 0)
            r.terms.pop_back();
    }
    std::vector<std::string> missing;
    std::optional<GammaFactor> g;
    bool concrete = !t.formal();
    int order = 0;
    for (const auto& tm : r.terms) {
        if (tm.shift == 0)
            order += tm.exp * t.formal_order(tm.key);
        if (!concrete)
            continue;
        auto h = t.handle(tm.key);
        if (!h) {
            missing.push_back(tm.key.to_string());
            continue;
        }
        const GammaFactor f = h->shifted(0, tm.shift).pow(tm.exp);
        g = g ? *g * f : f;
    }
    if (!missing.empty()) {
        std::string m;
        for (const auto& k : missing)
            m += (m.empty() ? "" : "; ") + k;
        throw std::invalid_argument("missing gamma handles: " + m);
    }
    if (concrete) {
        r.factor = g ? *g : GammaFactor::one(t.field());
        r.order = r.factor->order_at_zero();
    } else {
        r.order = order;
    }
    return r;
}

inline mpq_class exact(double x) {
    mpq_class q(x);
    q.canonicalize();
    return q;
}

} // namespace detail

/// prod_i gamma(s, tau_i, Ad) * prod_{i != j} gamma(s + i(x_i - x_j), tau_i x tau_j^v).
inline Assembled adjoint_gamma(const TemperedParamGL& p, const BlockTable& t) {
    p.validate(t);
    std::vector<Term> terms;
    const auto& e = p.entries;
    for (std::size_t i = 0; i < e.size(); ++i) {
        terms.push_back({HandleKey::ad(e[i].block), 0, 1});
        for (std::size_t j = 0; j < e.size(); ++j)
            if (i != j)
                terms.push_back({HandleKey::cross_dual(e[i].block, e[j].block),
                                 detail::exact(e[i].twist) - detail::exact(e[j].twist), 1});
    }
    return detail::finish(std::move(terms), t);
}

/// prod_i gamma(s + 2 i x_i, tau_i, As) * prod_{i < j} gamma(s + i(x_i + x_j), tau_i x tau_j^c).
inline Assembled asai_gamma(const TemperedParamGL& p, const BlockTable& t) {
    p.validate(t);
    std::vector<Term> terms;
    const auto& e = p.entries;
    for (std::size_t i = 0; i < e.size(); ++i) {
        terms.push_back({HandleKey::as(e[i].block), 2 * detail::exact(e[i].twist), 1});
        for (std::size_t j = i + 1; j < e.size(); ++j)
            terms.push_back({HandleKey::cross_conj(e[i].block, e[j].block),
                             detail::exact(e[i].twist) + detail::exact(e[j].twist), 1});
    }
    return detail::finish(std::move(terms), t);
}

/// gamma(s, sigma, Ad) = gamma(s, BC_n(sigma), Ad) / gamma(s, BC_n(sigma), As).
inline Assembled adjoint_gamma_U(const TemperedParamU& s, const BlockTable& t) {
    const TemperedParamGL p = bc(s, s.rank(t), t);
    const Assembled ad = adjoint_gamma(p, t), as = asai_gamma(p, t);
    std::vector<Term> terms = ad.terms;
    for (auto tm : as.terms) {
        tm.exp = -tm.exp;
        terms.push_back(tm);
    }
    Assembled r = detail::finish(std::move(terms), t);
    if (r.order < 0)
        throw std::invalid_argument("adjoint gamma of " + s.label() + " has a pole at 0 (order " +
                                    std::to_string(r.order) + "): inconsistent gamma table");
    return r;
}

namespace detail {

inline CharData twisted(const BlockTable& t, const Entry& e) {
    const DiscreteBlock& b = t.block(e.block);
    if (!b.character)
        throw std::invalid_argument("brute-force product needs characters; block " + e.block + " has none");
    CharData c = *b.character;
    c.u_im += exact(e.twist);
    return c;
}

} // namespace detail

/// Ad of chi_1 + ... + chi_k is the sum over ordered pairs of Ind(chi_i chi_j^{-1}).
inline GammaFactor brute_force_adjoint(const TemperedParamGL& p, const BlockTable& t) {
    p.validate(t);
    GammaFactor g = GammaFactor::one(t.field());
    for (const auto& a : p.entries)
        for (const auto& b : p.entries)
            g *= local::induced_gamma(detail::twisted(t, a) * detail::twisted(t, b).inverse(), t.field());
    return g;
}

/// As of chi_1 + ... + chi_k is the sum of the restrictions chi_i|F and of Ind(chi_i chi_j^c), i < j.
inline GammaFactor brute_force_asai(const TemperedParamGL& p, const BlockTable& t) {
    p.validate(t);
    GammaFactor g = GammaFactor::one(t.field());
    const auto& e = p.entries;
    for (std::size_t i = 0; i < e.size(); ++i) {
        const CharData ci = detail::twisted(t, e[i]);
        g *= local::tate_gamma(ci.restricted_to_F(t.field()), t.field());
        for (std::size_t j = i + 1; j < e.size(); ++j)
            g *= local::induced_gamma(ci * detail::twisted(t, e[j]).conj(), t.field());
    }
    return g;
}

/// Central character of a character parameter restricted to F^x, trivial iff pi lives on the
/// central quotient.
inline bool trivial_on_center(const TemperedParamGL& p, const BlockTable& t) {
    CharData c = CharData::on_E();
    for (const auto& e : p.entries)
        c = c * detail::twisted(t, e);
    const CharData r = c.restricted_to_F(t.field());
    return r.u_re == 0 && r.u_im == 0 && !r.eta && r.sign == 0 && mpq_class(r.turn).get_den() == 1;
}

struct Density {
    std::optional<cplx> value;
    std::string formula;
    std::uint64_t s_order = 0;
    int ad_order = 0;
};

/// lambda^{-n^2} gamma*(0, pi, Ad-bar) / |S_pi|, with gamma(s, Ad) = gamma(s, 1_F) gamma(s, Ad-bar).
inline Density plancherel_density(const TemperedParamGL& p, const BlockTable& t) {
    const Assembled ad = adjoint_gamma(p, t);
    Density d;
    d.s_order = s_group_order(p, t);
    d.ad_order = ad.order;
    const unsigned n = p.size(t);
    d.formula = "lambda^-" + std::to_string(n * n) + " * gamma*(0, " + p.label() + ", Ad-bar) / " +
                std::to_string(d.s_order) + ";  gamma(s, Ad) = " + ad.formula();
    if (!ad.factor)
        return d;
    bool characters = true;
    for (const auto& e : p.entries)
        characters = characters && t.block(e.block).character.has_value();
    if (characters && !trivial_on_center(p, t))
        throw std::invalid_argument("plancherel_density: " + p.label() + " is not trivial on Z(F)");
    const cplx lam = local::lambda_factor(t.field()).value;
    const cplx one_star = local::tate_gamma(CharData::trivial(), t.field()).star_zero().value;
    const cplx bar = ad.star().value / one_star;
    d.value = std::pow(lam, -int(n * n)) * bar / double(d.s_order);
    return d;
}

struct FormalDegree {
    std::optional<double> value;
    std::string formula;
    std::uint64_t s_order = 0;
};

/// d(sigma) = |gamma(0, sigma, Ad)| / |S_sigma| for a discrete sigma.
inline FormalDegree formal_degree(const TemperedParamU& s, const BlockTable& t) {
    if (!s.discrete())
        throw std::invalid_argument("formal degree needs a discrete parameter (empty GL part)");
    const Assembled ad = adjoint_gamma_U(s, t);
    if (ad.order != 0)
        throw std::invalid_argument("formal degree: gamma(s, sigma, Ad) vanishes to order " +
                                    std::to_string(ad.order) + " at 0");
    FormalDegree f;
    f.s_order = s_group_order(s, t);
    f.formula = "|gamma(0, " + s.label() + ", Ad)| / 2^" + std::to_string(s.anchor.size());
    if (ad.factor) {
        const double v = std::abs((*ad.factor)(0.0)) / double(f.s_order);
        if (!(std::isfinite(v) && v > 0))
            throw std::domain_error("formal degree is not finite and positive");
        f.value = v;
    }
    return f;
}

/// eta'((-1)^{n+1} tau) and |tau|_E for the trace-zero element tau determining psi.
struct TauChoice {
    cplx eta_prime = 1.0;
    double abs_tau_E = 1.0;
};

/// tau = i t on C/R with eta'(z) = z/|z| (the weight-1 unitary extension of sign).
inline TauChoice tau_archimedean(unsigned n, double t) {
    if (t == 0)
        throw std::invalid_argument("tau must be nonzero");
    const double s = (n % 2 ? 1.0 : -1.0) * (t > 0 ? 1.0 : -1.0);
    return {cplx(0, s), t * t};
}

/// Unramified E, tau of valuation v, eta'(z) = (-1)^{v(z)} (unramified extension of eta).
inline TauChoice tau_padic_unramified(unsigned q, long v) {
    return {v % 2 ? -1.0 : 1.0, std::pow(double(q), -2.0 * double(v))};
}

struct Kappa {
    cplx value;
    cplx phase;
    unsigned phase_order = 0; // smallest k <= 8 with phase^k = 1, 0 if none
};

/// kappa_V = (eta'((-1)^{n+1} tau) lambda)^{n(n+1)/2} |tau|_E^{n(n-1)/4} eta(disc V)^n.
inline Kappa kappa_V(unsigned n, int disc_sign, const FieldData& f, const TauChoice& tau) {
    if (n < 1)
        throw std::invalid_argument("kappa_V needs n >= 1");
    if (disc_sign != 1 && disc_sign != -1)
        throw std::invalid_argument("disc sign must be +1 or -1");
    const cplx lam = local::lambda_factor(f).value;
    Kappa k;
    k.phase = std::pow(tau.eta_prime * lam, int(n * (n + 1) / 2)) * (n % 2 && disc_sign < 0 ? -1.0 : 1.0);
    k.value = k.phase * std::pow(tau.abs_tau_E, double(n * (n - 1)) / 4.0);
    for (unsigned j = 1; j <= 8; ++j)
        if (std::abs(std::pow(k.phase, int(j)) - 1.0) < 1e-12) {
            k.phase_order = j;
            break;
        }
    if (k.phase_order == 0)
        throw std::domain_error("kappa_V phase is not a root of unity");
    return k;
}

struct CPhase {
    cplx gamma_star;
    cplx c;       // conj(phase(gamma*(0, sigma, Ad)))
    cplx c1;      // solved from c = lambda^{-n(n+1)/2} c1 omega(-1)^{1-n} eta(-1)^{n(n-1)^2/2}
    bool c1_is_sign = false;
};

/// The phase making c(sigma) gamma*(0, sigma, Ad) = |gamma*(0, sigma, Ad)|; c_1 is solved
/// for, given omega_sigma(-1). eta(-1) = lambda^2.
inline CPhase c_sigma_phase(const TemperedParamU& s, const BlockTable& t, int omega_minus_one) {
    if (omega_minus_one != 1 && omega_minus_one != -1)
        throw std::invalid_argument("omega_sigma(-1) must be +1 or -1");
    const Assembled ad = adjoint_gamma_U(s, t);
    CPhase r;
    r.gamma_star = ad.star().value;
    if (std::abs(r.gamma_star) < 1e-300)
        throw std::domain_error("gamma*(0, sigma, Ad) = 0: phase undefined");
    r.c = std::conj(r.gamma_star / std::abs(r.gamma_star));
    const long n = s.rank(t);
    const cplx lam = local::lambda_factor(t.field()).value;
    const cplx eta_m1 = lam * lam;
    const long e = n * (n - 1) * (n - 1) / 2;
    r.c1 = r.c * std::pow(lam, int(n * (n + 1) / 2)) * (n % 2 ? 1.0 : double(omega_minus_one)) *
           std::pow(eta_m1, -int(e % 4));
    r.c1_is_sign = std::abs(r.c1 - 1.0) < 1e-9 || std::abs(r.c1 + 1.0) < 1e-9;
    return r;
}

} // namespace plancherel::tempered
