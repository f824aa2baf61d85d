#pragma once

#include <gmpxx.h>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_gamma.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "plancherel/error.hpp"

namespace plancherel::local {

using cplx = std::complex<double>;

enum class FieldKind { archimedean, padic };
enum class Extension { unramified, ramified };

/// e^{2 pi i turn} * q^{re + i im} with rational turn, re, im. Exact in all operations
/// used by the p-adic factors; q is supplied at evaluation.
struct Root {
    mpq_class turn = 0; // kept in [0, 1)
    mpq_class re = 0;
    mpq_class im = 0;

    static Root one() { return {}; }
    static Root minus_one() { return Root{mpq_class(1, 2), 0, 0}; }
    static Root unit(const mpq_class& t) { return Root{t, 0, 0}.normalized(); }
    static Root q_power(const mpq_class& re, const mpq_class& im = 0) { return Root{0, re, im}.normalized(); }

    Root normalized() const {
        Root r = *this;
        r.turn.canonicalize();
        r.re.canonicalize();
        r.im.canonicalize();
        mpz_class f;
        mpz_fdiv_q(f.get_mpz_t(), r.turn.get_num_mpz_t(), r.turn.get_den_mpz_t());
        r.turn -= f;
        return r;
    }
    Root operator*(const Root& o) const { return Root{turn + o.turn, re + o.re, im + o.im}.normalized(); }
    Root inverse() const { return Root{-turn, -re, -im}.normalized(); }
    Root pow(long k) const { return Root{turn * k, re * k, im * k}.normalized(); }
    /// One of the two square roots; the other is this times -1.
    Root sqrt() const { return Root{turn / 2, re / 2, im / 2}.normalized(); }
    bool operator==(const Root& o) const { return turn == o.turn && re == o.re && im == o.im; }
    bool is_one() const { return turn == 0 && re == 0 && im == 0; }
    bool is_rational() const { return (turn == 0 || turn == mpq_class(1, 2)) && im == 0 && re.get_den() == 1; }
    /// A fourth root of unity.
    bool is_quartic_unit() const { return re == 0 && im == 0 && mpq_class(turn * 4).get_den() == 1; }

    std::optional<mpq_class> exact(unsigned q) const {
        if (!is_rational())
            return std::nullopt;
        mpz_class p;
        const long e = re.get_num().get_si();
        mpz_ui_pow_ui(p.get_mpz_t(), q, static_cast<unsigned long>(std::labs(e)));
        mpq_class v = e >= 0 ? mpq_class(p) : mpq_class(1) / mpq_class(p);
        return turn == 0 ? v : mpq_class(-v);
    }

    cplx value(double q) const {
        const double lq = std::log(q);
        return std::exp(cplx(re.get_d() * lq, im.get_d() * lq + 2 * std::numbers::pi * turn.get_d()));
    }

    friend bool operator<(const Root& a, const Root& b) {
        if (a.turn != b.turn)
            return a.turn < b.turn;
        if (a.re != b.re)
            return a.re < b.re;
        return a.im < b.im;
    }

    std::string to_string(unsigned q) const {
        if (auto e = exact(q))
            return e->get_str();
        std::ostringstream os;
        bool first = true;
        if (turn != 0) {
            if (turn == mpq_class(1, 2))
                os << "-1";
            else if (turn == mpq_class(1, 4))
                os << "i";
            else if (turn == mpq_class(3, 4))
                os << "-i";
            else
                os << "exp(2pi i*" << turn.get_str() << ")";
            first = false;
        }
        if (re != 0 || im != 0) {
            if (!first)
                os << "*";
            os << q << "^(" << re.get_str();
            if (im != 0)
                os << (im > 0 ? "+" : "-") << mpq_class(abs(im)).get_str() << "i";
            os << ")";
            first = false;
        }
        if (first)
            os << "1";
        return os.str();
    }
};

/// epsilon(s) = c q^{n (s - 1/2)}
struct EpsilonMonomial {
    Root c;
    int n = 0;
};

/// Local field data. Archimedean means F = R, E = C; q_F = q_E = e^{1/2} by convention.
/// psi_sign picks psi'(x) = exp(2 pi i psi_sign x) on R. The default -1 gives
/// epsilon(s, sign) = -i and lambda_{C/R} = -i.
/// p-adic: q is q_F; psi' has conductor exponent `conductor` (trivial on p^conductor,
/// not on p^(conductor-1)). For a ramified E the epsilon factor of eta must be supplied,
/// and `different` is the exponent of the different of E/F (1 when p is odd).
struct FieldData {
    FieldKind kind = FieldKind::archimedean;
    unsigned q = 0;
    Extension ext = Extension::unramified;
    int conductor = 0;
    int different = 1;
    int psi_sign = -1;
    std::optional<EpsilonMonomial> eta_epsilon;

    static FieldData real(int psi_sign = -1) {
        FieldData f;
        f.psi_sign = psi_sign;
        return f;
    }
    static FieldData padic(unsigned q, Extension ext = Extension::unramified, int conductor = 0) {
        FieldData f;
        f.kind = FieldKind::padic;
        f.q = q;
        f.ext = ext;
        f.conductor = conductor;
        f.validate();
        return f;
    }

    void validate() const {
        if (kind == FieldKind::archimedean) {
            if (psi_sign != 1 && psi_sign != -1)
                throw std::invalid_argument("psi_sign must be +1 or -1");
            return;
        }
        if (q < 2)
            throw std::invalid_argument("p-adic residue field size must be >= 2");
        unsigned p = 2;
        while (q % p)
            ++p;
        unsigned r = q;
        while (r % p == 0)
            r /= p;
        if (r != 1)
            throw std::invalid_argument("q = " + std::to_string(q) + " is not a prime power");
        if (different < 1)
            throw std::invalid_argument("different exponent must be >= 1");
        if (eta_epsilon && !eta_epsilon->c.is_quartic_unit())
            throw std::invalid_argument("epsilon(1/2, eta) must be a fourth root of unity");
    }

    bool is_padic() const { return kind == FieldKind::padic; }
    double log_q() const { return is_padic() ? std::log(double(q)) : 0.5; }
    std::string label() const {
        if (!is_padic())
            return "C/R";
        return "p-adic q=" + std::to_string(q) + (ext == Extension::unramified ? " unramified" : " ramified");
    }
};

/// A character of F^x or E^x from the supported catalogue:
///   p-adic: unramified, chi(uniformizer) = exp(2 pi i turn) * q^{-u}, optionally times eta (on F);
///   R: |x|^u sign(x)^delta;  C: |z|_C^u (z/|z|)^weight.
/// u is stored exactly (doubles convert exactly to rationals).
struct CharData {
    enum class Base { F, E };
    Base base = Base::F;
    mpq_class u_re = 0, u_im = 0;
    mpq_class turn = 0;
    bool eta = false;
    int sign = 0;
    long weight = 0;

    static CharData trivial() { return {}; }
    static CharData eta_char() {
        CharData c;
        c.eta = true;
        return c;
    }
    static CharData on_F(double u_re = 0, double u_im = 0) {
        CharData c;
        c.u_re = u_re;
        c.u_im = u_im;
        return c;
    }
    static CharData real_char(int delta, double u_re = 0, double u_im = 0) {
        CharData c = on_F(u_re, u_im);
        c.sign = delta;
        return c;
    }
    static CharData on_E(long weight = 0, double u_re = 0, double u_im = 0) {
        CharData c = on_F(u_re, u_im);
        c.base = Base::E;
        c.weight = weight;
        return c;
    }

    void validate(const FieldData& f) const {
        if (eta && base != Base::F)
            throw std::invalid_argument("eta tag only valid on F");
        if (weight != 0 && (base != Base::E || f.is_padic()))
            throw std::invalid_argument("weight only valid on C");
        if (sign != 0 && (base != Base::F || f.is_padic()))
            throw std::invalid_argument("sign exponent only valid on R");
        if (sign != 0 && sign != 1)
            throw std::invalid_argument("sign exponent must be 0 or 1");
        if (turn != 0 && !f.is_padic())
            throw std::invalid_argument("finite unramified part only valid p-adically");
    }

    cplx u() const { return {u_re.get_d(), u_im.get_d()}; }

    CharData inverse() const {
        CharData c = *this;
        c.u_re = -u_re;
        c.u_im = -u_im;
        c.turn = -turn;
        c.weight = -weight;
        return c;
    }

    /// chi(z) -> chi(conj z). Unramified p-adic characters are fixed.
    CharData conj() const {
        CharData c = *this;
        c.weight = -weight;
        return c;
    }

    friend CharData operator*(const CharData& a, const CharData& b) {
        if (a.base != b.base)
            throw std::invalid_argument("characters live on different fields");
        CharData c = a;
        c.u_re = a.u_re + b.u_re;
        c.u_im = a.u_im + b.u_im;
        c.turn = a.turn + b.turn;
        c.eta = a.eta != b.eta;
        c.sign = (a.sign + b.sign) % 2;
        c.weight = a.weight + b.weight;
        return c;
    }

    /// Restriction of a character of E^x to F^x.
    CharData restricted_to_F(const FieldData& f) const {
        if (base != Base::E)
            throw std::invalid_argument("restriction needs a character of E");
        CharData c;
        c.u_re = 2 * u_re; // |x|_E = |x|_F^2 on F
        c.u_im = 2 * u_im;
        if (!f.is_padic()) {
            c.sign = static_cast<int>(((weight % 2) + 2) % 2);
        } else if (f.ext == Extension::unramified) {
            c.turn = turn; // the uniformizer of F stays one in E
        } else {
            c.turn = 2 * turn; // it is a square of one in E, up to a unit
        }
        return c;
    }

    bool is_unitary() const { return u_re == 0; }

    std::string label() const {
        std::ostringstream os;
        os << (base == Base::F ? "F:" : "E:");
        if (eta)
            os << "eta";
        if (sign)
            os << "sign";
        if (weight)
            os << "w" << weight;
        if (turn != 0)
            os << "t" << turn.get_str();
        if (u_re != 0 || u_im != 0)
            os << "|.|^(" << u_re.get_d() << (u_im >= 0 ? "+" : "") << u_im.get_d() << "i)";
        if (!eta && !sign && !weight && turn == 0 && u_re == 0 && u_im == 0)
            os << "1";
        return os.str();
    }
};

struct StarValue {
    int order = 0;
    cplx value;
    std::optional<mpq_class> exact; // p-adic with rational data
};

/// gamma(s) = eps(s) L(1-s, dual)/L(s), kept symbolically.
///   p-adic: K * T^m * prod (1 - rho T)^e with T = q^{-s};
///   archimedean: c * exp(logQ (s - 1/2)) * prod Gamma_R(sigma s + a)^e,
///   Gamma_R(z) = pi^{-z/2} Gamma(z/2).
class GammaFactor {
  public:
    struct Linear {
        Root rho;
        int exp;
    };
    struct Atom {
        int sigma;
        cplx a;
        int exp;
    };

    static GammaFactor padic_one(unsigned q) {
        GammaFactor g;
        g.kind_ = FieldKind::padic;
        g.q_ = q;
        return g;
    }
    static GammaFactor padic_monomial(unsigned q, const Root& K, int m) {
        GammaFactor g = padic_one(q);
        g.K_ = K;
        g.m_ = m;
        return g;
    }
    static GammaFactor padic_linear(unsigned q, const Root& rho, int exp) {
        GammaFactor g = padic_one(q);
        g.lin_.push_back({rho, exp});
        g.canonicalize();
        return g;
    }
    static GammaFactor arch_one() { return GammaFactor(); }
    static GammaFactor arch_constant(cplx c, double logQ = 0) {
        GammaFactor g;
        g.c_ = c;
        g.logQ_ = logQ;
        return g;
    }
    static GammaFactor arch_atom(int sigma, cplx a, int exp) {
        GammaFactor g;
        g.atoms_.push_back({sigma, a, exp});
        g.canonicalize();
        return g;
    }
    static GammaFactor one(const FieldData& f) { return f.is_padic() ? padic_one(f.q) : arch_one(); }

    FieldKind kind() const { return kind_; }
    unsigned q() const { return q_; }
    const Root& constant() const { return K_; }
    int t_power() const { return m_; }
    const std::vector<Linear>& linear_factors() const { return lin_; }
    const std::vector<Atom>& atoms() const { return atoms_; }
    cplx arch_constant_value() const { return c_; }

    friend GammaFactor operator*(const GammaFactor& a, const GammaFactor& b) {
        check_same(a, b);
        GammaFactor g = a;
        g.K_ = a.K_ * b.K_;
        g.m_ = a.m_ + b.m_;
        g.c_ = a.c_ * b.c_;
        g.logQ_ = a.logQ_ + b.logQ_;
        g.lin_.insert(g.lin_.end(), b.lin_.begin(), b.lin_.end());
        g.atoms_.insert(g.atoms_.end(), b.atoms_.begin(), b.atoms_.end());
        g.canonicalize();
        return g;
    }
    GammaFactor& operator*=(const GammaFactor& b) { return *this = *this * b; }

    GammaFactor inverse() const {
        GammaFactor g = *this;
        g.K_ = K_.inverse();
        g.m_ = -m_;
        g.c_ = 1.0 / c_;
        g.logQ_ = -logQ_;
        for (auto& l : g.lin_)
            l.exp = -l.exp;
        for (auto& a : g.atoms_)
            a.exp = -a.exp;
        return g;
    }
    friend GammaFactor operator/(const GammaFactor& a, const GammaFactor& b) { return a * b.inverse(); }

    GammaFactor pow(int k) const {
        GammaFactor g = one_like();
        const GammaFactor base = k >= 0 ? *this : inverse();
        for (int i = 0; i < std::abs(k); ++i)
            g *= base;
        return g;
    }

    /// s -> 1 - s.
    GammaFactor reflected() const {
        GammaFactor g = one_like();
        if (kind_ == FieldKind::padic) {
            // T -> q^{-1}/T; (1 - rho q^{-1}/T) = (-rho q^{-1} / T)(1 - rho^{-1} q T)
            g.K_ = K_ * Root::q_power(-m_);
            g.m_ = -m_;
            const Root qinv = Root::q_power(-1);
            for (const auto& l : lin_) {
                g.K_ = g.K_ * (Root::minus_one() * l.rho * qinv).pow(l.exp);
                g.m_ -= l.exp;
                g.lin_.push_back({l.rho.inverse() * Root::q_power(1), l.exp});
            }
        } else {
            g.c_ = c_;
            g.logQ_ = -logQ_;
            for (const auto& a : atoms_)
                g.atoms_.push_back({-a.sigma, a.a + double(a.sigma), a.exp});
        }
        g.canonicalize();
        return g;
    }

    /// s -> s + c with c = re + i im.
    GammaFactor shifted(const mpq_class& re, const mpq_class& im = 0) const {
        GammaFactor g = *this;
        if (kind_ == FieldKind::padic) {
            // T -> q^{-c} T
            const Root qc = Root::q_power(-re, -im);
            g.K_ = K_ * qc.pow(m_);
            for (auto& l : g.lin_)
                l.rho = l.rho * qc;
        } else {
            const cplx c(re.get_d(), im.get_d());
            g.c_ = c_ * std::exp(logQ_ * c);
            for (auto& a : g.atoms_)
                a.a += double(a.sigma) * c;
        }
        g.canonicalize();
        return g;
    }

    /// Exact structural equality (p-adic); the archimedean comparison uses a tolerance.
    bool equals(const GammaFactor& o, double tol = 1e-12) const {
        if (kind_ != o.kind_ || q_ != o.q_)
            return false;
        if (kind_ == FieldKind::padic) {
            if (!(K_ == o.K_) || m_ != o.m_ || lin_.size() != o.lin_.size())
                return false;
            for (std::size_t i = 0; i < lin_.size(); ++i)
                if (!(lin_[i].rho == o.lin_[i].rho) || lin_[i].exp != o.lin_[i].exp)
                    return false;
            return true;
        }
        const GammaFactor d = *this / o;
        if (!d.atoms_.empty())
            return false;
        return std::abs(d.c_ - 1.0) < tol && std::abs(d.logQ_) < tol;
    }

    bool is_identity() const { return equals(one_like()); }

    cplx operator()(cplx s) const {
        if (kind_ == FieldKind::padic) {
            const double lq = std::log(double(q_));
            const cplx T = std::exp(-s * lq);
            cplx v = K_.value(q_) * std::pow(T, m_);
            for (const auto& l : lin_) {
                const cplx f = 1.0 - l.rho.value(q_) * T;
                if (l.exp < 0 && f == 0.0)
                    throw pole_error("gamma factor evaluated at a pole");
                v *= std::pow(f, l.exp);
            }
            return v;
        }
        cplx logv = std::log(c_) + logQ_ * (s - 0.5);
        for (const auto& a : atoms_)
            logv += double(a.exp) * log_gamma_r(double(a.sigma) * s + a.a);
        return std::exp(logv);
    }

    /// Exact value at a rational T = q^{-s}, when every root is rational.
    std::optional<mpq_class> exact_at_T(mpq_class T) const {
        if (kind_ != FieldKind::padic)
            return std::nullopt;
        T.canonicalize();
        auto K = K_.exact(q_);
        if (!K)
            return std::nullopt;
        mpq_class v = *K;
        for (int i = 0; i < std::abs(m_); ++i)
            v = m_ > 0 ? mpq_class(v * T) : mpq_class(v / T);
        for (const auto& l : lin_) {
            auto r = l.rho.exact(q_);
            if (!r)
                return std::nullopt;
            const mpq_class f = 1 - *r * T;
            if (f == 0) {
                if (l.exp < 0)
                    throw pole_error("gamma factor evaluated at a pole");
                return mpq_class(0);
            }
            for (int i = 0; i < std::abs(l.exp); ++i)
                v = l.exp > 0 ? mpq_class(v * f) : mpq_class(v / f);
        }
        return v;
    }

    /// Exact value at an integer s (T = q^{-s}).
    std::optional<mpq_class> exact_at_integer(long s) const {
        mpz_class p;
        mpz_ui_pow_ui(p.get_mpz_t(), q_, static_cast<unsigned long>(std::labs(s)));
        return exact_at_T(s >= 0 ? mpq_class(1) / mpq_class(p) : mpq_class(p));
    }

    /// Order of the zero at s = 0 (negative for a pole), from the symbolic data.
    int order_at_zero() const {
        int n = 0;
        if (kind_ == FieldKind::padic) {
            for (const auto& l : lin_)
                if (l.rho.is_one())
                    n += l.exp;
            return n;
        }
        for (const auto& a : atoms_)
            if (pole_index(a.a) >= 0)
                n -= a.exp;
        return n;
    }

    /// (order n, lim zeta_F(s)^n gamma(s)). Throws pole_error for a pole at 0.
    StarValue star_zero() const {
        StarValue r;
        r.order = order_at_zero();
        if (r.order < 0)
            throw pole_error("gamma factor has a pole at s=0 (non-tempered input)");
        if (kind_ == FieldKind::padic) {
            // zeta = (1 - T)^{-1} cancels the (1 - T) factors; evaluate the rest at T = 1
            GammaFactor rest = *this;
            rest.lin_.erase(std::remove_if(rest.lin_.begin(), rest.lin_.end(),
                                           [](const Linear& l) { return l.rho.is_one(); }),
                            rest.lin_.end());
            r.value = rest(0.0);
            r.exact = rest.exact_at_T(1);
            return r;
        }
        // Gamma_R(sigma s - 2k) ~ (-1)^k pi^k 2 / (k! sigma s); zeta_R(s) ~ 2/s
        cplx logv = std::log(c_) - 0.5 * logQ_;
        cplx sign = 1.0;
        for (const auto& a : atoms_) {
            const long k = pole_index(a.a);
            if (k < 0) {
                logv += double(a.exp) * log_gamma_r(a.a);
                continue;
            }
            const double lead = double(k) * std::log(std::numbers::pi) + std::log(2.0) - std::lgamma(double(k) + 1);
            logv += double(a.exp) * lead;
            if ((k % 2 == 1) != (a.sigma < 0) && (a.exp % 2 != 0))
                sign = -sign;
        }
        r.value = sign * std::exp(logv) * std::pow(2.0, r.order);
        return r;
    }

    std::string to_string() const {
        std::ostringstream os;
        if (kind_ == FieldKind::padic) {
            os << K_.to_string(q_);
            if (m_ != 0)
                os << "*T^" << m_;
            std::string num, den;
            for (const auto& l : lin_) {
                const std::string r = l.rho.to_string(q_);
                std::string f = r.front() == '-' ? "(1 + " + r.substr(1) + "*T)" : "(1 - " + r + "*T)";
                if (std::abs(l.exp) != 1)
                    f += "^" + std::to_string(std::abs(l.exp));
                (l.exp > 0 ? num : den) += f;
            }
            if (!num.empty())
                os << "*" << num;
            if (!den.empty())
                os << "/(" << den << ")";
            os << "  [T = " << q_ << "^-s]";
            return os.str();
        }
        os << "(" << c_.real() << (c_.imag() >= 0 ? "+" : "") << c_.imag() << "i)";
        if (logQ_ != 0)
            os << "*exp(" << logQ_ << "*(s-1/2))";
        for (const auto& a : atoms_) {
            os << "*Gamma_R(" << (a.sigma > 0 ? "s" : "-s") << "+(" << a.a.real() << (a.a.imag() >= 0 ? "+" : "")
               << a.a.imag() << "i))";
            if (a.exp != 1)
                os << "^" << a.exp;
        }
        return os.str();
    }

  private:
    FieldKind kind_ = FieldKind::archimedean;
    unsigned q_ = 0;
    Root K_;
    int m_ = 0;
    std::vector<Linear> lin_;
    cplx c_ = 1.0;
    double logQ_ = 0;
    std::vector<Atom> atoms_;

    GammaFactor one_like() const { return kind_ == FieldKind::padic ? padic_one(q_) : arch_one(); }

    static void check_same(const GammaFactor& a, const GammaFactor& b) {
        if (a.kind_ != b.kind_ || a.q_ != b.q_)
            throw std::invalid_argument("gamma factors over different fields");
    }

    /// k >= 0 when a == -2k exactly, i.e. Gamma_R(+-s + a) has a pole at s = 0.
    static long pole_index(cplx a) {
        if (a.imag() != 0 || a.real() > 0 || a.real() != std::round(a.real()))
            return -1;
        const long v = std::lround(-a.real());
        return v % 2 == 0 ? v / 2 : -1;
    }

    static cplx log_gamma_r(cplx z) {
        const cplx h = 0.5 * z;
        if (h.imag() == 0 && h.real() <= 0 && h.real() == std::round(h.real()))
            throw pole_error("Gamma_R evaluated at a pole");
        gsl_sf_result lnr, arg;
        gsl_error_handler_t* old = gsl_set_error_handler_off();
        const int status = gsl_sf_lngamma_complex_e(h.real(), h.imag(), &lnr, &arg);
        gsl_set_error_handler(old);
        if (status != GSL_SUCCESS)
            throw pole_error("complex log-Gamma failed at z/2 = (" + std::to_string(h.real()) + ", " +
                             std::to_string(h.imag()) + ")");
        return cplx(lnr.val, arg.val) - h * std::log(std::numbers::pi);
    }

    void canonicalize() {
        if (kind_ == FieldKind::padic) {
            std::sort(lin_.begin(), lin_.end(), [](const Linear& a, const Linear& b) { return a.rho < b.rho; });
            std::vector<Linear> out;
            for (const auto& l : lin_) {
                if (!out.empty() && out.back().rho == l.rho)
                    out.back().exp += l.exp;
                else
                    out.push_back(l);
                if (out.back().exp == 0)
                    out.pop_back();
            }
            lin_ = std::move(out);
            return;
        }
        std::vector<Atom> out;
        for (const auto& a : atoms_) {
            auto it = std::find_if(out.begin(), out.end(), [&](const Atom& b) {
                return b.sigma == a.sigma && std::abs(b.a - a.a) <= 1e-13 * (1 + std::abs(a.a));
            });
            if (it == out.end())
                out.push_back(a);
            else
                it->exp += a.exp;
        }
        out.erase(std::remove_if(out.begin(), out.end(), [](const Atom& a) { return a.exp == 0; }), out.end());
        atoms_ = std::move(out);
    }
};

namespace detail {

/// L(s) of an unramified p-adic character with chi(uniformizer of the base) = rho.
inline GammaFactor padic_L(const FieldData& f, const CharData& chi) {
    const bool onE = chi.base == CharData::Base::E;
    Root rho = Root::unit(chi.turn) * Root::q_power(-chi.u_re, -chi.u_im);
    if (onE && f.ext == Extension::unramified) {
        // q_E = q^2 and L_E = (1 - chi(w) q^{-2u} T^2)^{-1} = ((1 - b T)(1 + b T))^{-1}
        const Root b = (Root::unit(chi.turn) * Root::q_power(-2 * chi.u_re, -2 * chi.u_im)).sqrt();
        return GammaFactor::padic_linear(f.q, b, -1) * GammaFactor::padic_linear(f.q, b * Root::minus_one(), -1);
    }
    if (chi.eta) {
        if (f.ext == Extension::ramified)
            return GammaFactor::padic_one(f.q); // ramified: L = 1
        rho = rho * Root::minus_one();
    }
    return GammaFactor::padic_linear(f.q, rho, -1);
}

/// chi(-1) as a root, for the change psi' -> psi'^{-1}.
inline Root padic_sign(const FieldData& f, const CharData& chi) {
    if (chi.eta && f.ext == Extension::ramified)
        return f.eta_epsilon->c.pow(2); // lambda^2 = eta(-1)
    return Root::one();
}

inline GammaFactor padic_epsilon(const FieldData& f, const CharData& chi) {
    const bool onE = chi.base == CharData::Base::E;
    if (chi.eta && f.ext == Extension::ramified) {
        if (!f.eta_epsilon)
            throw std::invalid_argument("ramified character requires user-supplied epsilon");
        // eps(s, eta |.|^u) = eps(s + u, eta) = c q^{n u} q^{n (s - 1/2)}
        const auto& e = *f.eta_epsilon;
        const Root K = e.c * Root::q_power(mpq_class(e.n) * chi.u_re, mpq_class(e.n) * chi.u_im) *
                       Root::q_power(mpq_class(-e.n, 2));
        return GammaFactor::padic_monomial(f.q, K, -e.n);
    }
    // psi_a(x) = psi(a x): eps(s, chi, psi_a) = chi(a)|a|^{s-1/2} eps(s, chi, psi); the base
    // character has conductor 0 and a = uniformizer^{-d}
    int d = f.conductor;
    Root rho = Root::unit(chi.turn) * Root::q_power(-chi.u_re, -chi.u_im);
    if (chi.eta)
        rho = rho * Root::minus_one();
    if (!onE)
        return GammaFactor::padic_monomial(f.q, rho.pow(-d) * Root::q_power(mpq_class(-d, 2)), -d);
    if (f.ext == Extension::unramified) {
        // psi'_E has conductor d over E; q_E = q^2, T_E = T^2
        const Root rE = Root::unit(chi.turn) * Root::q_power(-2 * chi.u_re, -2 * chi.u_im);
        return GammaFactor::padic_monomial(f.q, rE.pow(-d) * Root::q_power(-d), -2 * d);
    }
    // ramified: Tr(p_E^k) = p_F^{floor((k + different)/2)}, so psi'_E is trivial on
    // p_E^{2d - different}; q_E = q
    const int m = 2 * d - f.different;
    return GammaFactor::padic_monomial(f.q, rho.pow(-m) * Root::q_power(mpq_class(-m, 2)), -m);
}

inline GammaFactor arch_L(const CharData& chi) {
    const cplx u = chi.u();
    if (chi.base == CharData::Base::F) {
        const int delta = (chi.sign + (chi.eta ? 1 : 0)) % 2;
        return GammaFactor::arch_atom(1, u + double(delta), 1);
    }
    // Gamma_C(z) = 2 (2 pi)^{-z} Gamma(z) = Gamma_R(z) Gamma_R(z + 1)
    const double k = 0.5 * double(std::labs(chi.weight));
    return GammaFactor::arch_atom(1, u + k, 1) * GammaFactor::arch_atom(1, u + k + 1.0, 1);
}

inline int arch_sign_exponent(const CharData& chi) {
    if (chi.base == CharData::Base::F)
        return (chi.sign + (chi.eta ? 1 : 0)) % 2;
    return static_cast<int>(std::labs(chi.weight));
}

} // namespace detail

/// zeta_F(s) = L(s, 1_F).
inline GammaFactor zeta(const FieldData& f) {
    f.validate();
    if (f.is_padic())
        return GammaFactor::padic_linear(f.q, Root::one(), -1);
    return GammaFactor::arch_atom(1, 0.0, 1);
}

/// L(s, chi) as a factor over F (characters of E are expanded in T = q_F^{-s}).
inline GammaFactor l_factor(const CharData& chi, const FieldData& f) {
    f.validate();
    chi.validate(f);
    return f.is_padic() ? detail::padic_L(f, chi) : detail::arch_L(chi);
}

/// gamma(s, chi, psi') = eps(s, chi, psi') L(1 - s, chi^{-1}) / L(s, chi); for a character of E
/// the additive character is psi'_E = psi' o Tr. With psi_inverse the additive character
/// is psi'^{-1}, which multiplies epsilon by chi(-1).
inline GammaFactor tate_gamma(const CharData& chi, const FieldData& f, bool psi_inverse = false) {
    f.validate();
    chi.validate(f);
    if (f.is_padic()) {
        GammaFactor eps = detail::padic_epsilon(f, chi);
        if (psi_inverse)
            eps *= GammaFactor::padic_monomial(f.q, detail::padic_sign(f, chi), 0);
        return eps * detail::padic_L(f, chi.inverse()).reflected() / detail::padic_L(f, chi);
    }
    // eps(s, chi, psi_a) = (i a)^delta on R and (i a)^{|k|} on C, a = psi_sign
    const int a = psi_inverse ? -f.psi_sign : f.psi_sign;
    const cplx eps = std::pow(cplx(0, a), detail::arch_sign_exponent(chi));
    return GammaFactor::arch_constant(eps) * detail::arch_L(chi.inverse()).reflected() / detail::arch_L(chi);
}

struct LambdaValue {
    cplx value;
    std::optional<Root> exact; // p-adic
};

/// lambda_{E/F}(psi') = gamma(1/2, eta_{E/F}, psi') = eps(1/2, eta_{E/F}, psi').
inline LambdaValue lambda_factor(const FieldData& f) {
    const GammaFactor g = tate_gamma(CharData::eta_char(), f);
    LambdaValue r;
    r.value = g(0.5);
    if (f.is_padic()) {
        // eta is its own inverse, so the L-quotient is 1 at s = 1/2 and lambda is the
        // epsilon monomial K T^m at T = q^{-1/2}
        const GammaFactor e = detail::padic_epsilon(f, CharData::eta_char());
        r.exact = e.constant() * Root::q_power(mpq_class(-e.t_power(), 2));
    }
    return r;
}

/// The F-level factor gamma(s, Ind chi, psi') = lambda(psi') gamma(s, chi, psi'_E).
inline GammaFactor induced_gamma(const CharData& chi, const FieldData& f) {
    if (chi.base != CharData::Base::E)
        throw std::invalid_argument("induction needs a character of E");
    const GammaFactor g = tate_gamma(chi, f);
    if (f.is_padic()) {
        const auto lam = lambda_factor(f);
        if (!lam.exact)
            throw std::logic_error("lambda is not exact");
        return GammaFactor::padic_monomial(f.q, *lam.exact, 0) * g;
    }
    return GammaFactor::arch_constant(lambda_factor(f).value) * g;
}

/// Multiplicative over direct sums; orders at 0 add.
inline GammaFactor product(const std::vector<GammaFactor>& gs) {
    if (gs.empty())
        throw std::invalid_argument("empty product of gamma factors");
    GammaFactor g = gs.front();
    for (std::size_t i = 1; i < gs.size(); ++i)
        g *= gs[i];
    return g;
}

struct AbelianProduct {
    cplx value;
    std::optional<mpq_class> exact;
    std::vector<cplx> terms;
};

/// prod_{k=1}^n gamma(1 - k, eta^k, psi'), eta^k = eta for odd k and trivial for even k.
inline AbelianProduct abelian_gamma_product(unsigned n, const FieldData& f) {
    if (n < 1)
        throw std::invalid_argument("abelian product needs n >= 1");
    AbelianProduct r;
    r.value = 1.0;
    std::optional<mpq_class> exact = mpq_class(1);
    for (unsigned k = 1; k <= n; ++k) {
        const CharData chi = k % 2 ? CharData::eta_char() : CharData::trivial();
        const GammaFactor g = tate_gamma(chi, f);
        const long s = 1 - static_cast<long>(k);
        cplx v;
        if (f.is_padic()) {
            auto e = g.exact_at_integer(s);
            if (e) {
                v = e->get_d();
                if (exact)
                    *exact *= *e;
            } else {
                v = g(double(s));
                exact.reset();
            }
        } else {
            v = g(double(s));
            exact.reset();
        }
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()) || v == 0.0)
            throw pole_error("abelian gamma product hit a pole or zero at k = " + std::to_string(k));
        r.terms.push_back(v);
        r.value *= v;
    }
    r.exact = exact;
    if (exact)
        r.value = exact->get_d();
    return r;
}

} // namespace plancherel::local
