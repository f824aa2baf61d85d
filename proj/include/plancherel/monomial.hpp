#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>

namespace plancherel {

inline constexpr std::size_t max_vars = 16;
inline constexpr unsigned max_degree = 255;

/// Exponent vector packed into two words, one byte per variable.
///
/// Variable 0 occupies the most significant byte of the high word, so that
/// comparing (degree, hi, lo) lexicographically is exactly the graded
/// lexicographic order with x1 > x2 > ... > x16. Total degree is capped at
/// 255, which makes per-byte overflow impossible in products.
class Monomial {
public:
    constexpr Monomial() = default;

    explicit Monomial(std::span<const unsigned> exps) {
        if (exps.size() > max_vars)
            throw std::invalid_argument("monomial: too many variables");
        for (std::size_t i = 0; i < exps.size(); ++i)
            set(i, exps[i]);
    }

    static Monomial variable(std::size_t i, unsigned e = 1) {
        Monomial m;
        m.set(i, e);
        return m;
    }

    unsigned operator[](std::size_t i) const noexcept {
        const std::uint64_t w = i < 8 ? hi_ : lo_;
        return static_cast<unsigned>((w >> shift(i)) & 0xffu);
    }

    unsigned degree() const noexcept { return deg_; }
    bool is_one() const noexcept { return deg_ == 0; }

    void set(std::size_t i, unsigned e) {
        if (i >= max_vars)
            throw std::out_of_range("monomial: variable index");
        const unsigned old = (*this)[i];
        if (deg_ - old + e > max_degree)
            throw std::overflow_error("monomial: total degree exceeds 255");
        std::uint64_t& w = i < 8 ? hi_ : lo_;
        w &= ~(std::uint64_t{0xff} << shift(i));
        w |= std::uint64_t{e} << shift(i);
        deg_ = static_cast<std::uint16_t>(deg_ - old + e);
    }

    Monomial operator*(const Monomial& o) const {
        if (deg_ + o.deg_ > max_degree)
            throw std::overflow_error("monomial: total degree exceeds 255");
        Monomial r;
        r.hi_ = hi_ + o.hi_;
        r.lo_ = lo_ + o.lo_;
        r.deg_ = static_cast<std::uint16_t>(deg_ + o.deg_);
        return r;
    }

    bool divides(const Monomial& o) const noexcept {
        if (deg_ > o.deg_)
            return false;
        for (std::size_t i = 0; i < max_vars; ++i)
            if ((*this)[i] > o[i])
                return false;
        return true;
    }

    /// o / *this; requires divides(o).
    Monomial quotient_of(const Monomial& o) const noexcept {
        Monomial r;
        r.hi_ = o.hi_ - hi_;
        r.lo_ = o.lo_ - lo_;
        r.deg_ = static_cast<std::uint16_t>(o.deg_ - deg_);
        return r;
    }

    std::strong_ordering operator<=>(const Monomial& o) const noexcept {
        if (auto c = deg_ <=> o.deg_; c != 0)
            return c;
        if (auto c = hi_ <=> o.hi_; c != 0)
            return c;
        return lo_ <=> o.lo_;
    }
    bool operator==(const Monomial&) const noexcept = default;

    std::size_t hash() const noexcept {
        std::uint64_t h = hi_ * 0x9e3779b97f4a7c15ULL;
        h ^= (lo_ + 0x632be59bd9b4e019ULL) * 0xbf58476d1ce4e5b9ULL;
        h ^= h >> 31;
        return static_cast<std::size_t>(h);
    }

private:
    static constexpr unsigned shift(std::size_t i) noexcept { return static_cast<unsigned>(56 - 8 * (i % 8)); }

    std::uint64_t hi_ = 0;
    std::uint64_t lo_ = 0;
    std::uint16_t deg_ = 0;
};

struct MonomialHash {
    std::size_t operator()(const Monomial& m) const noexcept { return m.hash(); }
};

} // namespace plancherel
