#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <queue>
#include <vector>

namespace plancherel::quad {

using cplx = std::complex<double>;

struct Estimate {
    cplx value{};
    double error = 0;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss-Legendre rule (QUADPACK qk15 tables).
inline constexpr std::array<double, 8> xgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851, 0.864864423359769072789712788640926,
    0.741531185599394439863864773280788, 0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> wgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204, 0.104790010322250183839876322541518,
    0.140653259715525918745189590510238, 0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> wg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                             0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

} // namespace detail

/// Kronrod value on [a, b]; error is |Kronrod - Gauss|.
template <class F>
Estimate gk15(F&& f, double a, double b) {
    using namespace detail;
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const cplx fc = f(c);
    cplx k = fc * wgk[7], g = fc * wg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * xgk[j];
        const cplx s = f(c - dx) + f(c + dx);
        k += wgk[j] * s;
        if (j % 2 == 1)
            g += wg[j / 2] * s;
    }
    return {k * h, std::abs((k - g) * h)};
}

/// Neumaier-compensated complex sum.
class CompensatedSum {
  public:
    void add(cplx v) {
        add_part(re_, cre_, v.real());
        add_part(im_, cim_, v.imag());
    }
    cplx value() const { return {re_ + cre_, im_ + cim_}; }

  private:
    static void add_part(double& s, double& c, double x) {
        const double t = s + x;
        c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
        s = t;
    }
    double re_ = 0, im_ = 0, cre_ = 0, cim_ = 0;
};

struct Options {
    double abs_tol = 1e-12;
    double rel_tol = 1e-9;
    std::size_t max_intervals = 4000;
};

struct Result {
    cplx value{};
    double error = 0;
    std::size_t intervals = 0;
    bool converged = false;
};

/// Adaptive bisection starting from the mesh given by `points` (sorted, at least two).
/// Intervals with the largest error estimate are split first.
template <class F>
Result integrate(F&& f, const std::vector<double>& points, const Options& opt = {}) {
    struct Piece {
        double a, b;
        Estimate e;
    };
    std::vector<Piece> pieces;
    pieces.reserve(points.size() + 16);
    for (std::size_t i = 0; i + 1 < points.size(); ++i)
        if (points[i + 1] > points[i])
            pieces.push_back({points[i], points[i + 1], gk15(f, points[i], points[i + 1])});

    auto worse = [&](std::size_t x, std::size_t y) { return pieces[x].e.error < pieces[y].e.error; };
    std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(worse)> queue(worse);
    cplx total{};
    double err = 0;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        queue.push(i);
        total += pieces[i].e.value;
        err += pieces[i].e.error;
    }
    Result r;
    while (!queue.empty()) {
        if (err <= std::max(opt.abs_tol, opt.rel_tol * std::abs(total)))
            break;
        if (pieces.size() >= opt.max_intervals)
            break;
        const std::size_t i = queue.top();
        queue.pop();
        const Piece p = pieces[i];
        const double m = 0.5 * (p.a + p.b);
        if (!(m > p.a && m < p.b))
            continue; // cannot split further
        Piece left{p.a, m, gk15(f, p.a, m)}, right{m, p.b, gk15(f, m, p.b)};
        total += left.e.value + right.e.value - p.e.value;
        err += left.e.error + right.e.error - p.e.error;
        pieces[i] = left;
        pieces.push_back(right);
        queue.push(i);
        queue.push(pieces.size() - 1);
    }
    // Final sum in mesh order so the result does not depend on refinement history.
    std::sort(pieces.begin(), pieces.end(), [](const Piece& x, const Piece& y) { return x.a < y.a; });
    CompensatedSum sum;
    double e = 0;
    for (const auto& p : pieces) {
        sum.add(p.e.value);
        e += p.e.error;
    }
    r.value = sum.value();
    r.error = e;
    r.intervals = pieces.size();
    r.converged = e <= std::max(opt.abs_tol, opt.rel_tol * std::abs(r.value));
    return r;
}

/// Near-singular point of a 1-D integrand: location and the distance of the
/// singularity from the real axis.
struct Hotspot {
    double at;
    double width;
};

/// Mesh on [lo, hi] refined geometrically (ratio 4) toward each hotspot.
inline std::vector<double> graded_mesh(double lo, double hi, const std::vector<Hotspot>& spots, double ratio = 4.0) {
    std::vector<double> pts{lo, hi};
    const double span = hi - lo;
    for (const auto& h : spots) {
        const double w = std::max(h.width, 1e-14 * span);
        if (h.at > lo && h.at < hi)
            pts.push_back(h.at);
        for (double d = w; d < span; d *= ratio) {
            if (h.at - d > lo && h.at - d < hi)
                pts.push_back(h.at - d);
            if (h.at + d > lo && h.at + d < hi)
                pts.push_back(h.at + d);
        }
    }
    std::sort(pts.begin(), pts.end());
    // Drop points closer than a fraction of the finest local spacing.
    std::vector<double> out;
    out.reserve(pts.size());
    for (double p : pts)
        if (out.empty() || p - out.back() > 1e-13 * std::max(1.0, std::abs(p)))
            out.push_back(p);
    if (out.back() != hi)
        out.back() = hi;
    return out;
}

} // namespace plancherel::quad
