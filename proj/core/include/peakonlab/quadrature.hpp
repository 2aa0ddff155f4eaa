#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iterator>
#include <span>
#include <vector>

#include "peakonlab/train.hpp"

namespace peakonlab {

// A point at which an integrand is evaluated. At kinks `side` says which
// one-sided limit u/ux hold; analytic factors with their own breakpoints
// (passed as `extra_breaks`) should use it to pick the matching limit.
struct FieldPoint {
    double x = 0.0;
    double u = 0.0;
    double ux = 0.0;
    Side side = Side::center;
    std::size_t cell = 0;  // x lies in [x_cell, x_cell+1]
    double frac = 0.0;     // (x - x_cell) / h
};

// Linear interpolation of a node array at p (exact at nodes).
inline double interpolate(std::span<const double> values, const FieldPoint& p) {
    if (p.frac == 0.0 || p.cell + 1 >= values.size()) return values[p.cell];
    return values[p.cell] * (1.0 - p.frac) + values[p.cell + 1] * p.frac;
}

// Cubic Hermite interpolant of (u, u_x) given at both ends of [xa, xb].
inline double hermite(double xa, double ua, double uxa, double xb, double ub, double uxb, double x) {
    const double s = xb - xa;
    if (s <= 0.0) return ua;
    const double t = (x - xa) / s;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * ua + (t3 - 2 * t2 + t) * s * uxa + (3 * t2 - 2 * t3) * ub + (t3 - t2) * s * uxb;
}

namespace detail {

struct Break {
    double x;
    double u_left, u_right, ux_left, ux_right;
};

// Merge field kinks with extra analytic breakpoints inside [lo_node, hi_node].
inline std::vector<Break> collect_breaks(const GridField& f, std::span<const double> extra, std::size_t lo,
                                         std::size_t hi) {
    const Grid& g = f.grid;
    const double xlo = g.node(lo);
    const double xhi = g.node(hi);
    std::vector<Break> out;
    for (const Kink& k : f.kinks) {
        if (k.x >= xlo && k.x <= xhi) out.push_back({k.x, k.u_left, k.u_right, k.ux_left, k.ux_right});
    }
    for (double s : extra) {
        if (!(s >= xlo && s <= xhi)) continue;
        // Field values at s from the nearest nodes or kink limits on either
        // side (Hermite for u, linear for u_x), unless s already is a kink.
        const auto it = std::find_if(out.begin(), out.end(), [&](const Break& b) { return b.x == s; });
        if (it != out.end()) continue;
        const double t = (s - g.x0) / g.h;
        const std::size_t c = static_cast<std::size_t>(std::clamp(std::floor(t), 0.0, static_cast<double>(g.n - 2)));
        double xa = g.node(c), ua = f.u[c], uxa = f.ux[c];
        double xb = g.node(c + 1), ub = f.u[c + 1], uxb = f.ux[c + 1];
        const auto first = std::lower_bound(f.kinks.begin(), f.kinks.end(), s,
                                            [](const Kink& k, double v) { return k.x < v; });
        if (first != f.kinks.begin()) {
            const Kink& k = *std::prev(first);
            if (k.x >= xa) xa = k.x, ua = k.u_right, uxa = k.ux_right;
        }
        if (first != f.kinks.end() && first->x <= xb) xb = first->x, ub = first->u_left, uxb = first->ux_left;
        const double fr = xb > xa ? std::clamp((s - xa) / (xb - xa), 0.0, 1.0) : 0.0;
        const double u = hermite(xa, ua, uxa, xb, ub, uxb, s);
        const double ux = uxa + (uxb - uxa) * fr;
        out.push_back({s, u, u, ux, ux});
    }
    std::sort(out.begin(), out.end(), [](const Break& a, const Break& b) { return a.x < b.x; });
    return out;
}

// Trapezoid sum over one smooth piece with the leading Euler-Maclaurin term
// removed: each sub-interval of length d gets -d^2/12 (f'(right) - f'(left)),
// which telescopes over the uniform interior. f' comes from three-point
// stencils whose points are at least h/8 apart; an end sub-interval shorter
// than that keeps its O(d^3) error.
class PieceSum {
public:
    explicit PieceSum(double h) : h_(h) {}

    void begin(double x, double fx) {
        n_ = 0;
        trap_ = 0.0;
        push(x, fx);
    }
    void add(double x, double fx) {
        trap_ += 0.5 * (x - last_x_) * (fx + last_f_);
        push(x, fx);
    }
    double finish() const {
        if (n_ < 3) return trap_;
        const std::size_t nh = std::min<std::size_t>(n_, 4);
        const double da = hx_[1] - hx_[0];
        const double db = tail(0).x - tail(1).x;
        const double min_sep = h_ / 8.0;

        // Stencil points near the start and the end, dropping a short end interval.
        Pt s[4], e[4];
        std::size_t ns = 0, ne = 0;
        for (std::size_t i = 0; i < nh; ++i) {
            if (i == 0 && da < min_sep) continue;
            if (i == n_ - 1 && db < min_sep) continue;
            s[ns++] = {hx_[i], hf_[i]};
        }
        for (std::size_t i = nh; i-- > 0;) {
            const std::size_t global = n_ - 1 - i;
            if (global == n_ - 1 && db < min_sep) continue;
            if (global == 0 && da < min_sep) continue;
            e[ne++] = tail(i);
        }
        if (ns < 3 || ne < 3) return trap_;

        const double x1 = hx_[1];
        const double xm = tail(1).x;
        const double d1 = deriv(s, x1);
        const double dm = deriv(e + (ne - 3), xm);
        double corr = h_ * h_ * (dm - d1);
        if (da >= min_sep) corr += da * da * (d1 - deriv(s, hx_[0]));
        if (db >= min_sep) corr += db * db * (deriv(e + (ne - 3), tail(0).x) - dm);
        return trap_ - corr / 12.0;
    }

private:
    struct Pt {
        double x, f;
    };

    // Derivative at t of the parabola through three points.
    static double deriv(const Pt* p, double t) {
        const double x0 = p[0].x, x1 = p[1].x, x2 = p[2].x;
        return p[0].f * ((t - x1) + (t - x2)) / ((x0 - x1) * (x0 - x2)) +
               p[1].f * ((t - x0) + (t - x2)) / ((x1 - x0) * (x1 - x2)) +
               p[2].f * ((t - x0) + (t - x1)) / ((x2 - x0) * (x2 - x1));
    }

    void push(double x, double fx) {
        if (n_ < 4) {
            hx_[n_] = x;
            hf_[n_] = fx;
        }
        ring_[n_ % 4] = {x, fx};
        ++n_;
        last_x_ = x;
        last_f_ = fx;
    }
    // i-th point from the end (0 is the last).
    Pt tail(std::size_t i) const { return ring_[(n_ - 1 - i) % 4]; }

    double h_;
    std::size_t n_ = 0;
    double trap_ = 0.0;
    double last_x_ = 0.0, last_f_ = 0.0;
    double hx_[4] = {}, hf_[4] = {};
    Pt ring_[4] = {};
};

}  // namespace detail

// Composite trapezoid rule over nodes [lo, hi] of the field's grid, split into
// smooth pieces at kinks and extra breakpoints, with an end correction per
// piece (error O(h^4) for piecewise-smooth integrands).
// fn(const FieldPoint&) -> double.
template <class Fn>
double integrate(const GridField& f, std::span<const double> extra_breaks, Fn&& fn, std::size_t lo, std::size_t hi) {
    const Grid& g = f.grid;
    if (hi >= g.n) hi = g.n - 1;
    if (lo >= hi) return 0.0;
    const double h = g.h;
    const double snap = 1e-9 * h;

    auto node_value = [&](std::size_t m) {
        FieldPoint p;
        p.x = g.node(m);
        p.u = f.u[m];
        p.ux = f.ux[m];
        p.cell = m;
        return fn(p);
    };
    auto break_value = [&](const detail::Break& b, double x, Side side) {
        FieldPoint p;
        p.x = x;
        p.u = side == Side::left ? b.u_left : b.u_right;
        p.ux = side == Side::left ? b.ux_left : b.ux_right;
        p.side = side;
        const double t = (x - g.x0) / h;
        p.cell = static_cast<std::size_t>(std::clamp(std::floor(t), 0.0, static_cast<double>(g.n - 2)));
        p.frac = std::clamp(t - static_cast<double>(p.cell), 0.0, 1.0);
        return fn(p);
    };

    const std::vector<detail::Break> breaks = detail::collect_breaks(f, extra_breaks, lo, hi);
    detail::PieceSum piece(h);
    double total = 0.0;
    double piece_start = g.node(lo);
    piece.begin(piece_start, node_value(lo));
    std::size_t m = lo + 1;  // next node to feed

    for (const detail::Break& b : breaks) {
        const double near = std::round((b.x - g.x0) / h);
        const bool on_node = near >= 0.0 && std::abs(b.x - g.node(static_cast<std::size_t>(near))) <= snap;
        const std::size_t stop = on_node ? static_cast<std::size_t>(near) : m;
        if (on_node) {
            for (; m < stop; ++m) piece.add(g.node(m), node_value(m));
        } else {
            for (; m <= hi && g.node(m) < b.x; ++m) piece.add(g.node(m), node_value(m));
        }
        // Break values are taken at b.x so that analytic factors see their own breakpoint.
        const double x = on_node ? g.node(stop) : b.x;
        if (x > piece_start) {
            piece.add(x, break_value(b, b.x, Side::left));
            total += piece.finish();
        }
        piece_start = x;
        piece.begin(x, break_value(b, b.x, Side::right));
        if (on_node) m = std::max(m, stop + 1);
    }
    if (piece_start < g.node(hi)) {
        for (; m <= hi; ++m) piece.add(g.node(m), node_value(m));
        total += piece.finish();
    }
    return total;
}

template <class Fn>
double integrate(const GridField& f, std::span<const double> extra_breaks, Fn&& fn) {
    return integrate(f, extra_breaks, std::forward<Fn>(fn), 0, f.grid.n - 1);
}

template <class Fn>
double integrate(const GridField& f, Fn&& fn) {
    return integrate(f, std::span<const double>{}, std::forward<Fn>(fn), 0, f.grid.n - 1);
}

// Node index range [lo, hi] covering [a, b] (clamped to the grid).
inline std::pair<std::size_t, std::size_t> node_range(const Grid& g, double a, double b) {
    const double lo = std::clamp(std::floor((a - g.x0) / g.h), 0.0, static_cast<double>(g.n - 1));
    const double hi = std::clamp(std::ceil((b - g.x0) / g.h), 0.0, static_cast<double>(g.n - 1));
    return {static_cast<std::size_t>(lo), static_cast<std::size_t>(hi)};
}

}  // namespace peakonlab
