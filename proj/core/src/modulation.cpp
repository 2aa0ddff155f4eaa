#include "peakonlab/modulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "peakonlab/errors.hpp"
#include "peakonlab/functionals.hpp"
#include "peakonlab/quadrature.hpp"

namespace peakonlab {

namespace {

// d/dx e^{-|x - a|} with the one-sided limit requested at x = a.
double kernel_slope(double x, double a, Side side) {
    const double e = std::exp(-std::abs(x - a));
    if (x < a || (x == a && side == Side::left)) return e;
    if (x > a || (x == a && side == Side::right)) return -e;
    return 0.0;
}

double inf_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

bool increasing(const std::vector<double>& x) {
    for (std::size_t i = 1; i < x.size(); ++i)
        if (!(x[i] > x[i - 1])) return false;
    return true;
}

// Solves a x = b in place by Gaussian elimination with partial pivoting.
bool solve(std::vector<double> a, std::vector<double>& b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
        if (a[piv * n + col] == 0.0 || !std::isfinite(a[piv * n + col])) return false;
        if (piv != col) {
            for (std::size_t k = 0; k < n; ++k) std::swap(a[col * n + k], a[piv * n + k]);
            std::swap(b[col], b[piv]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r * n + col] / a[col * n + col];
            for (std::size_t k = col; k < n; ++k) a[r * n + k] -= f * a[col * n + k];
            b[r] -= f * b[col];
        }
    }
    for (std::size_t r = n; r-- > 0;) {
        double s = b[r];
        for (std::size_t k = r + 1; k < n; ++k) s -= a[r * n + k] * b[k];
        b[r] = s / a[r * n + r];
    }
    return true;
}

}  // namespace

std::vector<double> orthogonality_residual(const GridField& f, std::span<const double> c, std::span<const double> x,
                                           double window) {
    const std::size_t n = c.size();
    std::vector<double> g(n);
    const std::vector<double> breaks(x.begin(), x.end());
    for (std::size_t i = 0; i < n; ++i) {
        const auto [lo, hi] = node_range(f.grid, x[i] - window, x[i] + window);
        const double xi = x[i];
        const double ci = c[i];
        g[i] = integrate(
            f, breaks,
            [&](const FieldPoint& p) {
                double r = p.u;
                for (std::size_t j = 0; j < n; ++j) r -= c[j] * std::exp(-std::abs(p.x - x[j]));
                return r * ci * kernel_slope(p.x, xi, p.side);
            },
            lo, hi);
    }
    return g;
}

ModulationResult modulate(const GridField& f, std::span<const double> c, std::span<const double> guess,
                          const ModulationOptions& options) {
    const std::size_t n = c.size();
    if (guess.size() != n) throw InvalidInput("modulate: guess and velocities differ in length");
    std::vector<double> x(guess.begin(), guess.end());
    if (!increasing(x)) throw OrderingLost("modulate: initial guess is not increasing");

    const double tol = options.tol > 0.0 ? options.tol : options.rel_tol * std::sqrt(std::max(energy_E(f), 0.0));
    auto residual = [&](const std::vector<double>& at) { return orthogonality_residual(f, c, at, options.window); };

    ModulationResult out;
    std::vector<double> g = residual(x);
    double norm = inf_norm(g);
    for (int it = 0; it < options.max_iterations; ++it) {
        if (norm <= tol) {
            out.x = std::move(x);
            out.stats.iterations = it;
            out.stats.residual = norm;
            return out;
        }
        std::vector<double> jac(n * n);
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<double> xp = x;
            const double step = options.fd_step * std::max(1.0, std::abs(x[j]));
            xp[j] += step;
            const std::vector<double> gp = residual(xp);
            for (std::size_t i = 0; i < n; ++i) jac[i * n + j] = (gp[i] - g[i]) / step;
        }
        std::vector<double> d(n);
        for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
        if (!solve(jac, d)) throw NoConvergence("modulate: singular Jacobian");

        double lambda = 1.0;
        bool accepted = false;
        bool saw_ordered = false;
        for (int h = 0; h <= options.max_halvings; ++h, lambda *= 0.5) {
            std::vector<double> trial(n);
            for (std::size_t i = 0; i < n; ++i) trial[i] = x[i] + lambda * d[i];
            if (!increasing(trial)) continue;
            saw_ordered = true;
            std::vector<double> gt = residual(trial);
            const double nt = inf_norm(gt);
            if (nt < norm) {
                x = std::move(trial);
                g = std::move(gt);
                norm = nt;
                out.stats.halvings += h;
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            if (norm <= 100.0 * tol) break;  // stalled at the rounding floor just above tol
            if (!saw_ordered) throw OrderingLost("modulate: every damped step breaks the ordering");
            throw NoConvergence("modulate: no damped step reduces the residual (max |G| = " + std::to_string(norm) +
                                ")");
        }
    }
    if (norm > 100.0 * tol) {
        throw NoConvergence("modulate: no convergence in " + std::to_string(options.max_iterations) +
                            " iterations (max |G| = " + std::to_string(norm) + ")");
    }
    out.x = std::move(x);
    out.stats.iterations = options.max_iterations;
    out.stats.residual = norm;
    return out;
}

std::vector<double> track_bumps(const GridField& f, std::span<const double> xtilde, double L) {
    const Grid& g = f.grid;
    std::vector<double> out(xtilde.size());
    for (std::size_t i = 0; i < xtilde.size(); ++i) {
        const double a = xtilde[i] - 0.25 * L;
        const double b = xtilde[i] + 0.25 * L;
        if (a < g.x0 || b > g.x_end()) {
            throw EmptyWindow("bump window [" + std::to_string(a) + ", " + std::to_string(b) + "] leaves the grid");
        }
        const auto lo = static_cast<std::size_t>(std::ceil((a - g.x0) / g.h));
        const auto hi = static_cast<std::size_t>(std::floor((b - g.x0) / g.h));
        double best = -1.0;
        double where = xtilde[i];
        std::size_t best_node = g.n;
        for (std::size_t m = lo; m <= hi && m < g.n; ++m) {
            if (std::abs(f.u[m]) > best) {
                best = std::abs(f.u[m]);
                where = g.node(m);
                best_node = m;
            }
        }
        bool at_kink = false;
        for (const Kink& k : f.kinks) {
            if (k.x < a || k.x > b) continue;
            const double v = std::max(std::abs(k.u_left), std::abs(k.u_right));
            if (v >= best) {
                best = v;
                where = k.x;
                at_kink = true;
            }
        }
        if (!at_kink && best_node < g.n && best_node > lo && best_node < hi) {
            const double x0 = g.node(best_node);
            bool near_kink = false;
            for (const Kink& k : f.kinks) near_kink = near_kink || std::abs(k.x - x0) <= g.h;
            if (!near_kink) {
                const double fm = std::abs(f.u[best_node - 1]);
                const double f0 = std::abs(f.u[best_node]);
                const double fp = std::abs(f.u[best_node + 1]);
                const double den = fm - 2.0 * f0 + fp;
                if (den < 0.0) where = std::clamp(x0 + 0.5 * g.h * (fm - fp) / den, a, b);
            }
        }
        out[i] = where;
    }
    return out;
}

std::vector<std::vector<double>> drift_speeds(const ModulationPath& path, std::span<const double> c) {
    const std::size_t m = path.times.size();
    std::vector<std::vector<double>> out(m, std::vector<double>(c.size(), 0.0));
    if (m < 2) return out;
    for (std::size_t s = 0; s < m; ++s) {
        const std::size_t lo = s == 0 ? 0 : s - 1;
        const std::size_t hi = s + 1 == m ? s : s + 1;
        const double dt = path.times[hi] - path.times[lo];
        for (std::size_t i = 0; i < c.size(); ++i) {
            out[s][i] = (path.xtilde[hi][i] - path.xtilde[lo][i]) / dt - c[i];
        }
    }
    return out;
}

double h1_distance_to_train(const PeakonTrain& u, std::span<const double> c, std::span<const double> x) {
    std::vector<double> w(u.p().begin(), u.p().end());
    std::vector<double> pos(u.q().begin(), u.q().end());
    for (std::size_t j = 0; j < c.size(); ++j) {
        w.push_back(-c[j]);
        pos.push_back(x[j]);
    }
    return std::sqrt(std::max(h1_norm_squared(w, pos), 0.0));
}

double h1_distance_to_train(const GridField& u, std::span<const double> c, std::span<const double> x) {
    const std::vector<double> breaks(x.begin(), x.end());
    const double d2 = integrate(u, breaks, [&](const FieldPoint& p) {
        double r = p.u;
        double rx = p.ux;
        for (std::size_t j = 0; j < c.size(); ++j) {
            r -= c[j] * std::exp(-std::abs(p.x - x[j]));
            rx -= c[j] * kernel_slope(p.x, x[j], p.side);
        }
        return r * r + rx * rx;
    });
    return std::sqrt(std::max(d2, 0.0));
}

}  // namespace peakonlab
