#include "peakonlab/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>

#include "peakonlab/errors.hpp"
#include "peakonlab/quadrature.hpp"

namespace peakonlab {

double sigma0(std::span<const double> c, std::size_t k) {
    if (k >= c.size()) throw InvalidScenario("sigma0: no positive velocity");
    double m = c[k];
    for (std::size_t i = k + 1; i < c.size(); ++i) m = std::min(m, c[i] - c[i - 1]);
    return 0.25 * m;
}

namespace {

double e_density(const FieldPoint& p) { return p.u * p.u + p.ux * p.ux; }
double f_density(const FieldPoint& p) { return p.u * (p.u * p.u + p.ux * p.ux); }

// Endpoints of the smooth pieces of one cell, with one-sided limits at kinks.
struct Piece {
    FieldPoint a;
    FieldPoint b;
};

class CellPieces {
public:
    explicit CellPieces(const GridField& f) : f_(f), at_cell_(f.grid.n) {
        const Grid& g = f.grid;
        const double snap = 1e-9 * g.h;
        for (std::size_t i = 0; i < f.kinks.size(); ++i) {
            const double x = f.kinks[i].x;
            if (x < g.x0 - snap || x > g.x_end() + snap) continue;
            const double t = (x - g.x0) / g.h;
            const double near = std::round(t);
            if (std::abs(x - g.node(static_cast<std::size_t>(std::max(near, 0.0)))) <= snap) {
                const auto m = static_cast<std::size_t>(near);
                if (m > 0) at_cell_[m - 1].push_back({i, +1});
                if (m + 1 < g.n) at_cell_[m].push_back({i, -1});
            } else {
                const auto c = static_cast<std::size_t>(std::clamp(std::floor(t), 0.0, static_cast<double>(g.n - 2)));
                at_cell_[c].push_back({i, 0});
            }
        }
        for (auto& v : at_cell_) {
            std::sort(v.begin(), v.end(), [&](const Ref& a, const Ref& b) {
                return a.where != b.where ? a.where < b.where : f.kinks[a.kink].x < f.kinks[b.kink].x;
            });
        }
    }

    FieldPoint node(std::size_t m) const {
        FieldPoint p;
        p.x = f_.grid.node(m);
        p.u = f_.u[m];
        p.ux = f_.ux[m];
        p.cell = std::min(m, f_.grid.n - 2);
        p.frac = m == p.cell ? 0.0 : 1.0;
        return p;
    }

    FieldPoint limit(std::size_t kink, Side side, std::size_t cell) const {
        const Kink& k = f_.kinks[kink];
        FieldPoint p;
        p.x = k.x;
        p.u = side == Side::left ? k.u_left : k.u_right;
        p.ux = side == Side::left ? k.ux_left : k.ux_right;
        p.side = side;
        p.cell = cell;
        p.frac = std::clamp((k.x - f_.grid.node(cell)) / f_.grid.h, 0.0, 1.0);
        return p;
    }

    bool plain(std::size_t cell) const { return at_cell_[cell].empty(); }

    std::vector<Piece> pieces(std::size_t cell) const {
        std::vector<Piece> out;
        FieldPoint start = node(cell);
        start.cell = cell;
        start.frac = 0.0;
        FieldPoint end = node(cell + 1);
        end.cell = cell;
        end.frac = 1.0;
        for (const Ref& r : at_cell_[cell]) {
            if (r.where == -1) start = limit(r.kink, Side::right, cell);
            else if (r.where == +1) end = limit(r.kink, Side::left, cell);
        }
        for (const Ref& r : at_cell_[cell]) {
            if (r.where != 0) continue;
            out.push_back({start, limit(r.kink, Side::left, cell)});
            start = limit(r.kink, Side::right, cell);
        }
        out.push_back({start, end});
        return out;
    }

private:
    struct Ref {
        std::size_t kink;
        int where;  // -1 left node, 0 interior, +1 right node
    };
    const GridField& f_;
    std::vector<std::vector<Ref>> at_cell_;
};

HelmholtzField filter(const Grid& g, std::span<const double> fwd, std::span<const double> bwd) {
    // fwd[m] = int_{x_m}^{x_{m+1}} e^{-(x_{m+1}-y)} v,  bwd[m] = int_{x_m}^{x_{m+1}} e^{-(y-x_m)} v
    HelmholtzField out{g, std::vector<double>(g.n), std::vector<double>(g.n), std::vector<double>(g.n),
                       std::vector<double>(g.n)};
    const double decay = std::exp(-g.h);
    out.a[0] = 0.0;
    for (std::size_t m = 1; m < g.n; ++m) out.a[m] = decay * out.a[m - 1] + fwd[m - 1];
    out.b[g.n - 1] = 0.0;
    for (std::size_t m = g.n - 1; m-- > 0;) out.b[m] = decay * out.b[m + 1] + bwd[m];
    for (std::size_t m = 0; m < g.n; ++m) {
        out.h[m] = 0.5 * (out.a[m] + out.b[m]);
        out.hx[m] = 0.5 * (out.b[m] - out.a[m]);
    }
    return out;
}

}  // namespace

double energy_E(const GridField& f) { return integrate(f, e_density); }
double energy_F(const GridField& f) { return integrate(f, f_density); }

double field_value(const GridField& f, double x, Side side) {
    const Grid& g = f.grid;
    if (x < g.x0 || x > g.x_end()) throw InvalidInput("field_value: point outside the grid");
    for (const Kink& k : f.kinks) {
        if (k.x == x) {
            if (side == Side::left) return k.u_left;
            if (side == Side::right) return k.u_right;
            return 0.5 * (k.u_left + k.u_right);
        }
    }
    const auto c = static_cast<std::size_t>(std::clamp(std::floor((x - g.x0) / g.h), 0.0, static_cast<double>(g.n - 2)));
    double xa = g.node(c), ua = f.u[c], uxa = f.ux[c];
    double xb = g.node(c + 1), ub = f.u[c + 1], uxb = f.ux[c + 1];
    for (const Kink& k : f.kinks) {
        if (k.x >= xa && k.x < x) {
            xa = k.x;
            ua = k.u_right;
            uxa = k.ux_right;
        } else if (k.x > x && k.x <= xb) {
            xb = k.x;
            ub = k.u_left;
            uxb = k.ux_left;
        }
    }
    return hermite(xa, ua, uxa, xb, ub, uxb, x);
}

double field_max(const GridField& f) {
    double m = *std::max_element(f.u.begin(), f.u.end());
    for (const Kink& k : f.kinks) m = std::max({m, k.u_left, k.u_right});
    return m;
}

double phi(const WeightFamily& fam, std::size_t time_index, std::size_t slot, double x) {
    const auto& y = fam.right.at(time_index);
    const ScaledWeight w = fam.weight();
    const double here = w(x - y.at(slot));
    return slot + 1 < y.size() ? here - w(x - y[slot + 1]) : here;
}

FunctionalSample localized_functionals(const GridField& f, const WeightFamily& fam, std::size_t ti,
                                       std::span<const double> lambdas) {
    const ScaledWeight w = fam.weight();
    const std::vector<double>& y = fam.right.at(ti);
    FunctionalSample s;
    s.t = fam.times.at(ti);
    s.E = energy_E(f);
    s.F = energy_F(f);
    const std::size_t tracks = y.size();
    s.IE.resize(tracks);
    s.IF.resize(tracks);
    for (std::size_t j = 0; j < tracks; ++j) {
        const double c = y[j];
        s.IE[j] = integrate(f, [&](const FieldPoint& p) { return w(p.x - c) * e_density(p); });
        s.IF[j] = integrate(f, [&](const FieldPoint& p) { return w(p.x - c) * f_density(p); });
    }
    s.E_i.resize(tracks);
    s.F_i.resize(tracks);
    for (std::size_t i = 0; i < tracks; ++i) {
        s.E_i[i] = i + 1 < tracks ? s.IE[i] - s.IE[i + 1] : s.IE[i];
        s.F_i[i] = i + 1 < tracks ? s.IF[i] - s.IF[i + 1] : s.IF[i];
    }
    s.I.assign(tracks, std::vector<double>(lambdas.size()));
    for (std::size_t j = 0; j < tracks; ++j)
        for (std::size_t l = 0; l < lambdas.size(); ++l) s.I[j][l] = s.IE[j] - lambdas[l] * s.IF[j];

    const double yl = fam.left.at(ti);
    if (std::isnan(yl)) {
        s.Itilde = std::numeric_limits<double>::quiet_NaN();
        s.complement = std::numeric_limits<double>::quiet_NaN();
    } else {
        s.Itilde = integrate(f, [&](const FieldPoint& p) { return w(yl - p.x) * e_density(p); });
        s.complement = s.E - s.Itilde - (tracks > 0 ? s.IE[0] : 0.0);
    }
    return s;
}

FunctionalSample localized_functionals(const GridField& f, const WeightFamily& fam, double t,
                                       std::span<const double> lambdas) {
    return localized_functionals(f, fam, fam.index_of(t), lambdas);
}

HelmholtzField helmholtz_inverse(const Grid& grid, std::span<const double> v) {
    grid.validate();
    if (v.size() != grid.n) throw InvalidInput("helmholtz_inverse: sample count differs from the grid");
    const double h = grid.h;
    const double decay = std::exp(-h);
    std::vector<double> fwd(grid.n - 1), bwd(grid.n - 1);
    for (std::size_t m = 0; m + 1 < grid.n; ++m) {
        fwd[m] = 0.5 * h * (decay * v[m] + v[m + 1]);
        bwd[m] = 0.5 * h * (v[m] + decay * v[m + 1]);
    }
    return filter(grid, fwd, bwd);
}

HelmholtzField helmholtz_inverse(const GridField& f, const std::function<double(const FieldPoint&)>& v) {
    f.grid.validate();
    const Grid& g = f.grid;
    const CellPieces cells(f);
    std::vector<double> vnode(g.n);
    for (std::size_t m = 0; m < g.n; ++m) vnode[m] = v(cells.node(m));
    const double decay = std::exp(-g.h);
    std::vector<double> fwd(g.n - 1), bwd(g.n - 1);
    for (std::size_t m = 0; m + 1 < g.n; ++m) {
        if (cells.plain(m)) {
            fwd[m] = 0.5 * g.h * (decay * vnode[m] + vnode[m + 1]);
            bwd[m] = 0.5 * g.h * (vnode[m] + decay * vnode[m + 1]);
            continue;
        }
        const double xl = g.node(m);
        const double xr = g.node(m + 1);
        double sf = 0.0;
        double sb = 0.0;
        for (const Piece& pc : cells.pieces(m)) {
            const double len = pc.b.x - pc.a.x;
            if (len <= 0.0) continue;
            const double fa = v(pc.a);
            const double fb = v(pc.b);
            sf += 0.5 * len * (std::exp(-(xr - pc.a.x)) * fa + std::exp(-(xr - pc.b.x)) * fb);
            sb += 0.5 * len * (std::exp(-(pc.a.x - xl)) * fa + std::exp(-(pc.b.x - xl)) * fb);
        }
        fwd[m] = sf;
        bwd[m] = sb;
    }
    return filter(g, fwd, bwd);
}

HelmholtzField helmholtz_inverse(const GridField& f) {
    return helmholtz_inverse(f, [](const FieldPoint& p) { return p.u * p.u + 0.5 * p.ux * p.ux; });
}

double check_h_dominance(const HelmholtzField& h) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < h.h.size(); ++i) m = std::min(m, h.h[i] * h.h[i] - h.hx[i] * h.hx[i]);
    return h.h.empty() ? 0.0 : m;
}

Lemma1Result lemma1_checks(const GridField& f, double c, double xi) {
    const double E = energy_E(f);
    const double F = energy_F(f);
    const double breaks[] = {xi};
    const double dist2 = integrate(f, std::span<const double>(breaks), [&](const FieldPoint& p) {
        const double e = std::exp(-std::abs(p.x - xi));
        double slope;
        if (p.x < xi || (p.x == xi && p.side == Side::left)) slope = c * e;
        else if (p.x > xi || p.side == Side::right) slope = -c * e;
        else slope = 0.0;
        const double du = p.u - c * e;
        const double dux = p.ux - slope;
        return du * du + dux * dux;
    });
    const double u_xi = field_value(f, xi);
    Lemma1Result r;
    r.M = field_max(f);
    r.eq1_residual = E - 2.0 * c * c - dist2 - 4.0 * c * (u_xi - c);
    r.eq2_slack = r.M * E - F - (2.0 / 3.0) * r.M * r.M * r.M;
    return r;
}

WeightFunction constant_weight() {
    return {[](double) { return 1.0; }, [](double, Side) { return 0.0; }, [](double, Side) { return 0.0; }, {}};
}

WeightFunction scaled_weight(const WeightProfile& profile, double K, double center) {
    // the profile is copied so the callables own their data
    auto prof = std::make_shared<WeightProfile>(profile);
    WeightFunction g;
    g.g = [prof, K, center](double x) { return ScaledWeight{prof.get(), K}(x - center); };
    g.g1 = [prof, K, center](double x, Side s) { return ScaledWeight{prof.get(), K}.prime(x - center, s); };
    g.g3 = [prof, K, center](double x, Side s) { return ScaledWeight{prof.get(), K}.ppp(x - center, s); };
    g.breaks = ScaledWeight{prof.get(), K}.breakpoints(center);
    return g;
}

namespace {

struct WeightedPair {
    double e = 0.0;
    double f = 0.0;
};

WeightedPair weighted(const GridField& f, const WeightFunction& g) {
    return {integrate(f, [&](const FieldPoint& p) { return g.g(p.x) * e_density(p); }),
            integrate(f, [&](const FieldPoint& p) { return g.g(p.x) * f_density(p); })};
}

}  // namespace

IdentityResidual derivative_identity_check(const PeakonTrain& state, const WeightFunction& g, double dt,
                                           double grid_h, double pad, double rel_tol) {
    if (!(dt > 0.0)) throw InvalidInput("derivative_identity_check: dt must be positive");
    const PeakonTrain before = flow(state, -dt, rel_tol, 1e-3 * rel_tol);
    const PeakonTrain after = flow(state, dt, rel_tol, 1e-3 * rel_tol);
    double lo = state.q().front();
    double hi = state.q().back();
    for (const PeakonTrain* t : {&before, &after}) {
        lo = std::min(lo, t->q().front());
        hi = std::max(hi, t->q().back());
    }
    const Grid grid = Grid::covering(lo - pad, hi + pad, grid_h);
    const GridField f0 = sample_on_grid(state, grid);
    const WeightedPair wb = weighted(sample_on_grid(before, grid), g);
    const WeightedPair wa = weighted(sample_on_grid(after, grid), g);

    IdentityResidual r;
    r.lhs_go = (wa.e - wb.e) / (2.0 * dt);
    r.lhs_gogo = (wa.f - wb.f) / (2.0 * dt);

    const HelmholtzField hf = helmholtz_inverse(f0);
    auto hval = [&](const FieldPoint& p) { return interpolate(hf.h, p); };
    auto hxval = [&](const FieldPoint& p) { return interpolate(hf.hx, p); };
    const std::span<const double> br(g.breaks);
    r.rhs_go = integrate(f0, br, [&](const FieldPoint& p) {
        const double u = p.u;
        const double ux = p.ux;
        const double g1 = g.g1(p.x, p.side);
        const double g3 = g.g3(p.x, p.side);
        return (u * u * u + 4.0 * u * ux * ux) * g1 - u * u * u * g3 - 2.0 * u * hval(p) * g1;
    });
    r.rhs_gogo = integrate(f0, br, [&](const FieldPoint& p) {
        const double u = p.u;
        const double ux = p.ux;
        const double g1 = g.g1(p.x, p.side);
        const double hh = hval(p);
        const double hx = hxval(p);
        return (0.25 * u * u * u * u + u * u * ux * ux) * g1 + u * u * hh * g1 + (hh * hh - hx * hx) * g1;
    });
    r.rhs_go_derived = integrate(f0, br, [&](const FieldPoint& p) {
        return (p.u * p.ux * p.ux + 2.0 * p.u * hval(p)) * g.g1(p.x, p.side);
    });
    r.go = r.lhs_go - r.rhs_go;
    r.go_derived = r.lhs_go - r.rhs_go_derived;
    r.gogo = r.lhs_gogo - r.rhs_gogo;
    return r;
}

IdentityResidual derivative_identity_check(const Trajectory& traj, const WeightFunction& g, double t, double dt,
                                           double grid_h, double pad) {
    for (std::size_t i = 0; i < traj.size(); ++i) {
        if (std::abs(traj.times[i] - t) <= 1e-12 * std::max(1.0, std::abs(t))) {
            return derivative_identity_check(traj.states[i], g, dt, grid_h, pad);
        }
    }
    throw InvalidInput("derivative_identity_check: t = " + std::to_string(t) + " is not a stored time");
}

}  // namespace peakonlab
