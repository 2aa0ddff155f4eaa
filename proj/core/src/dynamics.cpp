#include "peakonlab/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "peakonlab/errors.hpp"

namespace peakonlab {

void ode_rhs(std::span<const double> p, std::span<const double> q, std::span<double> qdot, std::span<double> pdot) {
    const std::size_t n = p.size();
    if (std::is_sorted(q.begin(), q.end())) {
        // left_i = sum_{j<=i} p_j e^{-(q_i-q_j)},  right_i = sum_{j>=i} p_j e^{-(q_j-q_i)}
        std::vector<double> left(n), right(n);
        for (std::size_t i = 0; i < n; ++i) {
            left[i] = p[i] + (i > 0 ? left[i - 1] * std::exp(-(q[i] - q[i - 1])) : 0.0);
        }
        for (std::size_t i = n; i-- > 0;) {
            right[i] = p[i] + (i + 1 < n ? right[i + 1] * std::exp(-(q[i + 1] - q[i])) : 0.0);
        }
        for (std::size_t i = 0; i < n; ++i) {
            qdot[i] = left[i] + right[i] - p[i];
            pdot[i] = p[i] * (left[i] - right[i]);
        }
        return;
    }
    for (std::size_t i = 0; i < n; ++i) {
        double a = 0.0;
        double b = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double d = q[i] - q[j];
            const double e = p[j] * std::exp(-std::abs(d));
            a += e;
            if (d > 0.0) b += e;
            else if (d < 0.0) b -= e;
        }
        qdot[i] = a;
        pdot[i] = p[i] * b;
    }
}

Rhs ode_rhs(const PeakonTrain& train) {
    Rhs r{std::vector<double>(train.size()), std::vector<double>(train.size())};
    ode_rhs(train.p(), train.q(), r.qdot, r.pdot);
    return r;
}

namespace {

// State layout: y = (q_1..q_N, p_1..p_N).
struct System {
    std::size_t n;
    void operator()(const std::vector<double>& y, std::vector<double>& dy) const {
        std::span<const double> ys(y);
        std::span<double> ds(dy);
        ode_rhs(ys.subspan(n, n), ys.subspan(0, n), ds.subspan(0, n), ds.subspan(n, n));
    }
};

std::vector<double> pack(const PeakonTrain& t) {
    std::vector<double> y(t.q().begin(), t.q().end());
    y.insert(y.end(), t.p().begin(), t.p().end());
    return y;
}

PeakonTrain unpack(const std::vector<double>& y, std::size_t n) {
    return PeakonTrain(std::vector<double>(y.begin() + static_cast<std::ptrdiff_t>(n), y.end()),
                       std::vector<double>(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n)));
}

double min_gap(const std::vector<double>& y, std::size_t n) {
    double g = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < n; ++i) g = std::min(g, y[i] - y[i - 1]);
    return g;
}

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;

class Dopri5 {
public:
    Dopri5(std::size_t n, double rtol, double atol) : f_{n}, rtol_(rtol), atol_(atol) {
        const std::size_t m = 2 * n;
        for (auto& k : k_) k.assign(m, 0.0);
        tmp_.assign(m, 0.0);
        ynew_.assign(m, 0.0);
    }

    double norm(const std::vector<double>& v, const std::vector<double>& y) const {
        double s = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double sc = atol_ + rtol_ * std::abs(y[i]);
            s += (v[i] / sc) * (v[i] / sc);
        }
        return std::sqrt(s / static_cast<double>(v.size()));
    }

    double initial_step(const std::vector<double>& y) {
        f_(y, k_[0]);
        const double d0 = norm(y, y);
        const double d1 = norm(k_[0], y);
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        for (std::size_t i = 0; i < y.size(); ++i) tmp_[i] = y[i] + h0 * k_[0][i];
        f_(tmp_, k_[1]);
        std::vector<double> diff(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) diff[i] = k_[1][i] - k_[0][i];
        const double d2 = norm(diff, y) / h0;
        const double big = std::max(d1, d2);
        const double h1 = big <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / big, 0.2);
        fsal_valid_ = true;  // k_[0] holds f(y)
        return std::min(100.0 * h0, h1);
    }

    // One trial step of size h from y. Returns the scaled error; the candidate
    // is left in ynew_ and f(ynew_) in k_[6].
    double attempt(const std::vector<double>& y, double h) {
        const std::size_t m = y.size();
        if (!fsal_valid_) f_(y, k_[0]);
        for (std::size_t i = 0; i < m; ++i) tmp_[i] = y[i] + h * a21 * k_[0][i];
        f_(tmp_, k_[1]);
        for (std::size_t i = 0; i < m; ++i) tmp_[i] = y[i] + h * (a31 * k_[0][i] + a32 * k_[1][i]);
        f_(tmp_, k_[2]);
        for (std::size_t i = 0; i < m; ++i) tmp_[i] = y[i] + h * (a41 * k_[0][i] + a42 * k_[1][i] + a43 * k_[2][i]);
        f_(tmp_, k_[3]);
        for (std::size_t i = 0; i < m; ++i)
            tmp_[i] = y[i] + h * (a51 * k_[0][i] + a52 * k_[1][i] + a53 * k_[2][i] + a54 * k_[3][i]);
        f_(tmp_, k_[4]);
        for (std::size_t i = 0; i < m; ++i)
            tmp_[i] = y[i] + h * (a61 * k_[0][i] + a62 * k_[1][i] + a63 * k_[2][i] + a64 * k_[3][i] + a65 * k_[4][i]);
        f_(tmp_, k_[5]);
        for (std::size_t i = 0; i < m; ++i)
            ynew_[i] = y[i] + h * (b1 * k_[0][i] + b3 * k_[2][i] + b4 * k_[3][i] + b5 * k_[4][i] + b6 * k_[5][i]);
        f_(ynew_, k_[6]);
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double err = h * (e1 * k_[0][i] + e3 * k_[2][i] + e4 * k_[3][i] + e5 * k_[4][i] + e6 * k_[5][i] +
                                    e7 * k_[6][i]);
            const double sc = atol_ + rtol_ * std::max(std::abs(y[i]), std::abs(ynew_[i]));
            s += (err / sc) * (err / sc);
        }
        const double e = std::sqrt(s / static_cast<double>(m));
        return std::isfinite(e) ? e : std::numeric_limits<double>::infinity();
    }

    void accept(std::vector<double>& y) {
        y.swap(ynew_);
        k_[0].swap(k_[6]);
        fsal_valid_ = true;
    }

    const std::vector<double>& candidate() const { return ynew_; }

private:
    System f_;
    double rtol_;
    double atol_;
    std::array<std::vector<double>, 7> k_;
    std::vector<double> tmp_;
    std::vector<double> ynew_;
    bool fsal_valid_ = false;
};

}  // namespace

Trajectory integrate(const PeakonTrain& train, double t_end, double rel_tol, double abs_tol,
                     std::span<const double> output_times, const IntegratorOptions& options) {
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw InvalidInput("integrate: t_end must be positive");
    if (!(rel_tol > 0.0 && rel_tol <= 1e-2) || !(abs_tol > 0.0 && abs_tol <= 1e-2)) {
        throw InvalidInput("integrate: tolerances must lie in (0, 1e-2]");
    }
    std::vector<double> outs(output_times.begin(), output_times.end());
    if (outs.empty()) outs = {0.0, t_end};
    for (std::size_t i = 0; i < outs.size(); ++i) {
        if (!(outs[i] >= 0.0 && outs[i] <= t_end) || (i > 0 && !(outs[i] > outs[i - 1]))) {
            throw InvalidInput("integrate: output times must be increasing within [0, t_end]");
        }
    }

    const std::size_t n = train.size();
    std::vector<double> y = pack(train);
    Trajectory traj;
    traj.times.reserve(outs.size());
    traj.states.reserve(outs.size());

    Dopri5 rk(n, rel_tol, abs_tol);
    double h = options.initial_step > 0.0 ? options.initial_step : rk.initial_step(y);
    if (options.max_step > 0.0) h = std::min(h, options.max_step);
    double err_old = 1e-4;
    double t = 0.0;

    constexpr double beta = 0.04;
    constexpr double alpha = 0.2 - 0.75 * beta;
    constexpr double safety = 0.9;

    for (double target : outs) {
        while (t < target) {
            const double remaining = target - t;
            const bool clipped = h >= remaining;
            const double step = clipped ? remaining : h;
            if (step <= 1e-14 * std::max(1.0, std::abs(t))) {
                throw StepSizeUnderflow("step size underflow at t = " + std::to_string(t), t);
            }
            const double err = rk.attempt(y, step);
            const bool ordered = min_gap(rk.candidate(), n) > 0.0;
            if (err <= 1.0 && ordered) {
                rk.accept(y);
                t = clipped ? target : t + step;
                ++traj.stats.steps;
                traj.stats.max_error = std::max(traj.stats.max_error, err);
                const double gap = min_gap(y, n);
                if (gap < options.min_gap) {
                    throw CollisionDetected("collision: minimal spacing " + std::to_string(gap) + " at t = " +
                                                std::to_string(t),
                                            t);
                }
                double fac = safety * std::pow(std::max(err, 1e-10), -alpha) * std::pow(err_old, beta);
                fac = std::clamp(fac, 0.2, 10.0);
                err_old = std::max(err, 1e-4);
                // A clipped step says nothing about the natural step size.
                h = clipped ? std::max(h, step * fac) : step * fac;
                if (options.max_step > 0.0) h = std::min(h, options.max_step);
            } else {
                ++traj.stats.rejected;
                const double fac = ordered ? std::max(0.2, safety * std::pow(err, -alpha)) : 0.25;
                h = step * std::min(fac, 0.9);
            }
            if (traj.stats.steps + traj.stats.rejected > options.max_steps) {
                throw StepSizeUnderflow("step budget exhausted at t = " + std::to_string(t), t);
            }
        }
        for (double v : y) {
            if (!std::isfinite(v)) throw CollisionDetected("state blew up at t = " + std::to_string(t), t);
        }
        traj.times.push_back(target);
        traj.states.push_back(unpack(y, n));
    }
    return traj;
}

PeakonTrain flow(const PeakonTrain& train, double dt, double rel_tol, double abs_tol) {
    if (dt == 0.0) return train;
    if (dt > 0.0) {
        const double out = dt;
        return integrate(train, dt, rel_tol, abs_tol, std::span<const double>(&out, 1)).states.back();
    }
    auto negate = [](const PeakonTrain& t) {
        std::vector<double> p(t.p().begin(), t.p().end());
        for (double& v : p) v = -v;
        return PeakonTrain(std::move(p), std::vector<double>(t.q().begin(), t.q().end()));
    };
    const double out = -dt;
    return negate(integrate(negate(train), -dt, rel_tol, abs_tol, std::span<const double>(&out, 1)).states.back());
}

PeakonTrain integrate_rk4(const PeakonTrain& train, double t_end, double step) {
    const std::size_t n = train.size();
    const System f{n};
    std::vector<double> y = pack(train);
    const std::size_t m = y.size();
    std::vector<double> k1(m), k2(m), k3(m), k4(m), tmp(m);
    const auto count = static_cast<std::size_t>(std::ceil(t_end / step - 1e-9));
    const double h = t_end / static_cast<double>(count);
    for (std::size_t s = 0; s < count; ++s) {
        f(y, k1);
        for (std::size_t i = 0; i < m; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
        f(tmp, k2);
        for (std::size_t i = 0; i < m; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
        f(tmp, k3);
        for (std::size_t i = 0; i < m; ++i) tmp[i] = y[i] + h * k3[i];
        f(tmp, k4);
        for (std::size_t i = 0; i < m; ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return unpack(y, n);
}

double hamiltonian(const PeakonTrain& train) { return h1_inner_closed_form(train, train); }

SpectralData asymptotic_matrix(const PeakonTrain& train) {
    const std::size_t n = train.size();
    SpectralData s{Matrix(n), std::vector<double>(train.p().begin(), train.p().end()),
                   std::vector<double>(train.q().begin(), train.q().end())};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) s.matrix(i, j) = s.p[j] * std::exp(-0.5 * std::abs(s.q[i] - s.q[j]));
    return s;
}

std::vector<double> eigenvalues_real(const SpectralData& spec) {
    const std::size_t n = spec.p.size();
    Matrix e(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) e(i, j) = std::exp(-0.5 * std::abs(spec.q[i] - spec.q[j]));
    const EigenDecomposition ed = jacobi_eigen(e);
    if (!ed.converged) throw NoConvergence("Jacobi did not converge on the kernel matrix");
    if (ed.values.front() <= 1e-12) {
        throw NotPositiveDefinite("kernel matrix eigenvalue " + std::to_string(ed.values.front()) +
                                  " <= 1e-12 (positions numerically coincident)");
    }
    // root = V diag(sqrt(mu)) V^T
    Matrix root(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t c = 0; c < n; ++c) s += ed.vectors(i, c) * std::sqrt(ed.values[c]) * ed.vectors(j, c);
            root(i, j) = s;
        }
    Matrix b(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t c = 0; c < n; ++c) s += root(i, c) * spec.p[c] * root(c, j);
            b(i, j) = s;
        }
    const EigenDecomposition eb = jacobi_eigen(b);
    if (!eb.converged) throw NoConvergence("Jacobi did not converge on the symmetrized spectral matrix");
    return eb.values;
}

std::vector<SpeedSample> speed_estimates(const Trajectory& traj, double window) {
    const std::size_t m = traj.size();
    std::vector<SpeedSample> out(m);
    for (std::size_t s = 0; s < m; ++s) {
        out[s].t = traj.times[s];
        out[s].direct = ode_rhs(traj.states[s]).qdot;
        if (m < 2) {
            out[s].differenced = out[s].direct;
            continue;
        }
        std::size_t lo = s;
        std::size_t hi = s;
        // widen symmetrically until the stencil spans `window`
        do {
            if (lo > 0) --lo;
            if (hi + 1 < m) ++hi;
        } while (traj.times[hi] - traj.times[lo] < window && (lo > 0 || hi + 1 < m));
        if (s > 0 && s + 1 < m) {
            const std::size_t a = std::min(s - lo, hi - s);
            lo = s - a;
            hi = s + a;
        }
        const double dt = traj.times[hi] - traj.times[lo];
        const std::size_t n = traj.states[s].size();
        out[s].differenced.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            out[s].differenced[i] = (traj.states[hi].q(i) - traj.states[lo].q(i)) / dt;
        }
    }
    return out;
}

}  // namespace peakonlab
