#include "peakonlab/train.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "peakonlab/errors.hpp"

namespace peakonlab {

PeakonTrain::PeakonTrain(std::vector<double> p, std::vector<double> q)
    : p_(std::move(p)), q_(std::move(q)) {
    if (p_.empty()) throw InvalidTrain("peakon train must contain at least one peakon");
    if (p_.size() != q_.size()) {
        throw InvalidTrain("amplitude and position lists differ in length (" +
                           std::to_string(p_.size()) + " vs " + std::to_string(q_.size()) + ")");
    }
    for (std::size_t i = 0; i < p_.size(); ++i) {
        if (!std::isfinite(p_[i]) || !std::isfinite(q_[i])) {
            throw InvalidTrain("non-finite amplitude or position at index " + std::to_string(i));
        }
        if (p_[i] == 0.0) throw InvalidTrain("zero amplitude at index " + std::to_string(i));
        if (i > 0 && !(q_[i - 1] < q_[i])) {
            throw InvalidTrain("positions not strictly increasing at index " + std::to_string(i));
        }
    }
}

bool PeakonTrain::sign_ordered() const noexcept {
    const std::size_t k = negative_count();
    return std::all_of(p_.begin() + static_cast<std::ptrdiff_t>(k), p_.end(),
                       [](double v) { return v > 0.0; });
}

std::size_t PeakonTrain::negative_count() const noexcept {
    std::size_t k = 0;
    while (k < p_.size() && p_[k] < 0.0) ++k;
    return k;
}

double PeakonTrain::sign_separator() const noexcept {
    const std::size_t k = negative_count();
    if (k == 0) return -std::numeric_limits<double>::infinity();
    if (k == p_.size()) return std::numeric_limits<double>::infinity();
    return 0.5 * (q_[k - 1] + q_[k]);
}

PeakonTrain PeakonTrain::translated(double shift) const {
    std::vector<double> q = q_;
    for (double& v : q) v += shift;
    return PeakonTrain(p_, std::move(q));
}

PeakonTrain PeakonTrain::reflected() const {
    const std::size_t n = size();
    std::vector<double> p(n), q(n);
    for (std::size_t i = 0; i < n; ++i) {
        p[i] = -p_[n - 1 - i];
        q[i] = -q_[n - 1 - i];
    }
    return PeakonTrain(std::move(p), std::move(q));
}

double evaluate_train(const PeakonTrain& train, double x) {
    double u = 0.0;
    for (std::size_t j = 0; j < train.size(); ++j) u += train.p(j) * std::exp(-std::abs(x - train.q(j)));
    return u;
}

double evaluate_train_derivative(const PeakonTrain& train, double x) {
    return evaluate_train_derivative(train, x, Side::center);
}

double evaluate_train_derivative(const PeakonTrain& train, double x, Side side) {
    double ux = 0.0;
    for (std::size_t j = 0; j < train.size(); ++j) {
        const double d = train.q(j) - x;
        double s = 0.0;
        if (d > 0.0) {
            s = 1.0;
        } else if (d < 0.0) {
            s = -1.0;
        } else if (side == Side::left) {
            s = 1.0;
        } else if (side == Side::right) {
            s = -1.0;
        }
        ux += train.p(j) * s * std::exp(-std::abs(d));
    }
    return ux;
}

void Grid::validate() const {
    if (!(h > 0.0) || !std::isfinite(h)) throw InvalidInput("grid spacing must be finite and positive");
    if (n < 2) throw InvalidInput("grid needs at least two nodes");
    if (!std::isfinite(x0) || !std::isfinite(x_end())) throw InvalidInput("grid nodes must be finite");
}

Grid Grid::covering(double lo, double hi, double h) {
    if (!(h > 0.0) || !std::isfinite(lo) || !std::isfinite(hi) || hi < lo) {
        throw InvalidInput("cannot build a grid over the requested interval");
    }
    const double first = std::floor(lo / h);
    const double last = std::ceil(hi / h);
    Grid g;
    g.x0 = first * h;
    g.h = h;
    g.n = static_cast<std::size_t>(last - first) + 1;
    if (g.n < 2) g.n = 2;
    return g;
}

void GridField::validate() const {
    grid.validate();
    if (u.size() != grid.n || ux.size() != grid.n) throw InvalidInput("field length differs from grid size");
    for (std::size_t m = 0; m < grid.n; ++m) {
        if (!std::isfinite(u[m]) || !std::isfinite(ux[m])) throw InvalidInput("non-finite field sample");
    }
    for (std::size_t i = 1; i < kinks.size(); ++i) {
        if (!(kinks[i - 1].x <= kinks[i].x)) throw InvalidInput("kinks must be sorted");
    }
}

GridField sample_on_grid(const PeakonTrain& train, const Grid& grid) {
    grid.validate();
    GridField f;
    f.grid = grid;
    f.u.resize(grid.n);
    f.ux.resize(grid.n);
    for (std::size_t m = 0; m < grid.n; ++m) {
        const double x = grid.node(m);
        f.u[m] = evaluate_train(train, x);
        f.ux[m] = evaluate_train_derivative(train, x, Side::center);
    }
    for (std::size_t j = 0; j < train.size(); ++j) {
        const double s = train.q(j);
        if (s < grid.x0 || s > grid.x_end()) continue;
        const double us = evaluate_train(train, s);
        f.kinks.push_back({s, us, us, evaluate_train_derivative(train, s, Side::left),
                           evaluate_train_derivative(train, s, Side::right)});
    }
    return f;
}

Grid grid_for(const PeakonTrain& train, double h, double pad) {
    return Grid::covering(train.q().front() - pad, train.q().back() + pad, h);
}

double h1_inner_closed_form(const PeakonTrain& a, const PeakonTrain& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < b.size(); ++j) row += b.p(j) * std::exp(-std::abs(a.q(i) - b.q(j)));
        s += a.p(i) * row;
    }
    return 2.0 * s;
}

double h1_norm_squared(std::span<const double> weights, std::span<const double> positions) {
    if (weights.size() != positions.size()) throw InvalidInput("weights and positions differ in length");
    const std::size_t n = weights.size();
    if (n == 0) return 0.0;

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return positions[i] < positions[j]; });

    // Merge coincident points so each interval below has positive length.
    std::vector<double> x, w;
    x.reserve(n);
    w.reserve(n);
    for (std::size_t i : order) {
        if (!x.empty() && positions[i] == x.back()) {
            w.back() += weights[i];
        } else {
            x.push_back(positions[i]);
            w.push_back(weights[i]);
        }
    }
    const std::size_t m = x.size();

    // left[i]: value at x_i of the part generated by points <= x_i,
    // right[i]: value at x_i of the part generated by points >= x_i.
    std::vector<double> left(m), right(m);
    left[0] = w[0];
    for (std::size_t i = 1; i < m; ++i) left[i] = left[i - 1] * std::exp(-(x[i] - x[i - 1])) + w[i];
    right[m - 1] = w[m - 1];
    for (std::size_t i = m - 1; i-- > 0;) right[i] = right[i + 1] * std::exp(-(x[i + 1] - x[i])) + w[i];

    // On (x_i, x_{i+1}) the field is A e^{-(x-x_i)} + B e^{-(x_{i+1}-x)} and
    // u^2 + u_x^2 = 2A^2 e^{-2(x-x_i)} + 2B^2 e^{-2(x_{i+1}-x)}.
    double total = right[0] * right[0] + left[m - 1] * left[m - 1];
    for (std::size_t i = 0; i + 1 < m; ++i) {
        const double factor = -std::expm1(-2.0 * (x[i + 1] - x[i]));
        total += (left[i] * left[i] + right[i + 1] * right[i + 1]) * factor;
    }
    return total;
}

double h1_distance(const PeakonTrain& a, const PeakonTrain& b) {
    std::vector<double> w, x;
    w.reserve(a.size() + b.size());
    x.reserve(a.size() + b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        w.push_back(a.p(i));
        x.push_back(a.q(i));
    }
    for (std::size_t i = 0; i < b.size(); ++i) {
        w.push_back(-b.p(i));
        x.push_back(b.q(i));
    }
    return std::sqrt(std::max(0.0, h1_norm_squared(w, x)));
}

}  // namespace peakonlab
