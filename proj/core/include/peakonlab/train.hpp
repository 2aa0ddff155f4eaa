#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace peakonlab {

// Sum of peakons  u(x) = sum_j p_j exp(-|x - q_j|)  with strictly increasing
// positions and nonzero amplitudes. Immutable once built.
class PeakonTrain {
public:
    // Throws InvalidTrain if the sizes differ, N == 0, any value is not finite,
    // an amplitude is zero, or the positions are not strictly increasing.
    PeakonTrain(std::vector<double> p, std::vector<double> q);

    std::size_t size() const noexcept { return p_.size(); }
    std::span<const double> p() const noexcept { return p_; }
    std::span<const double> q() const noexcept { return q_; }
    double p(std::size_t i) const { return p_[i]; }
    double q(std::size_t i) const { return q_[i]; }

    // True iff there is an index k with p_i < 0 for i < k and p_i > 0 for i >= k.
    bool sign_ordered() const noexcept;
    // Number of leading negative amplitudes (meaningful when sign_ordered()).
    std::size_t negative_count() const noexcept;
    // A point separating the negative part from the positive part: midpoint of
    // the last antipeakon and the first peakon, -inf/+inf when one side is empty.
    double sign_separator() const noexcept;

    PeakonTrain translated(double shift) const;
    // (p_i, q_i) -> (-p_{N+1-i}, -q_{N+1-i}), i.e. u(x) -> -u(-x).
    PeakonTrain reflected() const;

private:
    std::vector<double> p_;
    std::vector<double> q_;
};

// Side from which a one-sided quantity is taken at a kink.
enum class Side { center, left, right };

double evaluate_train(const PeakonTrain& train, double x);
// Weak derivative with the crest convention sgn(0) = 0.
double evaluate_train_derivative(const PeakonTrain& train, double x);
// One-sided derivative; Side::center gives the crest convention above.
double evaluate_train_derivative(const PeakonTrain& train, double x, Side side);

// Uniform grid x_m = x0 + m h, m = 0..n-1.
struct Grid {
    double x0 = 0.0;
    double h = 1.0;
    std::size_t n = 2;

    double node(std::size_t m) const noexcept { return x0 + static_cast<double>(m) * h; }
    double x_end() const noexcept { return node(n - 1); }

    void validate() const;  // throws InvalidInput

    // Smallest grid on the lattice h*Z that covers [lo, hi].
    static Grid covering(double lo, double hi, double h);
};

// One-sided data at a point where the field (or its derivative) jumps.
struct Kink {
    double x = 0.0;
    double u_left = 0.0;
    double u_right = 0.0;
    double ux_left = 0.0;
    double ux_right = 0.0;
};

// Samples of u and its weak derivative on a grid. `kinks` lists, in increasing
// order, the interior points where u or u_x is not smooth, with their one-sided
// limits; quadrature splits cells there so piecewise-smooth integrands keep
// second-order accuracy.
struct GridField {
    Grid grid;
    std::vector<double> u;
    std::vector<double> ux;
    std::vector<Kink> kinks;

    void validate() const;  // throws InvalidInput
};

GridField sample_on_grid(const PeakonTrain& train, const Grid& grid);
// Grid of spacing h on [min q - pad, max q + pad], aligned to the lattice h*Z.
Grid grid_for(const PeakonTrain& train, double h, double pad = 25.0);

// <a, b>_{H^1} = sum_{i,j} 2 p^a_i p^b_j exp(-|q^a_i - q^b_j|).
double h1_inner_closed_form(const PeakonTrain& a, const PeakonTrain& b);

// ||sum_i w_i exp(-|x - x_i|)||_{H^1}^2 for arbitrary signed weights and
// positions (any order, coincident points allowed). Sums nonnegative
// per-interval energies, so small norms of differences between nearby trains
// do not suffer the cancellation of the Gram double sum.
double h1_norm_squared(std::span<const double> weights, std::span<const double> positions);

// ||a - b||_{H^1}, computed with h1_norm_squared.
double h1_distance(const PeakonTrain& a, const PeakonTrain& b);

}  // namespace peakonlab
