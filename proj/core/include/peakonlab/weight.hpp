#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "peakonlab/scenario.hpp"
#include "peakonlab/train.hpp"

namespace peakonlab {

// Smooth increasing cutoff with Psi(x) = e^x for x < -1, 1 - e^{-x} for x > 1
// and Psi(-x) = 1 - Psi(x). On [-1, 1] the slope is
//   Psi'(x) = m cosh(3x)                 for |x| <= s
//   Psi'(x) = R cos(b (|x| - x_star))    for s <= |x| <= 1
// glued C^1 at +-s and matched C^1 to e^{-|x|} at +-1, so Psi is C^2.
// b is fixed by Psi(1) - Psi(0) = 1/2 - 1/e.
class WeightProfile {
public:
    // `flip_bridge` negates the bridge slope; a deliberately broken profile
    // used to exercise the checks.
    explicit WeightProfile(bool flip_bridge = false);

    double psi(double x) const;
    double psi_prime(double x, Side side = Side::center) const;
    double psi_pp(double x, Side side = Side::center) const;
    double psi_ppp(double x, Side side = Side::center) const;

    // Points where Psi''' jumps: -1, -s, s, 1.
    std::vector<double> breakpoints() const;

    double b() const noexcept { return b_; }
    double s() const noexcept { return s_; }
    double m() const noexcept { return m_; }
    double x_star() const noexcept { return xs_; }
    double r() const noexcept { return r_; }
    bool flipped() const noexcept { return sign_ < 0.0; }

private:
    enum class Piece { left_tail, left_shoulder, core, right_shoulder, right_tail };
    Piece piece(double x, Side side) const;

    double b_ = 0.0;
    double s_ = 0.0;
    double m_ = 0.0;
    double xs_ = 0.0;
    double r_ = 0.0;
    double half_core_ = 0.0;  // Psi(s) - 1/2 for the unflipped profile
    double sign_ = 1.0;
};

struct ProfileCheck {
    double psi_min = 0.0;
    double psi_max = 0.0;
    double slope_min = 0.0;                 // min Psi' on [-5, 5]
    double ratio_max = 0.0;                 // max |Psi'''| / |Psi'| on [-1, 1]
    double one_sided_ratio_max = 0.0;       // max Psi''' / Psi' on [-1, 1]
    double junction_mismatch = 0.0;         // max C^2 defect at +-s and +-1
    bool bounded = false;                   // 0 < Psi <= 1
    bool increasing = false;                // Psi' > 0
    bool third_derivative = false;          // |Psi'''| <= 10 |Psi'|
    bool tails = false;                     // exact tails and C^2 junctions
    bool all() const noexcept { return bounded && increasing && third_derivative && tails; }
};

// Samples `samples` points of [-5, 5] (and as many of [-1, 1]).
ProfileCheck check_profile(const WeightProfile& profile, std::size_t samples = 10000);

// Psi_K(x) = Psi(x / K) and derivatives.
struct ScaledWeight {
    const WeightProfile* profile;
    double K;
    double operator()(double x) const { return profile->psi(x / K); }
    double prime(double x, Side side = Side::center) const { return profile->psi_prime(scaled(x), side) / K; }
    double ppp(double x, Side side = Side::center) const { return profile->psi_ppp(scaled(x), side) / (K * K * K); }
    // x / K, snapped onto a breakpoint of the profile when rounding put it a few ulps off
    double scaled(double x) const;
    std::vector<double> breakpoints(double center) const;  // center + K * {-1, -s, s, 1}
};

// Centres of the localized weights at each stored time. For the ordered train
// with k antipeakons (0-based positive indices k..N-1):
//   right[0]     = y_{k+1}(t) = xtilde_{k+1}(0) + c_{k+1} t / 2 - L / 4
//   right[i - k] = y_i(t)     = (xtilde_{i-1}(t) + xtilde_i(t)) / 2
//   left         = y_k(t)     = xtilde_k(0) + c_k t / 2 + L / 4   (NaN if k = 0)
struct WeightFamily {
    WeightProfile profile;
    double K = 1.0;
    std::size_t k = 0;
    double L = 0.0;
    std::vector<double> velocities;
    std::vector<double> xtilde0;
    std::vector<double> times;
    std::vector<std::vector<double>> right;
    std::vector<double> left;

    ScaledWeight weight() const { return {&profile, K}; }
    std::size_t index_of(double t) const;  // exact stored time, else InvalidInput
    std::size_t tracks() const noexcept { return velocities.size() - k; }
};

// Centres for one time given the modulation positions at that time.
std::vector<double> right_centers(const WeightFamily& fam, double t, std::span<const double> xtilde);
double left_center(const WeightFamily& fam, double t);

// BadScale if K <= 0, or K < 4 while s.enforce_kernel_bound is set.
// OrderingLost if consecutive centres fail to increase.
WeightFamily build_weight_family(const WeightProfile& profile, double K, const Scenario& s,
                                 std::span<const double> times, std::span<const std::vector<double>> xtilde);

}  // namespace peakonlab
