#include "peakonlab/weight.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "peakonlab/errors.hpp"

namespace peakonlab {

namespace {

const double kInvE = std::exp(-1.0);

double odd(double v, double x) { return x < 0.0 ? -v : v; }

template <class F>
double bisect(F&& f, double lo, double hi) {
    double flo = f(lo);
    for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

struct Shape {
    double b, xs, r, s, m;
};

Shape shape_for(double b) {
    Shape sh{};
    sh.b = b;
    sh.xs = 1.0 - std::atan(1.0 / b) / b;
    sh.r = kInvE * std::sqrt(1.0 + 1.0 / (b * b));
    // 3 tanh(3s) + b tan(b (s - x*)) changes sign on (x* - pi/(2b), x*).
    const double lo = sh.xs - 0.5 * M_PI / b * (1.0 - 1e-12);
    const double hi = sh.xs;
    sh.s = bisect([&](double s) { return 3.0 * std::tanh(3.0 * s) + b * std::tan(b * (s - sh.xs)); }, lo, hi);
    sh.m = sh.r * std::cos(b * (sh.s - sh.xs)) / std::cosh(3.0 * sh.s);
    return sh;
}

// Integral of the slope over [0, 1] minus the required 1/2 - 1/e.
double area_defect(double b) {
    const Shape sh = shape_for(b);
    const double core = sh.m * std::sinh(3.0 * sh.s) / 3.0;
    const double shoulder = sh.r / b * (std::sin(b * (1.0 - sh.xs)) - std::sin(b * (sh.s - sh.xs)));
    return core + shoulder - (0.5 - kInvE);
}

}  // namespace

WeightProfile::WeightProfile(bool flip_bridge) : sign_(flip_bridge ? -1.0 : 1.0) {
    // The defect is positive for small b (wide shoulder) and negative for large b.
    const double b = bisect(area_defect, 3.0, 40.0);
    const Shape sh = shape_for(b);
    b_ = sh.b;
    xs_ = sh.xs;
    r_ = sh.r;
    s_ = sh.s;
    m_ = sh.m;
    half_core_ = m_ * std::sinh(3.0 * s_) / 3.0;
    if (!(s_ > 0.0 && s_ < 1.0 && m_ > 0.0) || std::abs(area_defect(b)) > 1e-13) {
        throw InvalidInput("weight profile: bridge construction failed");
    }
}

WeightProfile::Piece WeightProfile::piece(double x, Side side) const {
    auto left_of = [&](double bnd) { return x < bnd || (x == bnd && side == Side::left); };
    if (left_of(-1.0)) return Piece::left_tail;
    if (left_of(-s_)) return Piece::left_shoulder;
    if (left_of(s_)) return Piece::core;
    if (left_of(1.0)) return Piece::right_shoulder;
    return Piece::right_tail;
}

double WeightProfile::psi(double x) const {
    if (x < -1.0) return std::exp(x);
    if (x > 1.0) return -std::expm1(-x);
    const double a = std::abs(x);
    double v;
    if (a <= s_) v = m_ * std::sinh(3.0 * a) / 3.0;
    else v = half_core_ + r_ / b_ * (std::sin(b_ * (a - xs_)) - std::sin(b_ * (s_ - xs_)));
    return 0.5 + odd(sign_ * v, x);
}

double WeightProfile::psi_prime(double x, Side side) const {
    switch (piece(x, side)) {
        case Piece::left_tail: return std::exp(x);
        case Piece::right_tail: return std::exp(-x);
        case Piece::core: return sign_ * m_ * std::cosh(3.0 * x);
        default: return sign_ * r_ * std::cos(b_ * (std::abs(x) - xs_));
    }
}

double WeightProfile::psi_pp(double x, Side side) const {
    switch (piece(x, side)) {
        case Piece::left_tail: return std::exp(x);
        case Piece::right_tail: return -std::exp(-x);
        case Piece::core: return sign_ * 3.0 * m_ * std::sinh(3.0 * x);
        default: return -sign_ * odd(r_ * b_ * std::sin(b_ * (std::abs(x) - xs_)), x);
    }
}

double WeightProfile::psi_ppp(double x, Side side) const {
    switch (piece(x, side)) {
        case Piece::left_tail: return std::exp(x);
        case Piece::right_tail: return std::exp(-x);
        case Piece::core: return sign_ * 9.0 * m_ * std::cosh(3.0 * x);
        default: return -sign_ * r_ * b_ * b_ * std::cos(b_ * (std::abs(x) - xs_));
    }
}

std::vector<double> WeightProfile::breakpoints() const { return {-1.0, -s_, s_, 1.0}; }

ProfileCheck check_profile(const WeightProfile& w, std::size_t samples) {
    ProfileCheck c;
    c.psi_min = std::numeric_limits<double>::infinity();
    c.psi_max = -std::numeric_limits<double>::infinity();
    c.slope_min = std::numeric_limits<double>::infinity();
    const std::size_t n = std::max<std::size_t>(samples, 2);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = -5.0 + 10.0 * static_cast<double>(i) / static_cast<double>(n - 1);
        const double v = w.psi(x);
        c.psi_min = std::min(c.psi_min, v);
        c.psi_max = std::max(c.psi_max, v);
        c.slope_min = std::min(c.slope_min, w.psi_prime(x));
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double x = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(n - 1);
        // the endpoints belong to the bridge
        const Side side = i == 0 ? Side::right : (i + 1 == n ? Side::left : Side::center);
        const double d1 = w.psi_prime(x, side);
        const double d3 = w.psi_ppp(x, side);
        const double ratio = d1 == 0.0 ? std::numeric_limits<double>::infinity() : std::abs(d3) / std::abs(d1);
        c.ratio_max = std::max(c.ratio_max, ratio);
        c.one_sided_ratio_max = std::max(c.one_sided_ratio_max, d1 > 0.0 ? d3 / d1 : ratio);
    }
    for (double x : {-1.0, 1.0}) {
        const double bridge_v = w.psi(x);  // |x| = 1 evaluates the bridge formula
        const double tail_v = x < 0.0 ? std::exp(x) : -std::expm1(-x);
        const double d1 = std::abs(w.psi_prime(x, x < 0.0 ? Side::right : Side::left) -
                                   w.psi_prime(x, x < 0.0 ? Side::left : Side::right));
        const double d2 = std::abs(w.psi_pp(x, x < 0.0 ? Side::right : Side::left) -
                                   w.psi_pp(x, x < 0.0 ? Side::left : Side::right));
        c.junction_mismatch = std::max({c.junction_mismatch, std::abs(bridge_v - tail_v), d1, d2});
    }
    for (double x : {-w.s(), w.s()}) {
        const double d1 = std::abs(w.psi_prime(x, Side::left) - w.psi_prime(x, Side::right));
        const double d2 = std::abs(w.psi_pp(x, Side::left) - w.psi_pp(x, Side::right));
        c.junction_mismatch = std::max({c.junction_mismatch, d1, d2});
    }
    c.bounded = c.psi_min > 0.0 && c.psi_max <= 1.0;
    c.increasing = c.slope_min > 0.0;
    c.third_derivative = c.ratio_max <= 10.0;
    c.tails = c.junction_mismatch <= 1e-12;
    return c;
}

double ScaledWeight::scaled(double x) const {
    const double z = x / K;
    for (double b : profile->breakpoints()) {
        if (std::abs(z - b) <= 1e-12) return b;
    }
    return z;
}

std::vector<double> ScaledWeight::breakpoints(double center) const {
    std::vector<double> out;
    for (double b : profile->breakpoints()) out.push_back(center + K * b);
    return out;
}

std::size_t WeightFamily::index_of(double t) const {
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (std::abs(times[i] - t) <= 1e-12 * std::max(1.0, std::abs(t))) return i;
    }
    throw InvalidInput("weight family: no centres stored for t = " + std::to_string(t));
}

std::vector<double> right_centers(const WeightFamily& fam, double t, std::span<const double> xtilde) {
    const std::size_t n = fam.velocities.size();
    std::vector<double> y;
    if (fam.k >= n) return y;
    y.push_back(fam.xtilde0[fam.k] + 0.5 * fam.velocities[fam.k] * t - 0.25 * fam.L);
    for (std::size_t i = fam.k + 1; i < n; ++i) y.push_back(0.5 * (xtilde[i - 1] + xtilde[i]));
    return y;
}

double left_center(const WeightFamily& fam, double t) {
    if (fam.k == 0) return std::numeric_limits<double>::quiet_NaN();
    return fam.xtilde0[fam.k - 1] + 0.5 * fam.velocities[fam.k - 1] * t + 0.25 * fam.L;
}

WeightFamily build_weight_family(const WeightProfile& profile, double K, const Scenario& s,
                                 std::span<const double> times, std::span<const std::vector<double>> xtilde) {
    if (!(K > 0.0) || !std::isfinite(K)) throw BadScale("K must be positive");
    if (s.enforce_kernel_bound && K < 4.0) {
        throw BadScale("K = " + std::to_string(K) + " < 4 violates the kernel domination requirement");
    }
    if (times.size() != xtilde.size() || times.empty()) {
        throw InvalidInput("weight family: times and modulation positions differ in length");
    }
    WeightFamily fam{profile, K, s.negative_count(), s.L, s.velocities, xtilde[0], {}, {}, {}};
    for (std::size_t m = 0; m < times.size(); ++m) {
        if (xtilde[m].size() != s.size()) throw InvalidInput("weight family: wrong number of modulation positions");
        std::vector<double> y = right_centers(fam, times[m], xtilde[m]);
        const double yl = left_center(fam, times[m]);
        for (std::size_t i = 1; i < y.size(); ++i) {
            if (!(y[i] > y[i - 1])) {
                throw OrderingLost("weight centres not increasing at t = " + std::to_string(times[m]), times[m]);
            }
        }
        if (fam.k > 0 && !y.empty() && !(yl < y.front())) {
            throw OrderingLost("left weight centre overtakes y_{k+1} at t = " + std::to_string(times[m]), times[m]);
        }
        fam.times.push_back(times[m]);
        fam.right.push_back(std::move(y));
        fam.left.push_back(yl);
    }
    return fam;
}

}  // namespace peakonlab
