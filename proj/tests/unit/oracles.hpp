#pragma once

// Independent reference formulas used only by the tests.

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

namespace oracle {

inline double sgn(double x) { return (x > 0.0) - (x < 0.0); }

// Direct double sums of the multipeakon vector field.
inline void rhs(const std::vector<double>& p, const std::vector<double>& q, std::vector<double>& qd,
                std::vector<double>& pd) {
    const std::size_t n = p.size();
    qd.assign(n, 0.0);
    pd.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double e = std::exp(-std::abs(q[i] - q[j]));
            qd[i] += p[j] * e;
            pd[i] += p[i] * p[j] * sgn(q[i] - q[j]) * e;
        }
    }
}

// Gram form of the H1 inner product of two trains.
inline double h1_inner(const std::vector<double>& pa, const std::vector<double>& qa, const std::vector<double>& pb,
                       const std::vector<double>& qb) {
    double s = 0.0;
    for (std::size_t i = 0; i < pa.size(); ++i)
        for (std::size_t j = 0; j < pb.size(); ++j) s += 2.0 * pa[i] * pb[j] * std::exp(-std::abs(qa[i] - qb[j]));
    return s;
}

// Two-peakon closed-form asymptotic speeds: eigenvalues of [[p1, p2 e], [p1 e, p2]] with e = e^{-|dq|/2}.
inline std::pair<double, double> two_by_two(double a, double b, double c, double d) {
    const double tr = a + d, det = a * d - b * c;
    const double disc = std::sqrt(tr * tr / 4.0 - det);
    return {tr / 2.0 - disc, tr / 2.0 + disc};
}

// (1 - d^2)^{-1} e^{-|x|} = (1 + |x|) e^{-|x|} / 2.
inline double helmholtz_of_peakon(double x) { return 0.5 * (1.0 + std::abs(x)) * std::exp(-std::abs(x)); }
inline double helmholtz_of_peakon_dx(double x) { return -0.5 * x * std::exp(-std::abs(x)); }

// Simpson on a fine uniform grid of a smooth-away-from-breaks integrand, split at given breaks.
template <class F>
double simpson(F f, double a, double b, std::vector<double> breaks, int per_piece = 4000) {
    breaks.push_back(a);
    breaks.push_back(b);
    std::sort(breaks.begin(), breaks.end());
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        const double lo = std::max(a, breaks[k]), hi = std::min(b, breaks[k + 1]);
        if (hi <= lo) continue;
        const double h = (hi - lo) / per_piece;
        double s = f(lo + 1e-15 * (hi - lo)) + f(hi - 1e-15 * (hi - lo));
        for (int i = 1; i < per_piece; ++i) s += (i % 2 ? 4.0 : 2.0) * f(lo + i * h);
        total += s * h / 3.0;
    }
    return total;
}

}  // namespace oracle
