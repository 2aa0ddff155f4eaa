#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "peakonlab/linalg.hpp"
#include "peakonlab/train.hpp"

namespace peakonlab {

struct Rhs {
    std::vector<double> qdot;
    std::vector<double> pdot;
};

// qdot_i = sum_j p_j e^{-|q_i-q_j|},  pdot_i = sum_j p_i p_j sgn(q_i-q_j) e^{-|q_i-q_j|}.
Rhs ode_rhs(const PeakonTrain& train);
// Same on raw arrays; q must be increasing. O(N) via running sums.
void ode_rhs(std::span<const double> p, std::span<const double> q, std::span<double> qdot, std::span<double> pdot);

struct IntegratorOptions {
    double min_gap = 1e-6;        // CollisionDetected below this spacing
    double initial_step = 0.0;    // 0 selects an automatic guess
    double max_step = 0.0;        // 0 means unbounded
    std::size_t max_steps = 50'000'000;
};

struct IntegratorStats {
    std::size_t steps = 0;
    std::size_t rejected = 0;
    double max_error = 0.0;  // largest accepted scaled error estimate
};

struct Trajectory {
    std::vector<double> times;
    std::vector<PeakonTrain> states;
    IntegratorStats stats;

    std::size_t size() const noexcept { return times.size(); }
};

// Dormand-Prince 5(4) with PI step control. Steps are clipped so that every
// output time is hit exactly. Output times must be increasing and lie in
// [0, t_end]; an empty list selects {0, t_end}.
Trajectory integrate(const PeakonTrain& train, double t_end, double rel_tol, double abs_tol,
                     std::span<const double> output_times, const IntegratorOptions& options = {});

// State after time dt, which may be negative: the flow is reversible under
// (p, q, t) -> (-p, q, -t).
PeakonTrain flow(const PeakonTrain& train, double dt, double rel_tol = 1e-12, double abs_tol = 1e-14);

// Fixed-step classical RK4, used as an independent reference.
PeakonTrain integrate_rk4(const PeakonTrain& train, double t_end, double step);

// E = 2 sum_{ij} p_i p_j e^{-|q_i-q_j|}.
double hamiltonian(const PeakonTrain& train);

// M_ij = p_j e^{-|q_i-q_j|/2}; p and q are kept so M = E P can be split.
struct SpectralData {
    Matrix matrix;
    std::vector<double> p;
    std::vector<double> q;
};

SpectralData asymptotic_matrix(const PeakonTrain& train);
// Ascending eigenvalues of E^{1/2} P E^{1/2}, which is similar to M.
std::vector<double> eigenvalues_real(const SpectralData& spec);

struct SpeedSample {
    double t = 0.0;
    std::vector<double> direct;       // qdot from the ODE at the stored state
    std::vector<double> differenced;  // centered difference of q; one-sided at the ends
};

// `window` is the minimum time span of the difference stencil; 0 uses neighbours.
std::vector<SpeedSample> speed_estimates(const Trajectory& traj, double window = 0.0);

}  // namespace peakonlab
