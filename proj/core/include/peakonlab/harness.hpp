#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "peakonlab/dynamics.hpp"
#include "peakonlab/functionals.hpp"
#include "peakonlab/modulation.hpp"
#include "peakonlab/scenario.hpp"

namespace peakonlab {

// Everything about a run that is not a time series.
struct ReportMeta {
    Scenario scenario;
    std::vector<double> z0;
    double initial_distance = 0.0;
    double K = 0.0;
    double sigma0 = 0.0;
    std::vector<double> lambdas;
    std::size_t k = 0;
    std::size_t peakons = 0;  // size of the integrated train; exceeds N when small peakons were added
    bool analysed = true;     // false for explicit trains outside the ordered regime: dynamics only
};

struct Report {
    ReportMeta meta;
    std::vector<double> times;
    std::vector<PeakonTrain> states;
    IntegratorStats integrator;
    std::vector<FunctionalSample> samples;
    ModulationPath path;
    std::vector<double> dist;  // ||u(t) - sum phi_{c_j}(. - x_j(t))||_{H^1}, x_j the tracked crests

    std::size_t size() const noexcept { return times.size(); }
};

struct Constants {
    double A;
    double C_mono;
    double C_drift;
    double gamma;
    static Constants frozen();
};

// {0} u {1/c_i : i > k} u {2/c_{k+1}}, plus midpoints of consecutive values.
std::vector<double> default_lambdas(std::span<const double> c, std::size_t k);

struct RunOptions {
    bool with_functionals = true;  // weights and localized functionals
    bool with_modulation = true;   // also required by the functionals
};

// Builds the perturbed train, integrates, and evaluates every series at the
// output times. Runtime failures are rethrown with the failing time attached.
// An explicit train whose velocities do not pass validate_for_analysis() is
// only integrated.
Report run_experiment(const Scenario& s, const RunOptions& options = {});

struct MonotonicityEntry {
    std::size_t slot = 0;   // 0 is j = k+1
    std::size_t lambda_index = 0;
    double lambda = 0.0;
    double worst_delta = 0.0;  // max_t I(t) - I(0)
    double bound = 0.0;
    bool passed = false;
};

struct MonotonicityResult {
    std::vector<MonotonicityEntry> entries;
    double left_worst_delta = 0.0;  // Itilde_k, NaN when k = 0
    double left_bound = 0.0;
    bool left_passed = true;
    double tail = 0.0;  // exp(-sigma0 L / (8K))
    bool passed() const;
};

MonotonicityResult verify_monotonicity(const Report& r, double C_mono);

struct BoundCheck {
    bool passed = false;
    double value = 0.0;
    double bound = 0.0;
    double margin = 0.0;  // bound - value
};

// sup_t dist <= A (sqrt(eps) + L^{-1/8})
BoundCheck verify_theorem2(const Report& r, double A);
// max_{t,i} |d/dt xtilde_i - c_i| <= C (eps^{1/4} + L^{-1/16})
BoundCheck verify_drift(const Report& r, double C);
double theorem_scale(double epsilon, double L);  // sqrt(eps) + L^{-1/8}
double drift_scale(double epsilon, double L);    // eps^{1/4} + L^{-1/16}

struct CorollaryResult {
    std::vector<double> eigenvalues;
    std::vector<double> terminal_speeds;  // sorted qdot at the last state
    double speed_error = 0.0;             // max |sorted qdot - eigenvalue|
    std::vector<double> fitted_positions;
    double distance = 0.0;  // inf_Q ||u(T) - sum lambda_j e^{-|. - Q_j|}||
    double drift_rate = 0.0;
    bool passed = false;
};

// NotSettled when the speed estimates still move by more than
// `settle_rate` per unit time between the last two samples.
CorollaryResult verify_corollary(const Report& r, double gamma, double speed_tol = 1e-3, double settle_rate = 1e-4);
CorollaryResult verify_corollary(const PeakonTrain& initial, const Trajectory& traj, double gamma,
                                 double speed_tol = 1e-3, double settle_rate = 1e-4);

struct Flag {
    std::string name;
    bool passed = false;
    double value = 0.0;
    double bound = 0.0;
    std::string detail;
};

// Every flag is a function of the stored series and the meta data only.
std::vector<Flag> evaluate_flags(const Report& r, const Constants& constants, bool with_corollary = false);
std::vector<std::string> flag_names();

struct SweepCell {
    double epsilon = 0.0;
    double L = 0.0;
    double sup_dist = 0.0;
    double bound = 0.0;   // A (sqrt(eps) + L^{-1/8}) with the supplied A
    double margin = 0.0;
    bool passed = false;
    double drift = 0.0;   // max |d/dt xtilde - c|
    std::string error;    // non-empty when the cell failed to run
};

struct SweepResult {
    std::vector<SweepCell> cells;  // row-major over (epsilon, L)
    double fitted_A = 0.0;         // max sup_dist / (sqrt(eps) + L^{-1/8})
    double fitted_C_drift = 0.0;   // max drift / (eps^{1/4} + L^{-1/16})
};

// Runs every (epsilon, L) cell on `jobs` threads; results are merged by cell
// index, so the outcome does not depend on scheduling.
SweepResult sweep(const Scenario& base, std::span<const double> epsilons, std::span<const double> Ls, double A,
                  unsigned jobs = 1);

}  // namespace peakonlab
