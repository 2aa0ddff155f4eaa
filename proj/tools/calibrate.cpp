// Fits the empirical constants on the frozen calibration set and prints them
// in the form of core/include/peakonlab/calibration.hpp.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <thread>

#include "calibration_set.hpp"
#include "peakonlab/calibration.hpp"
#include "peakonlab/harness.hpp"

using namespace peakonlab;

int main() {
    const double safety = calibration::safety;

    const Report mono = run_experiment(calibration_set::monotonicity());
    const MonotonicityResult m = verify_monotonicity(mono, 1.0);
    double c_mono = 0.0;
    for (const MonotonicityEntry& e : m.entries) c_mono = std::max(c_mono, e.worst_delta / e.bound);
    if (mono.meta.k > 0) c_mono = std::max(c_mono, m.left_worst_delta / m.left_bound);
    std::printf("monotonicity: worst delta / tail = %.6e (tail %.6e)\n", c_mono, m.tail);

    const unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    const SweepResult sw = sweep(calibration_set::sweep_base(), calibration_set::sweep_epsilons,
                                 calibration_set::sweep_Ls, 1.0, jobs);
    for (const SweepCell& c : sw.cells) {
        std::printf("  eps %-8g L %-4g sup_dist %.6e drift %.6e %s\n", c.epsilon, c.L, c.sup_dist, c.drift,
                    c.error.c_str());
    }
    std::printf("sweep: fitted A = %.6e, fitted C_drift = %.6e\n", sw.fitted_A, sw.fitted_C_drift);

    const PeakonTrain train = calibration_set::corollary_train();
    std::vector<double> times(calibration_set::corollary_samples);
    for (std::size_t i = 0; i < times.size(); ++i)
        times[i] = calibration_set::corollary_t_end * static_cast<double>(i) / static_cast<double>(times.size() - 1);
    const Trajectory traj = integrate(train, calibration_set::corollary_t_end, 1e-12, 1e-14, times);
    const CorollaryResult cr = verify_corollary(train, traj, 1.0);
    std::printf("corollary: distance %.6e, speed error %.6e\n", cr.distance, cr.speed_error);

    std::printf("\ninline constexpr double A = %.3e;\n", safety * sw.fitted_A);
    std::printf("inline constexpr double C_mono = %.3e;\n", safety * c_mono);
    std::printf("inline constexpr double C_drift = %.3e;\n", safety * sw.fitted_C_drift);
    std::printf("inline constexpr double gamma = %.3e;\n", std::max(safety * cr.distance, calibration::gamma_floor));
    return 0;
}
