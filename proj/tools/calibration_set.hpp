#pragma once

#include <vector>

#include "peakonlab/dynamics.hpp"
#include "peakonlab/scenario.hpp"

// The frozen scenarios on which the empirical constants are fitted.
namespace peakonlab::calibration_set {

inline Scenario monotonicity() {
    Scenario s;
    s.velocities = {-1.0, 1.0, 2.0};
    s.L = 64.0;
    s.K = 1.0;
    s.epsilon = 1e-2;
    s.t_end = 60.0;
    return s;
}

inline Scenario sweep_base() {
    Scenario s;
    s.velocities = {-1.0, 1.0, 2.0};
    s.t_end = 40.0;
    return s;
}

inline const std::vector<double> sweep_epsilons{1e-4, 1e-3, 1e-2, 5e-2};
inline const std::vector<double> sweep_Ls{20.0, 40.0, 60.0, 80.0};

// Sign-ordered train with moderate separation, integrated to T = 300.
inline PeakonTrain corollary_train() { return PeakonTrain({-1.0, 1.2, 2.5}, {-4.0, 0.0, 4.0}); }
inline constexpr double corollary_t_end = 300.0;
inline constexpr std::size_t corollary_samples = 301;

}  // namespace peakonlab::calibration_set
