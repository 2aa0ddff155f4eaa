#pragma once

// Empirical constants of the stability estimates, fitted once by
// `peakonlab-calibrate` on the frozen calibration set and asserted thereafter.
namespace peakonlab::calibration {

// sup_t ||u(t) - sum phi_{c_j}(. - x_j(t))||_{H^1} <= A (sqrt(eps) + L^{-1/8})
inline constexpr double A = 3.897e-03;
// I_{j,lambda,K}(t) - I_{j,lambda,K}(0) <= C_mono exp(-sigma_0 L / (8K))
inline constexpr double C_mono = 4.661e-06;
// |d/dt xtilde_i - c_i| <= C_drift (eps^{1/4} + L^{-1/16})
inline constexpr double C_drift = 1.249e-03;
// distance of the terminal state to the best train with amplitudes lambda_j;
// the fit sits at rounding level, so the integrator floor below applies
inline constexpr double gamma = 1.000e-10;

// Safety factor applied on top of the fitted maxima.
inline constexpr double safety = 1.25;
inline constexpr double gamma_floor = 1e-10;

}  // namespace peakonlab::calibration
