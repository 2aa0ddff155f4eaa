#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "peakonlab/train.hpp"

namespace peakonlab {

struct ModulationOptions {
    double tol = 0.0;          // absolute; 0 selects rel_tol * ||u||_{H^1}
    double rel_tol = 1e-10;
    int max_iterations = 50;
    int max_halvings = 30;
    double window = 40.0;      // G_i is integrated over |x - x_i| <= window
    double fd_step = 1e-7;     // forward-difference step of the Jacobian
};

struct NewtonStats {
    int iterations = 0;
    int halvings = 0;
    double residual = 0.0;  // final max |G_i|
};

struct ModulationResult {
    std::vector<double> x;
    NewtonStats stats;
};

// G_i(X) = int (u - sum_j phi_{c_j}(. - x_j)) d/dx phi_{c_i}(. - x_i), by quadrature.
std::vector<double> orthogonality_residual(const GridField& f, std::span<const double> c, std::span<const double> x,
                                           double window = 40.0);

// Damped Newton for G(X) = 0 from an increasing guess.
// NoConvergence when the iteration stalls or runs out; OrderingLost when every
// damped step leaves the increasing cone.
ModulationResult modulate(const GridField& f, std::span<const double> c, std::span<const double> guess,
                          const ModulationOptions& options = {});

// argmax of |u| over [xtilde_i - L/4, xtilde_i + L/4]: kink limits are exact
// crests; a node maximum is refined by a parabola unless a kink lies within h.
// EmptyWindow if a window leaves the grid.
std::vector<double> track_bumps(const GridField& f, std::span<const double> xtilde, double L);

struct ModulationPath {
    std::vector<double> times;
    std::vector<std::vector<double>> xtilde;
    std::vector<std::vector<double>> xmax;
    std::vector<NewtonStats> newton;
};

// d/dt xtilde_i - c_i, centered in the interior and one-sided at the ends.
std::vector<std::vector<double>> drift_speeds(const ModulationPath& path, std::span<const double> c);

// || u - sum_j phi_{c_j}(. - x_j) ||_{H^1}: closed form for a train, quadrature for a field.
double h1_distance_to_train(const PeakonTrain& u, std::span<const double> c, std::span<const double> x);
double h1_distance_to_train(const GridField& u, std::span<const double> c, std::span<const double> x);

}  // namespace peakonlab
