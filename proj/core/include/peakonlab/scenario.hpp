#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "peakonlab/train.hpp"

namespace peakonlab {

enum class PerturbationMode { amplitude_jitter, position_jitter, extra_small_peakons, mixed };

std::string_view to_string(PerturbationMode mode);
PerturbationMode parse_perturbation_mode(std::string_view text);  // throws InvalidScenario

// Description of one experiment: an ordered antipeakon-peakon train with
// velocities c_1 < .. < c_k < 0 < c_{k+1} < .. < c_N, spacing L and an
// initial perturbation of H^1 size at most epsilon^2.
struct Scenario {
    std::vector<double> velocities;
    std::optional<std::size_t> k;  // declared number of negative velocities
    double L = 30.0;
    double epsilon = 0.0;
    double t_end = 10.0;
    std::uint64_t seed = 1;
    PerturbationMode perturbation = PerturbationMode::amplitude_jitter;
    std::vector<double> lambdas;  // empty selects the default lambda list

    double grid_h = 1e-2;
    double grid_pad = 25.0;
    std::size_t samples = 200;  // output cadence, uniform over [0, t_end]
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;

    std::optional<double> K;  // weight scale; default sqrt(L)/8
    bool enforce_kernel_bound = false;  // require K >= 4
    std::size_t max_attempts = 16;

    // Bypasses the perturbation builder; used to probe the ODE with trains
    // outside the ordered regime (e.g. colliding pairs).
    std::optional<PeakonTrain> explicit_train;

    // Structural checks. Velocity ordering is only enforced here when no
    // explicit train is given; see validate_for_analysis().
    void validate() const;
    // Everything the stability analysis relies on, including the velocity
    // ordering and the lambda range [0, 2/c_{k+1}].
    void validate_for_analysis() const;

    std::size_t negative_count() const noexcept;
    std::size_t size() const noexcept { return velocities.size(); }
    double weight_scale() const noexcept;  // K or sqrt(L)/8
    std::vector<double> output_times() const;
};

// Initial datum plus the bookkeeping needed downstream.
struct InitialData {
    PeakonTrain train;
    std::vector<double> z0;  // unperturbed positions, z_j - z_{j-1} = L
    double separator = 0.0;  // x0 with negative mass left of it, positive mass right of it
    double distance = 0.0;   // ||u0 - sum phi_{c_j}(. - z_j)||_{H^1}
    std::size_t attempts = 1;
};

// Unperturbed positions: spacing exactly L, centred on the origin.
std::vector<double> base_positions(std::size_t n, double L);

InitialData build_initial_data(const Scenario& s);
PeakonTrain build_perturbed_scenario(const Scenario& s);

}  // namespace peakonlab
