#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "peakonlab/scenario.hpp"

namespace peakonlab::cli {

// One `key = value` per line; `#` starts a comment; lists are comma
// separated, optionally in brackets. Unknown keys are rejected.
struct Config {
    Scenario scenario;
    std::optional<std::string> out;
    std::vector<double> sweep_epsilons{1e-4, 1e-3, 1e-2, 5e-2};
    std::vector<double> sweep_L{20.0, 40.0, 60.0, 80.0};
    unsigned jobs = 1;
    bool plots = true;
    std::optional<double> A;  // overrides the frozen constant in sweep and verify
};

// Throws InvalidScenario naming the line and key; re-validates the scenario.
Config parse_config(std::string_view text, std::string_view origin = "<config>");
Config load_config(const std::string& path);

std::vector<std::string> config_keys();

}  // namespace peakonlab::cli
