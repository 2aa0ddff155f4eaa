#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "peakonlab/harness.hpp"

namespace peakonlab::cli {

inline constexpr const char* version = "0.1.0";

nlohmann::json scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const nlohmann::json& j);

nlohmann::json meta_to_json(const ReportMeta& m);
ReportMeta meta_from_json(const nlohmann::json& j);

nlohmann::json flags_to_json(const std::vector<Flag>& flags);
nlohmann::json constants_to_json(const Constants& c);
Constants constants_from_json(const nlohmann::json& j);

// Config echo, versions, seed and everything needed to read the CSV back.
nlohmann::json make_manifest(const Report& r, const std::string& csv_name, const Constants& constants,
                             const std::vector<Flag>& flags);

void write_json(const nlohmann::json& j, const std::string& path);
nlohmann::json read_json(const std::string& path);

}  // namespace peakonlab::cli
