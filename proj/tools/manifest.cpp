#include "manifest.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "peakonlab/errors.hpp"

namespace peakonlab::cli {

namespace {

using nlohmann::json;

// NaN is stored as null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
double number(const json& j) { return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>(); }

template <class T>
T field(const json& j, const char* key) {
    if (!j.contains(key)) throw InvalidInput(std::string("manifest: missing '") + key + "'");
    return j.at(key).get<T>();
}

}  // namespace

json scenario_to_json(const Scenario& s) {
    json j;
    j["velocities"] = s.velocities;
    j["k"] = s.k ? json(*s.k) : json(nullptr);
    j["L"] = s.L;
    j["epsilon"] = s.epsilon;
    j["t_end"] = s.t_end;
    j["seed"] = s.seed;
    j["perturbation"] = std::string(to_string(s.perturbation));
    j["lambdas"] = s.lambdas;
    j["grid_h"] = s.grid_h;
    j["grid_pad"] = s.grid_pad;
    j["samples"] = s.samples;
    j["rel_tol"] = s.rel_tol;
    j["abs_tol"] = s.abs_tol;
    j["K"] = s.K ? json(*s.K) : json(nullptr);
    j["enforce_kernel_bound"] = s.enforce_kernel_bound;
    j["max_attempts"] = s.max_attempts;
    if (s.explicit_train) {
        j["train_p"] = std::vector<double>(s.explicit_train->p().begin(), s.explicit_train->p().end());
        j["train_q"] = std::vector<double>(s.explicit_train->q().begin(), s.explicit_train->q().end());
    }
    return j;
}

Scenario scenario_from_json(const json& j) {
    Scenario s;
    s.velocities = field<std::vector<double>>(j, "velocities");
    if (j.contains("k") && !j.at("k").is_null()) s.k = j.at("k").get<std::size_t>();
    s.L = field<double>(j, "L");
    s.epsilon = field<double>(j, "epsilon");
    s.t_end = field<double>(j, "t_end");
    s.seed = field<std::uint64_t>(j, "seed");
    s.perturbation = parse_perturbation_mode(field<std::string>(j, "perturbation"));
    s.lambdas = field<std::vector<double>>(j, "lambdas");
    s.grid_h = field<double>(j, "grid_h");
    s.grid_pad = field<double>(j, "grid_pad");
    s.samples = field<std::size_t>(j, "samples");
    s.rel_tol = field<double>(j, "rel_tol");
    s.abs_tol = field<double>(j, "abs_tol");
    if (j.contains("K") && !j.at("K").is_null()) s.K = j.at("K").get<double>();
    s.enforce_kernel_bound = field<bool>(j, "enforce_kernel_bound");
    s.max_attempts = field<std::size_t>(j, "max_attempts");
    if (j.contains("train_p")) {
        s.explicit_train = PeakonTrain(field<std::vector<double>>(j, "train_p"), field<std::vector<double>>(j, "train_q"));
    }
    return s;
}

json meta_to_json(const ReportMeta& m) {
    json j;
    j["z0"] = m.z0;
    j["initial_distance"] = number(m.initial_distance);
    j["K"] = number(m.K);
    j["sigma0"] = number(m.sigma0);
    j["lambdas"] = m.lambdas;
    j["k"] = m.k;
    j["peakons"] = m.peakons;
    j["analysed"] = m.analysed;
    return j;
}

ReportMeta meta_from_json(const json& j) {
    ReportMeta m;
    m.z0 = field<std::vector<double>>(j, "z0");
    m.initial_distance = number(j.at("initial_distance"));
    m.K = number(j.at("K"));
    m.sigma0 = number(j.at("sigma0"));
    m.lambdas = field<std::vector<double>>(j, "lambdas");
    m.k = field<std::size_t>(j, "k");
    m.peakons = field<std::size_t>(j, "peakons");
    m.analysed = field<bool>(j, "analysed");
    return m;
}

json flags_to_json(const std::vector<Flag>& flags) {
    json out = json::array();
    for (const Flag& f : flags) {
        out.push_back({{"name", f.name}, {"passed", f.passed}, {"value", number(f.value)}, {"bound", number(f.bound)},
                       {"margin", number(f.bound - f.value)}, {"detail", f.detail}});
    }
    return out;
}

json constants_to_json(const Constants& c) {
    return {{"A", c.A}, {"C_mono", c.C_mono}, {"C_drift", c.C_drift}, {"gamma", c.gamma}};
}

Constants constants_from_json(const json& j) {
    return {field<double>(j, "A"), field<double>(j, "C_mono"), field<double>(j, "C_drift"), field<double>(j, "gamma")};
}

json make_manifest(const Report& r, const std::string& csv_name, const Constants& constants,
                   const std::vector<Flag>& flags) {
    json j;
    j["tool"] = "peakonlab";
    j["version"] = version;
#if defined(__clang__)
    j["compiler"] = std::string("clang ") + __clang_version__;
#elif defined(__GNUC__)
    j["compiler"] = std::string("gcc ") + __VERSION__;
#else
    j["compiler"] = "unknown";
#endif
    j["report"] = csv_name;
    j["seed"] = r.meta.scenario.seed;
    j["scenario"] = scenario_to_json(r.meta.scenario);
    j["meta"] = meta_to_json(r.meta);
    j["integrator"] = {{"steps", r.integrator.steps},
                       {"rejected", r.integrator.rejected},
                       {"max_error", r.integrator.max_error}};
    j["constants"] = constants_to_json(constants);
    j["flags"] = flags_to_json(flags);
    return j;
}

void write_json(const nlohmann::json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot write " + path);
    out << j.dump(2) << '\n';
}

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot read " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw InvalidInput(path + ": " + e.what());
    }
}

}  // namespace peakonlab::cli
