#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "peakonlab/errors.hpp"

namespace peakonlab::cli {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

struct Line {
    std::string origin;
    std::size_t number;
    std::string key;

    [[noreturn]] void fail(const std::string& what) const {
        throw InvalidScenario(origin + ":" + std::to_string(number) + ": " + key + ": " + what);
    }

    double number_of(std::string_view v) const {
        v = trim(v);
        double x = 0.0;
        const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
        if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size()) fail("expected a number, got '" + std::string(v) + "'");
        return x;
    }

    std::uint64_t integer_of(std::string_view v) const {
        v = trim(v);
        std::uint64_t x = 0;
        const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
        if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size()) {
            fail("expected a non-negative integer, got '" + std::string(v) + "'");
        }
        return x;
    }

    bool bool_of(std::string_view v) const {
        v = trim(v);
        if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
        if (v == "false" || v == "0" || v == "no" || v == "off") return false;
        fail("expected a boolean, got '" + std::string(v) + "'");
    }

    std::vector<double> list_of(std::string_view v) const {
        v = trim(v);
        if (!v.empty() && v.front() == '[') {
            if (v.back() != ']') fail("unterminated list");
            v = trim(v.substr(1, v.size() - 2));
        }
        std::vector<double> out;
        if (v.empty()) return out;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = v.find(',', start);
            out.push_back(number_of(v.substr(start, comma == std::string_view::npos ? v.npos : comma - start)));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        return out;
    }
};

const std::vector<std::string> keys{
    "velocities", "k",         "L",       "epsilon",      "t_end",      "seed",       "perturbation",
    "lambdas",    "grid_h",    "grid_pad", "samples",     "rel_tol",    "abs_tol",    "K",
    "enforce_kernel_bound",    "max_attempts",            "train_p",    "train_q",    "out",
    "sweep_epsilons",          "sweep_L", "jobs",         "plots",      "A"};

}  // namespace

std::vector<std::string> config_keys() { return keys; }

Config parse_config(std::string_view text, std::string_view origin) {
    Config cfg;
    Scenario& s = cfg.scenario;
    std::vector<double> train_p, train_q;
    bool have_p = false, have_q = false;
    std::vector<std::string> seen;

    std::size_t number = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t end = std::min(text.find('\n', start), text.size());
        std::string_view raw = text.substr(start, end - start);
        start = end + 1;
        ++number;
        if (const std::size_t hash = raw.find('#'); hash != raw.npos) raw = raw.substr(0, hash);
        raw = trim(raw);
        if (raw.empty()) continue;
        const std::size_t eq = raw.find('=');
        Line line{std::string(origin), number, std::string(trim(raw.substr(0, eq)))};
        if (eq == raw.npos) line.fail("expected 'key = value'");
        const std::string_view v = trim(raw.substr(eq + 1));
        const std::string& key = line.key;
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) line.fail("unknown key");
        if (std::find(seen.begin(), seen.end(), key) != seen.end()) line.fail("duplicate key");
        seen.push_back(key);

        if (key == "velocities") s.velocities = line.list_of(v);
        else if (key == "k") s.k = line.integer_of(v);
        else if (key == "L") s.L = line.number_of(v);
        else if (key == "epsilon") s.epsilon = line.number_of(v);
        else if (key == "t_end") s.t_end = line.number_of(v);
        else if (key == "seed") s.seed = line.integer_of(v);
        else if (key == "perturbation") {
            try {
                s.perturbation = parse_perturbation_mode(v);
            } catch (const InvalidScenario& e) {
                line.fail(e.what());
            }
        }
        else if (key == "lambdas") s.lambdas = line.list_of(v);
        else if (key == "grid_h") s.grid_h = line.number_of(v);
        else if (key == "grid_pad") s.grid_pad = line.number_of(v);
        else if (key == "samples") s.samples = line.integer_of(v);
        else if (key == "rel_tol") s.rel_tol = line.number_of(v);
        else if (key == "abs_tol") s.abs_tol = line.number_of(v);
        else if (key == "K") s.K = line.number_of(v);
        else if (key == "enforce_kernel_bound") s.enforce_kernel_bound = line.bool_of(v);
        else if (key == "max_attempts") s.max_attempts = line.integer_of(v);
        else if (key == "train_p") train_p = line.list_of(v), have_p = true;
        else if (key == "train_q") train_q = line.list_of(v), have_q = true;
        else if (key == "out") cfg.out = std::string(v);
        else if (key == "sweep_epsilons") cfg.sweep_epsilons = line.list_of(v);
        else if (key == "sweep_L") cfg.sweep_L = line.list_of(v);
        else if (key == "jobs") cfg.jobs = static_cast<unsigned>(std::max<std::uint64_t>(1, line.integer_of(v)));
        else if (key == "plots") cfg.plots = line.bool_of(v);
        else if (key == "A") cfg.A = line.number_of(v);
    }
    if (have_p != have_q) throw InvalidScenario(std::string(origin) + ": train_p and train_q must be given together");
    if (have_p) {
        try {
            s.explicit_train = PeakonTrain(train_p, train_q);
        } catch (const InvalidTrain& e) {
            throw InvalidScenario(std::string(origin) + ": explicit train: " + e.what());
        }
    }
    if (cfg.sweep_epsilons.empty() || cfg.sweep_L.empty()) throw InvalidScenario(std::string(origin) + ": empty sweep axis");
    s.validate();
    return cfg;
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot read config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

}  // namespace peakonlab::cli
