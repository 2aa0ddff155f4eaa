#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace peakonlab::cli {

enum ExitCode : int { ok = 0, check_failed = 1, scenario_error = 2, runtime_error = 3 };

struct SimulateOptions {
    std::string config;
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    std::optional<double> t_end;
};

struct VerifyOptions {
    std::string report;
    std::optional<std::string> manifest;  // default: manifest.json next to the report
    std::vector<std::string> criteria;    // empty: every flag stored in the report
};

struct SweepOptions {
    std::string config;
    std::optional<std::string> out;
    std::optional<unsigned> jobs;
    std::optional<std::uint64_t> seed;
    std::optional<double> t_end;
};

struct PsiCheckOptions {
    bool flip_bridge = false;
    std::size_t samples = 10000;
};

// Output directory: flag, then config `out`, then $PEAKONLAB_OUT, then ./peakonlab-out.
std::string resolve_out_dir(const std::optional<std::string>& flag, const std::optional<std::string>& config);

int cmd_simulate(const SimulateOptions& o, std::ostream& out, std::ostream& err);
int cmd_verify(const VerifyOptions& o, std::ostream& out, std::ostream& err);
int cmd_sweep(const SweepOptions& o, std::ostream& out, std::ostream& err);
int cmd_psi_check(const PsiCheckOptions& o, std::ostream& out, std::ostream& err);

// Maps library errors onto exit codes 2 (input) and 3 (runtime) with a message on `err`.
int guarded(const std::function<int()>& body, std::ostream& err);

}  // namespace peakonlab::cli
