#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace peakonlab::cli;

    CLI::App app{"peakonlab: peakon-train stability experiments"};
    app.require_subcommand(1);

    SimulateOptions sim;
    auto* simulate = app.add_subcommand("simulate", "run one experiment and write report.csv + manifest.json");
    simulate->add_option("--config", sim.config, "config file")->required();
    simulate->add_option("--out", sim.out, "output directory (default $PEAKONLAB_OUT or ./peakonlab-out)");
    simulate->add_option("--seed", sim.seed, "override the perturbation seed");
    simulate->add_option("--t-end", sim.t_end, "override the final time");

    VerifyOptions ver;
    std::string criteria;
    auto* verify = app.add_subcommand("verify", "recompute the pass/fail flags of a stored report");
    verify->add_option("report", ver.report, "report CSV")->required();
    verify->add_option("--manifest", ver.manifest, "manifest (default: manifest.json next to the report)");
    verify->add_option("--criteria", criteria,
                       "comma list of energy,f-drift,theorem,monotonicity,drift,bookkeeping,corollary");

    SweepOptions swp;
    auto* sweep = app.add_subcommand("sweep", "run the (epsilon, L) sweep and fit A");
    sweep->add_option("--config", swp.config, "config file")->required();
    sweep->add_option("--out", swp.out, "output directory");
    sweep->add_option("--jobs", swp.jobs, "concurrent cells");
    sweep->add_option("--seed", swp.seed, "override the perturbation seed");
    sweep->add_option("--t-end", swp.t_end, "override the final time");

    PsiCheckOptions psi;
    auto* psi_check = app.add_subcommand("psi-check", "check the cutoff profile constraints");
    psi_check->add_option("--samples", psi.samples, "sample count");
    psi_check->add_flag("--flip-bridge", psi.flip_bridge, "negate the bridge slope (test hook)")->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : scenario_error;
    }

    if (*simulate) return cmd_simulate(sim, std::cout, std::cerr);
    if (*verify) {
        ver.criteria = split_list(criteria);
        return cmd_verify(ver, std::cout, std::cerr);
    }
    if (*sweep) return cmd_sweep(swp, std::cout, std::cerr);
    return cmd_psi_check(psi, std::cout, std::cerr);
}
