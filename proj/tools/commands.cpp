#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <ostream>

#include "config.hpp"
#include "manifest.hpp"
#include "peakonlab/errors.hpp"
#include "peakonlab/harness.hpp"
#include "peakonlab/report_csv.hpp"
#include "peakonlab/weight.hpp"
#include "svg_plot.hpp"

namespace peakonlab::cli {

namespace fs = std::filesystem;

namespace {

void print_flags(const std::vector<Flag>& flags, std::ostream& out) {
    for (const Flag& f : flags) {
        out << std::left << std::setw(13) << f.name << (f.passed ? "PASS" : "FAIL") << std::right << std::scientific
            << std::setprecision(4) << "  value " << f.value << "  bound " << f.bound << "  margin "
            << f.bound - f.value << std::defaultfloat;
        if (!f.detail.empty()) out << "  (" << f.detail << ")";
        out << '\n';
    }
}

Constants constants_for(const Config& cfg) {
    Constants c = Constants::frozen();
    if (cfg.A) c.A = *cfg.A;
    return c;
}

void write_plots(const Report& r, const fs::path& dir) {
    write_svg_line_chart((dir / "distance.svg").string(), "H1 distance to the tracked train", "t", "distance",
                         {{"dist_h1", r.times, r.dist}});
    if (r.samples.empty()) return;
    std::vector<Series> series;
    const std::size_t last = r.meta.lambdas.size() - 1;
    for (std::size_t j = 0; j < r.samples.front().I.size(); ++j) {
        for (std::size_t l : {std::size_t{0}, last}) {
            Series s;
            s.name = "j=" + std::to_string(r.meta.k + j + 1) + " lam" + std::to_string(l);
            for (const FunctionalSample& smp : r.samples) {
                s.x.push_back(smp.t);
                s.y.push_back(smp.I[j][l] - r.samples.front().I[j][l]);
            }
            series.push_back(std::move(s));
            if (last == 0) break;
        }
    }
    write_svg_line_chart((dir / "monotonicity.svg").string(), "I(t) - I(0)", "t", "delta", series);
}

}  // namespace

std::string resolve_out_dir(const std::optional<std::string>& flag, const std::optional<std::string>& config) {
    if (flag) return *flag;
    if (config) return *config;
    if (const char* env = std::getenv("PEAKONLAB_OUT"); env && *env) return env;
    return "peakonlab-out";
}

int guarded(const std::function<int()>& body, std::ostream& err) {
    try {
        return body();
    } catch (const RuntimeFailure& e) {
        err << "runtime error: " << e.what();
        if (e.time()) err << " [t = " << *e.time() << "]";
        err << '\n';
        return runtime_error;
    } catch (const InvalidInput& e) {
        err << "invalid input: " << e.what() << '\n';
        return scenario_error;
    } catch (const fs::filesystem_error& e) {
        err << "file error: " << e.what() << '\n';
        return scenario_error;
    }
}

int cmd_simulate(const SimulateOptions& o, std::ostream& out, std::ostream& err) {
    return guarded(
        [&] {
            Config cfg = load_config(o.config);
            if (o.seed) cfg.scenario.seed = *o.seed;
            if (o.t_end) cfg.scenario.t_end = *o.t_end;
            cfg.scenario.validate();
            const fs::path dir = resolve_out_dir(o.out, cfg.out);
            fs::create_directories(dir);

            const Report r = run_experiment(cfg.scenario);
            const Constants constants = constants_for(cfg);
            const std::vector<Flag> flags = evaluate_flags(r, constants);
            write_report_csv(r, (dir / "report.csv").string());
            write_json(make_manifest(r, "report.csv", constants, flags), (dir / "manifest.json").string());
            if (cfg.plots && r.meta.analysed) write_plots(r, dir);

            out << "wrote " << (dir / "report.csv").string() << " (" << r.size() << " rows, "
                << r.integrator.steps << " steps)\n";
            print_flags(flags, out);
            return static_cast<int>(ok);
        },
        err);
}

int cmd_verify(const VerifyOptions& o, std::ostream& out, std::ostream& err) {
    return guarded(
        [&] {
            const fs::path report = o.report;
            const fs::path manifest_path = o.manifest ? fs::path(*o.manifest) : report.parent_path() / "manifest.json";
            const nlohmann::json manifest = read_json(manifest_path.string());
            ReportMeta meta;
            try {
                meta = meta_from_json(manifest.at("meta"));
                meta.scenario = scenario_from_json(manifest.at("scenario"));
            } catch (const nlohmann::json::exception& e) {
                throw InvalidInput(manifest_path.string() + ": " + e.what());
            }
            const Constants constants = constants_from_json(manifest.at("constants"));
            const Report r = read_report_csv(report.string(), meta);

            const std::vector<std::string> known = flag_names();
            for (const std::string& c : o.criteria) {
                if (std::find(known.begin(), known.end(), c) == known.end()) {
                    throw InvalidInput("unknown criterion '" + c + "'");
                }
            }
            const bool corollary = std::find(o.criteria.begin(), o.criteria.end(), "corollary") != o.criteria.end();
            const std::vector<Flag> all = evaluate_flags(r, constants, corollary);
            std::vector<Flag> selected;
            bool passed = true;
            if (o.criteria.empty()) {
                selected = all;
            } else {
                for (const std::string& c : o.criteria) {
                    const auto it = std::find_if(all.begin(), all.end(), [&](const Flag& f) { return f.name == c; });
                    if (it == all.end()) {
                        out << std::left << std::setw(13) << c << "FAIL  (not available in this report)\n";
                        passed = false;
                    } else {
                        selected.push_back(*it);
                    }
                }
            }
            print_flags(selected, out);
            for (const Flag& f : selected) passed = passed && f.passed;
            return static_cast<int>(passed ? ok : check_failed);
        },
        err);
}

int cmd_sweep(const SweepOptions& o, std::ostream& out, std::ostream& err) {
    return guarded(
        [&] {
            Config cfg = load_config(o.config);
            if (o.seed) cfg.scenario.seed = *o.seed;
            if (o.t_end) cfg.scenario.t_end = *o.t_end;
            const unsigned jobs = o.jobs ? *o.jobs : cfg.jobs;
            for (double e : cfg.sweep_epsilons) {
                for (double L : cfg.sweep_L) {
                    Scenario s = cfg.scenario;
                    s.epsilon = e;
                    s.L = L;
                    s.validate_for_analysis();
                }
            }
            const fs::path dir = resolve_out_dir(o.out, cfg.out);
            fs::create_directories(dir);
            const Constants constants = constants_for(cfg);
            const SweepResult res = sweep(cfg.scenario, cfg.sweep_epsilons, cfg.sweep_L, constants.A, jobs);
            write_sweep_csv(res, (dir / "sweep.csv").string());

            nlohmann::json summary;
            summary["tool"] = "peakonlab";
            summary["version"] = version;
            summary["scenario"] = scenario_to_json(cfg.scenario);
            summary["A"] = constants.A;
            summary["fitted_A"] = res.fitted_A;
            summary["fitted_C_drift"] = res.fitted_C_drift;
            summary["errors"] = nlohmann::json::array();
            bool failed_run = false;
            bool failed_bound = false;
            for (const SweepCell& c : res.cells) {
                if (!c.error.empty()) {
                    summary["errors"].push_back({{"eps", c.epsilon}, {"L", c.L}, {"error", c.error}});
                    err << "cell eps = " << c.epsilon << ", L = " << c.L << ": " << c.error << '\n';
                    failed_run = true;
                } else if (!c.passed) {
                    failed_bound = true;
                }
            }
            write_json(summary, (dir / "sweep.json").string());

            out << "eps          L       sup_dist     bound        margin       passed\n";
            for (const SweepCell& c : res.cells) {
                out << std::left << std::setw(12) << c.epsilon << ' ' << std::setw(7) << c.L << ' ' << std::scientific
                    << std::setprecision(4) << c.sup_dist << "  " << c.bound << "  " << c.margin << std::defaultfloat
                    << "  " << (c.error.empty() ? (c.passed ? "yes" : "no") : "error") << '\n';
            }
            out << "fitted A = " << res.fitted_A << " (used " << constants.A << "), fitted C_drift = "
                << res.fitted_C_drift << '\n';
            if (failed_run) return static_cast<int>(runtime_error);
            return static_cast<int>(failed_bound ? check_failed : ok);
        },
        err);
}

int cmd_psi_check(const PsiCheckOptions& o, std::ostream& out, std::ostream& err) {
    return guarded(
        [&] {
            const WeightProfile profile(o.flip_bridge);
            const ProfileCheck c = check_profile(profile, o.samples);
            out << std::setprecision(6);
            out << "bridge b = " << profile.b() << ", s = " << profile.s() << ", m = " << profile.m()
                << ", x* = " << profile.x_star() << ", R = " << profile.r() << '\n';
            out << "0 < Psi <= 1            " << (c.bounded ? "PASS" : "FAIL") << "  min " << c.psi_min << ", max "
                << c.psi_max << '\n';
            out << "Psi' > 0                " << (c.increasing ? "PASS" : "FAIL") << "  min " << c.slope_min << '\n';
            out << "|Psi'''| <= 10 |Psi'|   " << (c.third_derivative ? "PASS" : "FAIL") << "  max ratio on [-1,1] "
                << c.ratio_max << " (one-sided max " << c.one_sided_ratio_max << ")\n";
            out << "tails and C2 junctions  " << (c.tails ? "PASS" : "FAIL") << "  mismatch " << c.junction_mismatch
                << '\n';
            return static_cast<int>(c.all() ? ok : check_failed);
        },
        err);
}

}  // namespace peakonlab::cli
