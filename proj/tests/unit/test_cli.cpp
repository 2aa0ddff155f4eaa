#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "config.hpp"
#include "manifest.hpp"
#include "peakonlab/errors.hpp"
#include "svg_plot.hpp"

using namespace peakonlab;
using namespace peakonlab::cli;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("peakonlab-test-" + name)) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string write(const std::string& file, const std::string& text) const {
        std::ofstream(path / file) << text;
        return (path / file).string();
    }
};

const char* small_config =
    "velocities = -1, 1, 2\n"
    "L = 64\n"
    "K = 1\n"
    "epsilon = 0.01\n"
    "t_end = 3\n"
    "samples = 16\n"
    "grid_h = 0.02\n";

}  // namespace

TEST_CASE("config parsing") {
    const Config c = parse_config("# comment\nvelocities = [-1, 1, 2]  # trailing\nL = 50\nseed = 9\nlambdas = 0, 1\n"
                                  "perturbation = position-jitter\nplots = false\n");
    CHECK(c.scenario.velocities == std::vector<double>{-1.0, 1.0, 2.0});
    CHECK(c.scenario.L == 50.0);
    CHECK(c.scenario.seed == 9);
    CHECK(c.scenario.lambdas.size() == 2);
    CHECK(c.scenario.perturbation == PerturbationMode::position_jitter);
    CHECK_FALSE(c.plots);
}

TEST_CASE("config errors name the line") {
    try {
        parse_config("velocities = 1\nbogus = 3\n", "x.conf");
        FAIL("accepted unknown key");
    } catch (const InvalidScenario& e) {
        CHECK(std::string(e.what()).find("x.conf:2") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config("velocities = 1\nL = 3\nL = 4\n"), InvalidScenario);
    CHECK_THROWS_AS(parse_config("velocities = 1\nL = abc\n"), InvalidScenario);
    CHECK_THROWS_AS(parse_config("velocities = 2, 1\n"), InvalidScenario);
    CHECK_THROWS_AS(parse_config("velocities = 1\ntrain_p = 1\n"), InvalidScenario);
}

TEST_CASE("output directory precedence") {
    CHECK(resolve_out_dir(std::string("a"), std::string("b")) == "a");
    CHECK(resolve_out_dir(std::nullopt, std::string("b")) == "b");
}

TEST_CASE("simulate then verify round trip") {
    TempDir dir("simulate");
    SimulateOptions s;
    s.config = dir.write("run.conf", small_config);
    s.out = (dir.path / "out").string();
    std::ostringstream out, err;
    const int code = cmd_simulate(s, out, err);
    INFO(out.str() << err.str());
    REQUIRE(code == ok);
    CHECK(fs::exists(dir.path / "out" / "report.csv"));
    CHECK(fs::exists(dir.path / "out" / "distance.svg"));
    const nlohmann::json m = read_json((dir.path / "out" / "manifest.json").string());
    CHECK(m.at("seed") == 1);
    CHECK(m.at("flags").size() >= 5);

    VerifyOptions v;
    v.report = (dir.path / "out" / "report.csv").string();
    std::ostringstream vout, verr;
    CHECK(cmd_verify(v, vout, verr) == ok);
    CHECK(vout.str().find("theorem") != std::string::npos);

    v.criteria = {"energy", "theorem"};
    std::ostringstream sel;
    CHECK(cmd_verify(v, sel, verr) == ok);
    CHECK(sel.str().find("monotonicity") == std::string::npos);

    v.criteria = {"nonsense"};
    CHECK(cmd_verify(v, sel, verr) == scenario_error);
}

TEST_CASE("verify fails when the stored bound no longer holds") {
    TempDir dir("tight");
    SimulateOptions s;
    s.config = dir.write("run.conf", std::string(small_config) + "A = 1e-9\n");
    s.out = (dir.path / "out").string();
    std::ostringstream out, err;
    REQUIRE(cmd_simulate(s, out, err) == ok);
    VerifyOptions v;
    v.report = (dir.path / "out" / "report.csv").string();
    v.criteria = {"theorem"};
    CHECK(cmd_verify(v, out, err) == check_failed);
}

TEST_CASE("exit codes for bad input and runtime failure") {
    TempDir dir("codes");
    std::ostringstream out, err;
    SimulateOptions s;
    s.config = (dir.path / "missing.conf").string();
    CHECK(cmd_simulate(s, out, err) == scenario_error);
    s.config = dir.write("bad.conf", "velocities = 1, -1\n");
    CHECK(cmd_simulate(s, out, err) == scenario_error);
    s.config = dir.write("collide.conf", "train_p = 1, -1\ntrain_q = -2, 2\nt_end = 10\n");
    s.out = (dir.path / "out").string();
    std::ostringstream cerr_;
    CHECK(cmd_simulate(s, out, cerr_) == runtime_error);
    CHECK(cerr_.str().find("t = ") != std::string::npos);
}

TEST_CASE("psi-check") {
    std::ostringstream out, err;
    PsiCheckOptions o;
    o.samples = 2000;
    CHECK(cmd_psi_check(o, out, err) == check_failed);
    CHECK(out.str().find("one-sided max") != std::string::npos);
    o.flip_bridge = true;
    std::ostringstream flipped;
    CHECK(cmd_psi_check(o, flipped, err) == check_failed);
    CHECK(flipped.str().find("Psi' > 0                FAIL") != std::string::npos);
}

TEST_CASE("sweep writes csv and json") {
    TempDir dir("sweep");
    SweepOptions o;
    o.config = dir.write("sweep.conf", std::string(small_config) + "sweep_epsilons = 0.01\nsweep_L = 64\nA = 1\n");
    o.out = (dir.path / "out").string();
    std::ostringstream out, err;
    CHECK(cmd_sweep(o, out, err) == ok);
    std::ifstream csv(dir.path / "out" / "sweep.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header == "eps,L,sup_dist,bound,margin,passed");
    CHECK(read_json((dir.path / "out" / "sweep.json").string()).contains("fitted_A"));
}

TEST_CASE("svg chart skips non-finite points") {
    const std::string svg = svg_line_chart("t", "x", "y", {{"s", {0.0, 1.0, 2.0}, {1.0, NAN, 3.0}}});
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("nan") == std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
}
