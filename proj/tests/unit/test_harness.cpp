#include <doctest.h>

#include <cmath>
#include <sstream>

#include "peakonlab/calibration.hpp"
#include "peakonlab/errors.hpp"
#include "peakonlab/harness.hpp"
#include "peakonlab/report_csv.hpp"

using namespace peakonlab;

namespace {

Scenario small() {
    Scenario s;
    s.velocities = {-1.0, 1.0, 2.0};
    s.L = 30.0;
    s.epsilon = 1e-2;
    s.t_end = 4.0;
    s.samples = 21;
    s.grid_h = 2e-2;
    return s;
}

}  // namespace

TEST_CASE("default lambda list") {
    const std::vector<double> c{-1.0, 1.0, 2.0};
    const std::vector<double> l = default_lambdas(c, 1);
    CHECK(l.front() == 0.0);
    CHECK(l.back() == doctest::Approx(2.0));
    for (double v : {0.5, 1.0}) CHECK(std::find(l.begin(), l.end(), v) != l.end());
    for (std::size_t i = 1; i < l.size(); ++i) CHECK(l[i - 1] < l[i]);
}

TEST_CASE("a single unperturbed peakon stays on the train") {
    Scenario s;
    s.velocities = {1.0};
    s.L = 64.0;
    s.t_end = 3.0;
    s.samples = 7;
    const Report r = run_experiment(s);
    for (double d : r.dist) CHECK(d < 1e-8);
    for (std::size_t i = 0; i < r.size(); ++i)
        CHECK(r.path.xtilde[i][0] == doctest::Approx(r.meta.z0[0] + r.times[i]).epsilon(1e-8));
}

TEST_CASE("runs are deterministic and the CSV round trip is exact") {
    const Report a = run_experiment(small());
    const Report b = run_experiment(small());
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.dist[i] == b.dist[i]);

    std::stringstream ss;
    write_report_csv(a, ss);
    const Report back = read_report_csv(ss, a.meta);
    REQUIRE(back.size() == a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(back.dist[i] == a.dist[i]);
        CHECK(back.samples[i].I[0][0] == a.samples[i].I[0][0]);
    }
    const Constants k = Constants::frozen();
    const std::vector<Flag> fa = evaluate_flags(a, k);
    const std::vector<Flag> fb = evaluate_flags(back, k);
    REQUIRE(fa.size() == fb.size());
    for (std::size_t i = 0; i < fa.size(); ++i) {
        CHECK(fa[i].name == fb[i].name);
        CHECK(fa[i].passed == fb[i].passed);
        CHECK(fa[i].value == fb[i].value);
    }
}

TEST_CASE("CSV header mismatch is rejected") {
    const Report a = run_experiment(small());
    std::stringstream ss;
    write_report_csv(a, ss);
    std::string text = ss.str();
    text.replace(0, 1, "x");
    std::stringstream bad(text);
    CHECK_THROWS_AS(read_report_csv(bad, a.meta), InvalidInput);
}

TEST_CASE("frozen constants") {
    const Constants k = Constants::frozen();
    CHECK(k.A == calibration::A);
    CHECK(k.gamma >= calibration::gamma_floor);
    CHECK(theorem_scale(1e-2, 256.0) == doctest::Approx(0.1 + 0.5));
    CHECK(drift_scale(1e-4, 65536.0) == doctest::Approx(0.1 + 0.5));
}

TEST_CASE("corollary: single peakon and a well separated pair") {
    {
        const PeakonTrain t({1.5}, {0.0});
        const std::vector<double> times{0.0, 10.0, 20.0};
        const CorollaryResult c = verify_corollary(t, integrate(t, 20.0, 1e-12, 1e-14, times), 1e-10);
        CHECK(c.passed);
        CHECK(c.speed_error < 1e-12);
    }
    {
        // Far apart: M is nearly diagonal, speeds approach the amplitudes.
        const PeakonTrain t({1.0, 2.0}, {0.0, 40.0});
        std::vector<double> times;
        for (int i = 0; i <= 20; ++i) times.push_back(5.0 * i);
        const CorollaryResult c = verify_corollary(t, integrate(t, 100.0, 1e-12, 1e-14, times), 1e-8);
        CHECK(c.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(c.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-8));
        CHECK(c.speed_error < 1e-6);
    }
}

TEST_CASE("corollary refuses an unsettled train") {
    const PeakonTrain t({1.0, 1.1}, {0.0, 1.0});
    const std::vector<double> times{0.0, 0.5, 1.0};
    CHECK_THROWS_AS(verify_corollary(t, integrate(t, 1.0, 1e-12, 1e-14, times), 1e-10), NotSettled);
}

TEST_CASE("one-cell sweep matches a direct run") {
    Scenario s = small();
    const std::vector<double> e{1e-2}, L{30.0};
    const SweepResult r = sweep(s, e, L, 1.0, 2);
    REQUIRE(r.cells.size() == 1);
    CHECK(r.cells[0].error.empty());
    RunOptions o;
    o.with_functionals = false;
    const Report direct = run_experiment(s, o);
    CHECK(r.cells[0].sup_dist == *std::max_element(direct.dist.begin(), direct.dist.end()));
    CHECK(r.fitted_A == doctest::Approx(r.cells[0].sup_dist / theorem_scale(1e-2, 30.0)));
}

TEST_CASE("explicit colliding train reports the failing time") {
    Scenario s;
    s.velocities = {-1.0, 1.0};
    s.explicit_train = PeakonTrain({1.0, -1.0}, {-2.0, 2.0});
    s.t_end = 10.0;
    try {
        run_experiment(s);
        FAIL("no collision");
    } catch (const CollisionDetected& e) {
        REQUIRE(e.time());
        CHECK(*e.time() > 2.7);
        CHECK(*e.time() < 2.72);
    }
}
