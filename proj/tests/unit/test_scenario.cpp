#include <doctest.h>

#include <cmath>

#include "peakonlab/errors.hpp"
#include "peakonlab/scenario.hpp"

using namespace peakonlab;

namespace {

Scenario base() {
    Scenario s;
    s.velocities = {-1.0, 1.0, 2.0};
    s.L = 40.0;
    s.epsilon = 1e-2;
    return s;
}

}  // namespace

TEST_CASE("base positions are evenly spaced and centred") {
    const std::vector<double> z = base_positions(4, 10.0);
    CHECK(z[1] - z[0] == 10.0);
    CHECK(z[3] - z[2] == 10.0);
    CHECK(z[0] + z[3] == doctest::Approx(0.0));
}

TEST_CASE("every perturbation mode stays within epsilon squared") {
    for (PerturbationMode m : {PerturbationMode::amplitude_jitter, PerturbationMode::position_jitter,
                               PerturbationMode::extra_small_peakons, PerturbationMode::mixed}) {
        Scenario s = base();
        s.perturbation = m;
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            s.seed = seed;
            const InitialData d = build_initial_data(s);
            CHECK(d.distance <= s.epsilon * s.epsilon * (1.0 + 1e-12));
            CHECK(d.train.sign_ordered());
            CHECK(d.train.sign_separator() == doctest::Approx(d.separator).epsilon(0.5));
        }
    }
}

TEST_CASE("perturbation is determined by the seed") {
    Scenario s = base();
    const PeakonTrain a = build_perturbed_scenario(s);
    const PeakonTrain b = build_perturbed_scenario(s);
    s.seed = 2;
    const PeakonTrain c = build_perturbed_scenario(s);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.p(i) == b.p(i));
        CHECK(a.q(i) == b.q(i));
    }
    CHECK(a.p(1) != c.p(1));
}

TEST_CASE("scenario validation") {
    Scenario s = base();
    CHECK_NOTHROW(s.validate_for_analysis());
    s.velocities = {-1.0, 2.0, 1.0};
    CHECK_THROWS_AS(s.validate(), InvalidScenario);
    s = base();
    s.velocities = {-1.0, 0.0, 1.0};
    CHECK_THROWS_AS(s.validate(), InvalidScenario);
    s = base();
    s.k = 2;
    CHECK_THROWS_AS(s.validate(), InvalidScenario);
    s = base();
    s.L = -1.0;
    CHECK_THROWS_AS(s.validate(), InvalidScenario);
    s = base();
    s.lambdas = {0.0, 3.0};
    CHECK_THROWS_AS(s.validate_for_analysis(), InvalidScenario);
    s = base();
    s.K = -1.0;
    CHECK_THROWS_AS(s.validate(), InvalidScenario);
    CHECK(parse_perturbation_mode("mixed") == PerturbationMode::mixed);
    CHECK_THROWS_AS(parse_perturbation_mode("bogus"), InvalidScenario);
}

TEST_CASE("default weight scale and output times") {
    Scenario s = base();
    CHECK(s.weight_scale() == doctest::Approx(std::sqrt(40.0) / 8.0));
    s.samples = 5;
    s.t_end = 4.0;
    const std::vector<double> t = s.output_times();
    REQUIRE(t.size() == 5);
    CHECK(t.front() == 0.0);
    CHECK(t.back() == 4.0);
}
