#include <doctest.h>

#include <cmath>

#include "peakonlab/errors.hpp"
#include "peakonlab/weight.hpp"

using namespace peakonlab;

TEST_CASE("profile symmetry, range and exact tails") {
    const WeightProfile w;
    for (double x = -6.0; x <= 6.0; x += 0.0137) {
        CHECK(w.psi(-x) == doctest::Approx(1.0 - w.psi(x)).epsilon(1e-14));
        CHECK(w.psi(x) > 0.0);
        CHECK(w.psi(x) <= 1.0);
        CHECK(w.psi_prime(x) > 0.0);
    }
    CHECK(w.psi(-2.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
    CHECK(w.psi(3.0) == doctest::Approx(1.0 - std::exp(-3.0)).epsilon(1e-15));
    CHECK(w.psi(0.0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("analytic derivatives match finite differences") {
    const WeightProfile w;
    const double h = 1e-5;
    for (double x : {-3.0, -0.97, -0.5, -0.1, 0.0, 0.2, 0.77, 0.99, 1.4}) {
        CHECK(w.psi_prime(x) == doctest::Approx((w.psi(x + h) - w.psi(x - h)) / (2 * h)).epsilon(1e-8));
        CHECK(w.psi_pp(x) == doctest::Approx((w.psi_prime(x + h) - w.psi_prime(x - h)) / (2 * h)).epsilon(1e-6));
        CHECK(w.psi_ppp(x) == doctest::Approx((w.psi_pp(x + h) - w.psi_pp(x - h)) / (2 * h)).epsilon(1e-5));
    }
}

TEST_CASE("profile is C2 across every breakpoint") {
    const WeightProfile w;
    for (double b : w.breakpoints()) {
        CHECK(w.psi_prime(b, Side::left) == doctest::Approx(w.psi_prime(b, Side::right)).epsilon(1e-12));
        CHECK(w.psi_pp(b, Side::left) == doctest::Approx(w.psi_pp(b, Side::right)).epsilon(1e-12));
    }
}

TEST_CASE("profile check: one-sided ratio within 10, two-sided ratio not") {
    const ProfileCheck c = check_profile(WeightProfile{});
    CHECK(c.bounded);
    CHECK(c.increasing);
    CHECK(c.tails);
    CHECK(c.one_sided_ratio_max <= 10.0);
    CHECK(c.ratio_max > 10.0);
    CHECK_FALSE(c.all());
}

TEST_CASE("flipped bridge is caught") {
    const ProfileCheck c = check_profile(WeightProfile{true});
    CHECK_FALSE(c.increasing);
    CHECK_FALSE(c.all());
}

namespace {

Scenario three() {
    Scenario s;
    s.velocities = {-1.0, 1.0, 2.0};
    s.L = 40.0;
    return s;
}

}  // namespace

TEST_CASE("weight centres follow the tracked positions") {
    const Scenario s = three();
    const std::vector<double> times{0.0, 2.0};
    const std::vector<std::vector<double>> xt{{-40.0, 0.0, 40.0}, {-42.0, 2.1, 44.0}};
    const WeightFamily fam = build_weight_family(WeightProfile{}, 2.0, s, times, xt);
    CHECK(fam.k == 1);
    CHECK(fam.tracks() == 2);
    CHECK(fam.right[1][0] == doctest::Approx(0.0 + 1.0 * 2.0 / 2.0 - 10.0));
    CHECK(fam.right[1][1] == doctest::Approx((2.1 + 44.0) / 2.0));
    CHECK(fam.left[1] == doctest::Approx(-40.0 - 1.0 * 2.0 / 2.0 + 10.0));
    CHECK(fam.index_of(2.0) == 1);
    CHECK_THROWS_AS(fam.index_of(1.0), InvalidInput);
}

TEST_CASE("weight family rejects bad scales and lost ordering") {
    Scenario s = three();
    const std::vector<double> times{0.0};
    const std::vector<std::vector<double>> xt{{-40.0, 0.0, 40.0}};
    CHECK_THROWS_AS(build_weight_family(WeightProfile{}, 0.0, s, times, xt), BadScale);
    s.enforce_kernel_bound = true;
    CHECK_THROWS_AS(build_weight_family(WeightProfile{}, 2.0, s, times, xt), BadScale);
    CHECK_NOTHROW(build_weight_family(WeightProfile{}, 4.0, s, times, xt));
    s.enforce_kernel_bound = false;
    const std::vector<std::vector<double>> crossed{{-40.0, 30.0, -20.0}};
    CHECK_THROWS_AS(build_weight_family(WeightProfile{}, 2.0, s, times, crossed), OrderingLost);
}
