#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "peakonlab/errors.hpp"
#include "peakonlab/quadrature.hpp"
#include "peakonlab/train.hpp"

using namespace peakonlab;

TEST_CASE("train rejects malformed input") {
    CHECK_THROWS_AS(PeakonTrain({}, {}), InvalidTrain);
    CHECK_THROWS_AS(PeakonTrain({1.0}, {0.0, 1.0}), InvalidTrain);
    CHECK_THROWS_AS(PeakonTrain({1.0, 0.0}, {0.0, 1.0}), InvalidTrain);
    CHECK_THROWS_AS(PeakonTrain({1.0, 1.0}, {1.0, 1.0}), InvalidTrain);
    CHECK_THROWS_AS(PeakonTrain({1.0, 1.0}, {2.0, 1.0}), InvalidTrain);
    CHECK_THROWS_AS(PeakonTrain({NAN}, {0.0}), InvalidTrain);
}

TEST_CASE("sign ordering and separator") {
    const PeakonTrain t({-1.0, -0.5, 2.0}, {-3.0, 0.0, 4.0});
    CHECK(t.sign_ordered());
    CHECK(t.negative_count() == 2);
    CHECK(t.sign_separator() == doctest::Approx(2.0));
    CHECK_FALSE(PeakonTrain({1.0, -1.0}, {0.0, 1.0}).sign_ordered());
    CHECK(std::isinf(PeakonTrain({1.0}, {0.0}).sign_separator()));
}

TEST_CASE("reflection maps u(x) to -u(-x)") {
    const PeakonTrain t({-1.0, 0.7, 2.0}, {-3.0, 0.5, 4.0});
    const PeakonTrain r = t.reflected();
    for (double x : {-5.0, -1.0, 0.2, 3.3}) CHECK(evaluate_train(r, x) == doctest::Approx(-evaluate_train(t, -x)));
    CHECK(r.sign_ordered());
}

TEST_CASE("crest derivative convention") {
    const PeakonTrain t({2.0}, {1.0});
    CHECK(evaluate_train_derivative(t, 1.0) == 0.0);
    CHECK(evaluate_train_derivative(t, 1.0, Side::left) == doctest::Approx(2.0));
    CHECK(evaluate_train_derivative(t, 1.0, Side::right) == doctest::Approx(-2.0));
}

TEST_CASE("grid validation and covering") {
    Grid g{0.0, 0.0, 10};
    CHECK_THROWS_AS(g.validate(), InvalidInput);
    const Grid c = Grid::covering(-1.05, 2.02, 0.1);
    CHECK(c.x0 <= -1.05);
    CHECK(c.x_end() >= 2.02);
    CHECK(std::abs(c.x0 / 0.1 - std::round(c.x0 / 0.1)) < 1e-9);
}

TEST_CASE("H1 norms: Gram sum, interval sum and quadrature agree") {
    const PeakonTrain a({-1.0, 0.8, 1.5}, {-2.0, 0.3, 3.0});
    const PeakonTrain b({-0.9, 0.7, 1.6}, {-2.1, 0.4, 2.8});
    const std::vector<double> pa(a.p().begin(), a.p().end()), qa(a.q().begin(), a.q().end());
    const std::vector<double> pb(b.p().begin(), b.p().end()), qb(b.q().begin(), b.q().end());
    CHECK(h1_inner_closed_form(a, b) == doctest::Approx(oracle::h1_inner(pa, qa, pb, qb)).epsilon(1e-14));

    const double gram = oracle::h1_inner(pa, qa, pa, qa) - 2.0 * oracle::h1_inner(pa, qa, pb, qb) +
                        oracle::h1_inner(pb, qb, pb, qb);
    CHECK(h1_distance(a, b) == doctest::Approx(std::sqrt(gram)).epsilon(1e-10));

    const GridField f = sample_on_grid(a, grid_for(a, 1e-3, 30.0));
    const double quad = integrate(f, [](const FieldPoint& p) { return p.u * p.u + p.ux * p.ux; });
    CHECK(quad == doctest::Approx(oracle::h1_inner(pa, qa, pa, qa)).epsilon(1e-6));
}

TEST_CASE("interval norm has no cancellation for nearby trains") {
    const std::vector<double> w{1.0, -1.0};
    const std::vector<double> x{0.0, 1e-9};
    // ||e^{-|x|} - e^{-|x-d|}||^2 = 4 (1 - e^{-d})
    const double d = 1e-9;
    const double exact = -4.0 * std::expm1(-d);
    CHECK(h1_norm_squared(w, x) == doctest::Approx(exact).epsilon(1e-6));
}

TEST_CASE("sampled kinks carry exact one-sided limits") {
    const PeakonTrain t({1.0, 2.0}, {0.05, 1.0});
    const GridField f = sample_on_grid(t, grid_for(t, 0.1, 5.0));
    REQUIRE(f.kinks.size() == 2);
    CHECK(f.kinks[0].x == 0.05);
    CHECK(f.kinks[0].ux_left - f.kinks[0].ux_right == doctest::Approx(2.0));
    CHECK(f.kinks[1].ux_left - f.kinks[1].ux_right == doctest::Approx(4.0));
    for (std::size_t m = 0; m < f.grid.n; ++m) CHECK(f.u[m] == doctest::Approx(evaluate_train(t, f.grid.node(m))));
}
