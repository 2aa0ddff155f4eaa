#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "peakonlab/dynamics.hpp"
#include "peakonlab/errors.hpp"

using namespace peakonlab;

TEST_CASE("O(N) right side matches the direct double sum") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> amp(-2.0, 2.0), gap(0.01, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 1 + trial % 9;
        std::vector<double> p(n), q(n);
        double x = -5.0;
        for (std::size_t i = 0; i < n; ++i) {
            p[i] = amp(rng);
            q[i] = x;
            x += gap(rng);
        }
        std::vector<double> qd, pd;
        oracle::rhs(p, q, qd, pd);
        const Rhs r = ode_rhs(PeakonTrain(p, q));
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(r.qdot[i] == doctest::Approx(qd[i]).epsilon(1e-13));
            CHECK(std::abs(r.pdot[i] - pd[i]) < 1e-13 * (1.0 + std::abs(pd[i])));
        }
    }
}

TEST_CASE("single peakon travels at speed equal to its height") {
    const PeakonTrain t({1.7}, {-2.0});
    const PeakonTrain s = flow(t, 3.0);
    CHECK(s.p(0) == doctest::Approx(1.7).epsilon(1e-14));
    CHECK(s.q(0) == doctest::Approx(-2.0 + 3.0 * 1.7).epsilon(1e-12));
}

TEST_CASE("flow is reversible and conserves the Hamiltonian") {
    const PeakonTrain t({-0.8, 1.0, 2.2}, {-3.0, 0.0, 2.0});
    const PeakonTrain fwd = flow(t, 5.0);
    const PeakonTrain back = flow(fwd, -5.0);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(back.p(i) == doctest::Approx(t.p(i)).epsilon(1e-9));
        CHECK(back.q(i) == doctest::Approx(t.q(i)).epsilon(1e-9));
    }
    CHECK(hamiltonian(fwd) == doctest::Approx(hamiltonian(t)).epsilon(1e-10));
}

TEST_CASE("DOPRI agrees with fixed-step RK4") {
    const PeakonTrain t({0.6, 1.0, 1.8}, {-3.0, 0.0, 2.5});
    const PeakonTrain a = flow(t, 4.0, 1e-13, 1e-15);
    const PeakonTrain b = integrate_rk4(t, 4.0, 1e-3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(a.p(i) == doctest::Approx(b.p(i)).epsilon(1e-10));
        CHECK(a.q(i) == doctest::Approx(b.q(i)).epsilon(1e-10));
    }
}

TEST_CASE("output times are hit exactly") {
    const PeakonTrain t({1.0, 2.0}, {0.0, 3.0});
    const std::vector<double> times{0.0, 0.1, 0.35, 2.0};
    const Trajectory tr = integrate(t, 2.0, 1e-10, 1e-12, times);
    REQUIRE(tr.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) CHECK(tr.times[i] == times[i]);
}

TEST_CASE("peakon-antipeakon collision is detected near the closed-form time") {
    // Symmetric pair p = (1, -1), q = (-a, a) stays symmetric; with d = q2 - q1,
    // H = 4 p^2 (1 - e^{-d}) is conserved.
    const double a = 2.0;
    const PeakonTrain t({1.0, -1.0}, {-a, a});
    const double H = hamiltonian(t);
    CHECK(H == doctest::Approx(4.0 * (1.0 - std::exp(-2.0 * a))));
    // d' = -2 p (1 - e^{-d}) and p^2 (1 - e^{-d}) = H / 4, so
    // d' = -2 sqrt(H/4) sqrt(1 - e^{-d}); integrate d from 2a down to 0.
    const double c = std::sqrt(H / 4.0);
    // time for d to fall from 2a to delta: [artanh(sqrt(1 - e^{-d}))] / c
    const double delta = IntegratorOptions{}.min_gap;
    const double T = (std::atanh(std::sqrt(-std::expm1(-2.0 * a))) - std::atanh(std::sqrt(-std::expm1(-delta)))) / c;
    try {
        integrate(t, 10.0, 1e-12, 1e-14, {});
        FAIL("no collision");
    } catch (const CollisionDetected& e) {
        REQUIRE(e.time());
        CHECK(*e.time() >= T - 1e-9);
        CHECK(*e.time() == doctest::Approx(T).epsilon(1e-5));
    }
}

TEST_CASE("asymptotic spectrum of a 2x2 train") {
    const PeakonTrain t({1.0, 1.0}, {0.0, 2.0 * std::log(2.0)});
    // M = [[1, 1/2], [1/2, 1]] -> {1/2, 3/2}
    const std::vector<double> ev = eigenvalues_real(asymptotic_matrix(t));
    REQUIRE(ev.size() == 2);
    CHECK(std::abs(ev[0] - 0.5) < 1e-14);
    CHECK(std::abs(ev[1] - 1.5) < 1e-14);
}

TEST_CASE("speed estimates agree with the ODE velocity") {
    const PeakonTrain t({1.0, 2.0}, {0.0, 4.0});
    std::vector<double> times;
    for (int i = 0; i <= 100; ++i) times.push_back(0.01 * i);
    const Trajectory tr = integrate(t, 1.0, 1e-12, 1e-14, times);
    const auto est = speed_estimates(tr);
    for (std::size_t i = 1; i + 1 < est.size(); ++i)
        for (std::size_t j = 0; j < 2; ++j) CHECK(est[i].differenced[j] == doctest::Approx(est[i].direct[j]).epsilon(1e-4));
}
