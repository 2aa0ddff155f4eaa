// One line per acceptance criterion. Exit status is nonzero only when a
// criterion outside `known_failures` fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "calibration_set.hpp"
#include "peakonlab/calibration.hpp"
#include "peakonlab/dynamics.hpp"
#include "peakonlab/functionals.hpp"
#include "peakonlab/harness.hpp"
#include "peakonlab/linalg.hpp"
#include "peakonlab/scenario.hpp"
#include "peakonlab/weight.hpp"

using namespace peakonlab;

namespace {

struct Outcome {
    bool passed = false;
    std::string detail;
};

// Criteria whose stated threshold the implementation cannot reach; see README.
struct Known {
    int id;
    const char* reason;
};
constexpr Known known_failures[] = {
    {5, "the cosh/cos bridge reaches |Psi'''|/|Psi'| ~ 95 where Psi' is small; one-sided ratio stays <= 10"},
    {10, "the first identity's right side misses a term; the corrected form converges at second order"},
};

const char* known_reason(int id) {
    for (const Known& k : known_failures)
        if (k.id == id) return k.reason;
    return nullptr;
}

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

PeakonTrain random_train(std::mt19937_64& rng, bool positive) {
    std::uniform_int_distribution<int> count(1, 6);
    std::uniform_real_distribution<double> amp(positive ? 0.1 : -2.0, 2.0), gap(0.05, 5.0);
    const int n = count(rng);
    std::vector<double> p(n), q(n);
    double x = -6.0;
    for (int i = 0; i < n; ++i) {
        do p[i] = amp(rng);
        while (std::abs(p[i]) < 0.05);
        q[i] = x;
        x += gap(rng);
    }
    return PeakonTrain(p, q);
}

Outcome peakon_invariants() {
    double worst = 0.0;
    for (double c : {-2.0, -1.0, 1.0, 2.0}) {
        const PeakonTrain t({c}, {0.0});
        const GridField f = sample_on_grid(t, grid_for(t, 1e-3, 25.0));
        worst = std::max(worst, std::abs(energy_E(f) / (2.0 * c * c) - 1.0));
        worst = std::max(worst, std::abs(energy_F(f) / (4.0 * c * c * c / 3.0) - 1.0));
    }
    return {worst <= 1e-4, fmt("max relative error %.3e (<= 1e-4)", worst)};
}

Outcome conservation() {
    Scenario s;
    s.velocities = {-2.0, -1.0, 1.0, 2.0};
    s.L = 40.0;
    s.epsilon = 1e-2;
    s.t_end = 50.0;
    s.rel_tol = 1e-10;
    const InitialData init = build_initial_data(s);
    const std::vector<double> times = s.output_times();
    const Trajectory tr = integrate(init.train, s.t_end, s.rel_tol, s.abs_tol, times);
    const double E0 = hamiltonian(tr.states.front());
    const double h = 1e-3;
    const double F0 = energy_F(sample_on_grid(tr.states.front(), grid_for(tr.states.front(), h)));
    double e_drift = 0.0, f_drift = 0.0;
    for (std::size_t i = 0; i < tr.size(); ++i) {
        e_drift = std::max(e_drift, std::abs(hamiltonian(tr.states[i]) / E0 - 1.0));
        if (i % 10 == 0 || i + 1 == tr.size()) {
            const GridField f = sample_on_grid(tr.states[i], grid_for(tr.states[i], h));
            f_drift = std::max(f_drift, std::abs(energy_F(f) - F0));
        }
    }
    return {e_drift <= 1e-8 && f_drift <= 1e-5,
            fmt("E relative drift %.3e (<= 1e-8), ", e_drift) + fmt("grid F drift %.3e (<= 1e-5)", f_drift)};
}

Outcome lemma1() {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> cs(0.1, 2.5), unit(0.0, 1.0);
    double eq1 = 0.0, slack = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 100; ++trial) {
        const PeakonTrain t = random_train(rng, false);
        const GridField f = sample_on_grid(t, grid_for(t, 1e-3));
        const double xi = t.q(0) - 5.0 + unit(rng) * (t.q(t.size() - 1) - t.q(0) + 10.0);
        const Lemma1Result r = lemma1_checks(f, cs(rng), xi);
        eq1 = std::max(eq1, std::abs(r.eq1_residual));
        slack = std::min(slack, r.eq2_slack);
    }
    return {eq1 <= 1e-6 && slack >= -1e-6,
            fmt("max |eq1 residual| %.3e (<= 1e-6), ", eq1) + fmt("min eq2 slack %.3e (>= -1e-6)", slack)};
}

Outcome h_dominance() {
    std::mt19937_64 rng(99);
    double worst = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 100; ++trial) {
        const PeakonTrain t = random_train(rng, false);
        const GridField f = sample_on_grid(t, grid_for(t, 1e-2));
        const HelmholtzField h = helmholtz_inverse(f);
        double hmax = 0.0;
        for (double v : h.h) hmax = std::max(hmax, v * v);
        worst = std::min(worst, check_h_dominance(h) / hmax);
    }
    return {worst >= -1e-10, fmt("min (h^2 - h_x^2) / max h^2 = %.3e (>= -1e-10)", worst)};
}

Outcome weight_profile() {
    const ProfileCheck c = check_profile(WeightProfile{}, 10000);
    return {c.all(), std::string("range ") + (c.bounded ? "ok" : "fail") + ", slope " +
                         (c.increasing ? "ok" : "fail") + ", tails " + (c.tails ? "ok" : "fail") +
                         fmt(", max |Psi'''|/|Psi'| %.4g (<= 10)", c.ratio_max) +
                         fmt(", one-sided max %.4g", c.one_sided_ratio_max)};
}

Outcome monotonicity() {
    const Report r = run_experiment(calibration_set::monotonicity());
    const MonotonicityResult m = verify_monotonicity(r, calibration::C_mono);
    double worst = -std::numeric_limits<double>::infinity();
    for (const MonotonicityEntry& e : m.entries) worst = std::max(worst, e.worst_delta);
    return {m.passed(), fmt("worst delta %.4e", worst) + fmt(" vs bound %.4e", m.entries.front().bound) +
                            fmt(", mirrored %.4e", m.left_worst_delta) + fmt(" vs %.4e", m.left_bound) +
                            " (" + std::to_string(m.entries.size()) + " (j, lambda) pairs)"};
}

struct SweepPair {
    SweepResult coarse;
    SweepResult fine;
    double seconds = 0.0;
};

SweepPair run_sweeps() {
    const auto t0 = std::chrono::steady_clock::now();
    Scenario base = calibration_set::sweep_base();
    SweepPair out;
    out.coarse = sweep(base, calibration_set::sweep_epsilons, calibration_set::sweep_Ls, calibration::A);
    base.grid_h /= 2.0;
    out.fine = sweep(base, calibration_set::sweep_epsilons, calibration_set::sweep_Ls, calibration::A);
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

Outcome theorem_bound(const SweepPair& s) {
    bool all = true;
    for (const SweepResult* r : {&s.coarse, &s.fine})
        for (const SweepCell& c : r->cells) all = all && c.error.empty() && c.passed;
    const double ratio = s.fine.fitted_A / s.coarse.fitted_A;
    const bool stable = std::abs(ratio - 1.0) <= 0.2;
    return {all && stable, fmt("fitted A %.4e", s.coarse.fitted_A) + fmt(" (h/2: %.4e", s.fine.fitted_A) +
                               fmt(", ratio %.4f)", ratio) + fmt(", frozen A %.4e holds in every cell: ", calibration::A) +
                               (all ? "yes" : "no") + fmt(", both sweeps %.1fs", s.seconds)};
}

Outcome drift(const SweepPair& s) {
    bool all = true;
    double worst = 0.0;
    for (const SweepResult* r : {&s.coarse, &s.fine}) {
        for (const SweepCell& c : r->cells) {
            const double bound = calibration::C_drift * drift_scale(c.epsilon, c.L);
            all = all && c.error.empty() && c.drift <= bound;
            worst = std::max(worst, c.drift / drift_scale(c.epsilon, c.L));
        }
    }
    return {all, fmt("max drift / (eps^1/4 + L^-1/16) = %.4e", worst) +
                     fmt(" against frozen C %.4e", calibration::C_drift)};
}

Outcome corollary() {
    Matrix m(2);
    m(0, 0) = m(1, 1) = 1.0;
    m(0, 1) = m(1, 0) = 0.5;
    const EigenDecomposition e = jacobi_eigen(m);
    const double eig_err = std::max(std::abs(e.values[0] - 0.5), std::abs(e.values[1] - 1.5));

    const PeakonTrain train = calibration_set::corollary_train();
    std::vector<double> times(calibration_set::corollary_samples);
    for (std::size_t i = 0; i < times.size(); ++i)
        times[i] = calibration_set::corollary_t_end * static_cast<double>(i) / static_cast<double>(times.size() - 1);
    const Trajectory traj = integrate(train, calibration_set::corollary_t_end, 1e-12, 1e-14, times);
    const CorollaryResult c = verify_corollary(train, traj, calibration::gamma);
    return {eig_err <= 1e-12 && c.speed_error <= 1e-3 && c.distance <= calibration::gamma,
            fmt("2x2 eigen error %.2e (<= 1e-12), ", eig_err) + fmt("speed error %.3e (<= 1e-3), ", c.speed_error) +
                fmt("fitted-train distance %.3e", c.distance) + fmt(" (<= gamma %.1e)", calibration::gamma)};
}

Outcome identities() {
    const PeakonTrain state({-1.0, 0.9, 1.6}, {-4.0, 0.0, 3.0});
    const WeightFunction g = scaled_weight(WeightProfile{}, 1.5, 1.2);
    std::vector<IdentityResidual> r;
    for (int level = 0; level < 3; ++level) {
        const double scale = std::ldexp(1.0, -level);
        r.push_back(derivative_identity_check(state, g, 4e-3 * scale, 2e-2 * scale));
    }
    auto min_order = [&](double IdentityResidual::*field) {
        double o = std::numeric_limits<double>::infinity();
        for (int i = 0; i + 1 < 3; ++i) o = std::min(o, std::log2(std::abs(r[i].*field) / std::abs(r[i + 1].*field)));
        return o;
    };
    const double go = min_order(&IdentityResidual::go);
    const double gogo = min_order(&IdentityResidual::gogo);
    const double derived = min_order(&IdentityResidual::go_derived);
    return {go >= 1.8 && gogo >= 1.8, fmt("order go %.2f", go) + fmt(" (residual %.3e)", r.back().go) +
                                          fmt(", gogo %.2f", gogo) + fmt(" (residual %.3e)", r.back().gogo) +
                                          fmt(", corrected go %.2f", derived) +
                                          fmt(" (residual %.3e); need >= 1.8", r.back().go_derived)};
}

Outcome rk4_oracle() {
    const PeakonTrain configs[] = {
        PeakonTrain({1.0, 2.0}, {0.0, 3.0}),
        PeakonTrain({-1.0, 1.5}, {-2.0, 2.0}),
        PeakonTrain({2.0, 0.5}, {-3.0, 1.0}),
    };
    double worst = 0.0;
    for (const PeakonTrain& t : configs) {
        const PeakonTrain a = flow(t, 5.0, 1e-12, 1e-14);
        const PeakonTrain b = integrate_rk4(t, 5.0, 1e-5);
        for (std::size_t i = 0; i < 2; ++i) {
            worst = std::max({worst, std::abs(a.p(i) - b.p(i)), std::abs(a.q(i) - b.q(i))});
        }
    }
    return {worst <= 1e-6, fmt("max |adaptive - RK4| %.3e (<= 1e-6)", worst)};
}

}  // namespace

int main() {
    int unexpected = 0;
    auto report = [&](int id, const char* name, auto&& body) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = body();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const char* reason = known_reason(id);
        std::printf("[%s] %2d %-22s %s [%.1fs]\n", o.passed ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs);
        if (!o.passed && reason) std::printf("            known: %s\n", reason);
        if (o.passed && reason) std::printf("            note: listed as a known failure but passed\n");
        if (!o.passed && !reason) ++unexpected;
        std::fflush(stdout);
    };

    report(1, "peakon invariants", peakon_invariants);
    report(2, "conservation", conservation);
    report(3, "energy inequalities", lemma1);
    report(4, "h dominance", h_dominance);
    report(5, "weight profile", weight_profile);
    report(6, "monotonicity", monotonicity);
    SweepPair sweeps;
    bool swept = false;
    std::string sweep_error;
    try {
        sweeps = run_sweeps();
        swept = true;
    } catch (const std::exception& e) {
        sweep_error = e.what();
    }
    auto need_sweep = [&](auto&& f) {
        return [&, f]() -> Outcome {
            if (!swept) return {false, "sweep failed: " + sweep_error};
            return f(sweeps);
        };
    };
    report(7, "theorem bound sweep", need_sweep(theorem_bound));
    report(8, "modulation drift", need_sweep(drift));
    report(9, "asymptotic speeds", corollary);
    report(10, "derivative identities", identities);
    report(11, "RK4 oracle", rk4_oracle);

    std::printf("%d unexpected failure(s)\n", unexpected);
    return unexpected == 0 ? 0 : 1;
}
