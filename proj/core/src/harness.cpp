#include "peakonlab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include "peakonlab/calibration.hpp"
#include "peakonlab/errors.hpp"

namespace peakonlab {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

std::string at_time(const std::string& what, double t) { return what + " (at t = " + std::to_string(t) + ")"; }

// Reattaches the simulation time to failures raised by time-agnostic helpers.
template <class Fn>
auto with_time(double t, Fn&& fn) {
    try {
        return fn();
    } catch (const NoConvergence& e) {
        throw NoConvergence(at_time(e.what(), t), t);
    } catch (const OrderingLost& e) {
        throw OrderingLost(at_time(e.what(), t), t);
    } catch (const EmptyWindow& e) {
        throw EmptyWindow(at_time(e.what(), t), t);
    }
}

Grid analysis_grid(const PeakonTrain& state, std::span<const double> xtilde, const Scenario& s) {
    double lo = state.q().front();
    double hi = state.q().back();
    if (!xtilde.empty()) {
        lo = std::min(lo, xtilde.front());
        hi = std::max(hi, xtilde.back());
    }
    const double pad = s.grid_pad + 0.25 * s.L;
    return Grid::covering(lo - pad, hi + pad, s.grid_h);
}

std::size_t zero_lambda(const std::vector<double>& lambdas) {
    for (std::size_t l = 0; l < lambdas.size(); ++l)
        if (lambdas[l] == 0.0) return l;
    return lambdas.size();
}

}  // namespace

Constants Constants::frozen() {
    return {calibration::A, calibration::C_mono, calibration::C_drift, calibration::gamma};
}

std::vector<double> default_lambdas(std::span<const double> c, std::size_t k) {
    std::vector<double> base{0.0};
    if (k < c.size()) {
        for (std::size_t i = k; i < c.size(); ++i) base.push_back(1.0 / c[i]);
        base.push_back(2.0 / c[k]);
    }
    std::sort(base.begin(), base.end());
    base.erase(std::unique(base.begin(), base.end()), base.end());
    std::vector<double> out = base;
    for (std::size_t i = 1; i < base.size(); ++i) out.push_back(0.5 * (base[i - 1] + base[i]));
    std::sort(out.begin(), out.end());
    return out;
}

Report run_experiment(const Scenario& s, const RunOptions& options) {
    bool analysed = true;
    if (s.explicit_train) {
        s.validate();
        try {
            s.validate_for_analysis();
        } catch (const InvalidScenario&) {
            analysed = false;
        }
    } else {
        s.validate_for_analysis();
    }
    const InitialData init = build_initial_data(s);
    const std::vector<double>& c = s.velocities;
    const std::size_t n = c.size();

    Report r;
    r.meta.scenario = s;
    r.meta.z0 = init.z0;
    r.meta.initial_distance = init.distance;
    r.meta.k = s.negative_count();
    r.meta.K = s.weight_scale();
    r.meta.peakons = init.train.size();
    r.meta.analysed = analysed;
    r.meta.sigma0 = analysed && r.meta.k < n ? sigma0(c, r.meta.k) : nan;
    if (analysed) r.meta.lambdas = s.lambdas.empty() ? default_lambdas(c, r.meta.k) : s.lambdas;

    const std::vector<double> times = s.output_times();
    Trajectory traj = integrate(init.train, s.t_end, s.rel_tol, s.abs_tol, times);
    r.times = traj.times;
    r.states = std::move(traj.states);
    r.integrator = traj.stats;
    if (!analysed) return r;

    const bool modulation = options.with_modulation || options.with_functionals;
    r.path.times = r.times;
    r.dist.reserve(r.size());
    std::vector<double> guess = init.z0;
    for (std::size_t m = 0; m < r.size(); ++m) {
        const double t = r.times[m];
        const PeakonTrain& state = r.states[m];
        std::vector<double> xt;
        std::vector<double> xmax;
        if (modulation) {
            if (m > 0) {
                const double dt = t - r.times[m - 1];
                for (std::size_t i = 0; i < n; ++i) guess[i] = r.path.xtilde[m - 1][i] + c[i] * dt;
            }
            const GridField f = sample_on_grid(state, analysis_grid(state, guess, s));
            ModulationResult mod = with_time(t, [&] { return modulate(f, c, guess); });
            xmax = with_time(t, [&] { return track_bumps(f, mod.x, s.L); });
            xt = std::move(mod.x);
            r.path.newton.push_back(mod.stats);
        } else {
            // Crest tracking around the free motion of the unperturbed train.
            std::vector<double> centre(n);
            for (std::size_t i = 0; i < n; ++i) centre[i] = init.z0[i] + c[i] * t;
            const GridField f = sample_on_grid(state, analysis_grid(state, centre, s));
            xmax = with_time(t, [&] { return track_bumps(f, centre, s.L); });
            xt = centre;
            r.path.newton.push_back({});
        }
        r.dist.push_back(h1_distance_to_train(state, c, xmax));
        r.path.xtilde.push_back(std::move(xt));
        r.path.xmax.push_back(std::move(xmax));
    }

    if (options.with_functionals) {
        const WeightProfile profile;
        const WeightFamily fam = build_weight_family(profile, r.meta.K, s, r.times, r.path.xtilde);
        r.samples.reserve(r.size());
        for (std::size_t m = 0; m < r.size(); ++m) {
            const GridField f = sample_on_grid(r.states[m], analysis_grid(r.states[m], r.path.xtilde[m], s));
            r.samples.push_back(localized_functionals(f, fam, m, r.meta.lambdas));
        }
    }
    return r;
}

bool MonotonicityResult::passed() const {
    return left_passed && std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.passed; });
}

MonotonicityResult verify_monotonicity(const Report& r, double C_mono) {
    MonotonicityResult out;
    const Scenario& s = r.meta.scenario;
    const double K = r.meta.K;
    out.tail = std::exp(-r.meta.sigma0 * s.L / (8.0 * K));
    if (r.samples.empty()) return out;
    const FunctionalSample& first = r.samples.front();
    for (std::size_t j = 0; j < first.I.size(); ++j) {
        for (std::size_t l = 0; l < r.meta.lambdas.size(); ++l) {
            MonotonicityEntry e;
            e.slot = j;
            e.lambda_index = l;
            e.lambda = r.meta.lambdas[l];
            e.worst_delta = -std::numeric_limits<double>::infinity();
            for (const FunctionalSample& smp : r.samples) e.worst_delta = std::max(e.worst_delta, smp.I[j][l] - first.I[j][l]);
            e.bound = C_mono * out.tail;
            e.passed = e.worst_delta <= e.bound;
            out.entries.push_back(e);
        }
    }
    if (r.meta.k == 0) {
        out.left_worst_delta = nan;
        out.left_bound = nan;
        return out;
    }
    // Itilde_k is the right functional of the reflected train, whose slowest
    // positive speed and gaps come from the antipeakons.
    std::vector<double> mirrored(s.velocities.rbegin(), s.velocities.rend());
    for (double& v : mirrored) v = -v;
    const double sigma_left = sigma0(mirrored, s.size() - r.meta.k);
    out.left_worst_delta = -std::numeric_limits<double>::infinity();
    for (const FunctionalSample& smp : r.samples) out.left_worst_delta = std::max(out.left_worst_delta, smp.Itilde - first.Itilde);
    out.left_bound = C_mono * std::exp(-sigma_left * s.L / (8.0 * K));
    out.left_passed = out.left_worst_delta <= out.left_bound;
    return out;
}

double theorem_scale(double epsilon, double L) { return std::sqrt(epsilon) + std::pow(L, -0.125); }
double drift_scale(double epsilon, double L) { return std::pow(epsilon, 0.25) + std::pow(L, -0.0625); }

BoundCheck verify_theorem2(const Report& r, double A) {
    BoundCheck b;
    for (double d : r.dist) b.value = std::max(b.value, d);
    b.bound = A * theorem_scale(r.meta.scenario.epsilon, r.meta.scenario.L);
    b.margin = b.bound - b.value;
    b.passed = b.value <= b.bound;
    return b;
}

BoundCheck verify_drift(const Report& r, double C) {
    BoundCheck b;
    for (const auto& row : drift_speeds(r.path, r.meta.scenario.velocities))
        for (double d : row) b.value = std::max(b.value, std::abs(d));
    b.bound = C * drift_scale(r.meta.scenario.epsilon, r.meta.scenario.L);
    b.margin = b.bound - b.value;
    b.passed = b.value <= b.bound;
    return b;
}

namespace {

double distance_to_amplitudes(const PeakonTrain& u, std::span<const double> lambda, std::span<const double> Q) {
    std::vector<double> w(u.p().begin(), u.p().end());
    std::vector<double> pos(u.q().begin(), u.q().end());
    for (std::size_t j = 0; j < lambda.size(); ++j) {
        w.push_back(-lambda[j]);
        pos.push_back(Q[j]);
    }
    return std::sqrt(std::max(h1_norm_squared(w, pos), 0.0));
}

CorollaryResult corollary_from_states(const std::vector<double>& times, const std::vector<PeakonTrain>& states,
                                      double gamma, double speed_tol, double settle_rate) {
    if (states.size() < 2) throw InvalidInput("corollary: need at least two stored states");
    CorollaryResult out;
    out.eigenvalues = eigenvalues_real(asymptotic_matrix(states.front()));

    const std::size_t last = states.size() - 1;
    std::vector<double> now = ode_rhs(states[last]).qdot;
    const std::vector<double> before = ode_rhs(states[last - 1]).qdot;
    const double span = times[last] - times[last - 1];
    for (std::size_t i = 0; i < now.size(); ++i)
        out.drift_rate = std::max(out.drift_rate, std::abs(now[i] - before[i]) / span);
    if (out.drift_rate > settle_rate) {
        throw NotSettled("speeds still drift by " + std::to_string(out.drift_rate) + " per unit time at t = " +
                             std::to_string(times[last]),
                         times[last]);
    }
    std::sort(now.begin(), now.end());
    out.terminal_speeds = now;
    for (std::size_t i = 0; i < now.size(); ++i)
        out.speed_error = std::max(out.speed_error, std::abs(now[i] - out.eigenvalues[i]));

    // Coordinate descent by golden-section search on one position at a time.
    const PeakonTrain& u = states[last];
    std::vector<double> Q(u.q().begin(), u.q().end());
    double best = distance_to_amplitudes(u, out.eigenvalues, Q);
    const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int sweep = 0; sweep < 100; ++sweep) {
        const double start = best;
        for (std::size_t j = 0; j < Q.size(); ++j) {
            auto at = [&](double x) {
                std::vector<double> trial = Q;
                trial[j] = x;
                return distance_to_amplitudes(u, out.eigenvalues, trial);
            };
            double a = Q[j] - 1.0;
            double b = Q[j] + 1.0;
            double x1 = b - golden * (b - a);
            double x2 = a + golden * (b - a);
            double f1 = at(x1);
            double f2 = at(x2);
            while (b - a > 1e-12) {
                if (f1 < f2) {
                    b = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = b - golden * (b - a);
                    f1 = at(x1);
                } else {
                    a = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = a + golden * (b - a);
                    f2 = at(x2);
                }
            }
            const double x = 0.5 * (a + b);
            const double fx = at(x);
            if (fx < best) {
                best = fx;
                Q[j] = x;
            }
        }
        if (start - best <= 1e-15 * std::max(1.0, start)) break;
    }
    out.fitted_positions = Q;
    out.distance = best;
    out.passed = out.speed_error <= speed_tol && out.distance <= gamma;
    return out;
}

}  // namespace

CorollaryResult verify_corollary(const Report& r, double gamma, double speed_tol, double settle_rate) {
    return corollary_from_states(r.times, r.states, gamma, speed_tol, settle_rate);
}

CorollaryResult verify_corollary(const PeakonTrain&, const Trajectory& traj, double gamma, double speed_tol,
                                 double settle_rate) {
    return corollary_from_states(traj.times, traj.states, gamma, speed_tol, settle_rate);
}

std::vector<std::string> flag_names() {
    return {"energy", "f-drift", "theorem", "monotonicity", "drift", "bookkeeping", "corollary"};
}

std::vector<Flag> evaluate_flags(const Report& r, const Constants& constants, bool with_corollary) {
    const Scenario& s = r.meta.scenario;
    std::vector<Flag> flags;
    if (r.size() == 0) return flags;

    {
        Flag f{"energy", false, 0.0, 10.0 * s.rel_tol, "relative drift of the closed-form E"};
        const double e0 = hamiltonian(r.states.front());
        for (const PeakonTrain& st : r.states) f.value = std::max(f.value, std::abs(hamiltonian(st) - e0) / std::abs(e0));
        f.passed = f.value <= f.bound;
        flags.push_back(f);
    }
    if (!r.samples.empty()) {
        // Trapezoid error of F on a peakon of height c is about h^2 |c|^3.
        double cubes = 0.0;
        for (double p : r.states.front().p()) cubes += std::abs(p * p * p);
        const double f0 = r.samples.front().F;
        Flag f{"f-drift", false, 0.0, 2.0 * s.grid_h * s.grid_h * cubes + 10.0 * s.rel_tol * std::abs(f0),
               "max |F(t) - F(0)| on the grid"};
        for (const FunctionalSample& smp : r.samples) f.value = std::max(f.value, std::abs(smp.F - f0));
        f.passed = f.value <= f.bound;
        flags.push_back(f);
    }
    if (!r.meta.analysed || r.path.xtilde.empty()) return flags;
    {
        const BoundCheck b = verify_theorem2(r, constants.A);
        flags.push_back({"theorem", b.passed, b.value, b.bound, "sup_t H1 distance to the tracked train"});
    }
    if (!r.samples.empty() && r.meta.k < s.size()) {
        const MonotonicityResult m = verify_monotonicity(r, constants.C_mono);
        Flag f{"monotonicity", m.passed(), -std::numeric_limits<double>::infinity(), 0.0, ""};
        for (const MonotonicityEntry& e : m.entries) {
            if (e.worst_delta > f.value) {
                f.value = e.worst_delta;
                f.bound = e.bound;
                f.detail = "worst at j = " + std::to_string(r.meta.k + e.slot + 1) + ", lambda = " + std::to_string(e.lambda);
            }
        }
        if (r.meta.k > 0) f.detail += "; left " + std::to_string(m.left_worst_delta) + " <= " + std::to_string(m.left_bound);
        flags.push_back(f);
    }
    if (!r.path.xtilde.empty() && !r.path.newton.empty()) {
        const BoundCheck b = verify_drift(r, constants.C_drift);
        flags.push_back({"drift", b.passed, b.value, b.bound, "max |d/dt xtilde_i - c_i|"});
    }
    const std::size_t l0 = zero_lambda(r.meta.lambdas);
    if (!r.samples.empty() && l0 < r.meta.lambdas.size() && !r.samples.front().I.empty()) {
        const double e0 = hamiltonian(r.states.front());
        Flag f{"bookkeeping", false, -std::numeric_limits<double>::infinity(),
               (s.grid_h * s.grid_h + 10.0 * s.rel_tol) * e0, "max (Itilde_k + I_{k+1,0}) - E(u0)"};
        for (const FunctionalSample& smp : r.samples) {
            const double left = std::isnan(smp.Itilde) ? 0.0 : smp.Itilde;
            f.value = std::max(f.value, left + smp.I[0][l0] - e0);
        }
        f.passed = f.value <= f.bound;
        flags.push_back(f);
    }
    if (with_corollary) {
        Flag f{"corollary", false, 0.0, constants.gamma, ""};
        try {
            const CorollaryResult c = verify_corollary(r, constants.gamma);
            f.value = c.distance;
            f.passed = c.passed;
            f.detail = "speed error " + std::to_string(c.speed_error);
        } catch (const NotSettled& e) {
            f.detail = e.what();
        }
        flags.push_back(f);
    }
    return flags;
}

SweepResult sweep(const Scenario& base, std::span<const double> epsilons, std::span<const double> Ls, double A,
                  unsigned jobs) {
    SweepResult out;
    out.cells.resize(epsilons.size() * Ls.size());
    for (std::size_t a = 0; a < epsilons.size(); ++a) {
        for (std::size_t b = 0; b < Ls.size(); ++b) {
            out.cells[a * Ls.size() + b].epsilon = epsilons[a];
            out.cells[a * Ls.size() + b].L = Ls[b];
        }
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < out.cells.size(); i = next++) {
            SweepCell& cell = out.cells[i];
            Scenario s = base;
            s.epsilon = cell.epsilon;
            s.L = cell.L;
            try {
                const Report r = run_experiment(s, {.with_functionals = false, .with_modulation = true});
                const BoundCheck t = verify_theorem2(r, A);
                cell.sup_dist = t.value;
                cell.bound = t.bound;
                cell.margin = t.margin;
                cell.passed = t.passed;
                cell.drift = verify_drift(r, 0.0).value;
            } catch (const Error& e) {
                cell.error = e.what();
            }
        }
    };
    const unsigned count = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(out.cells.size())));
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < count; ++w) pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool) t.join();

    for (const SweepCell& cell : out.cells) {
        if (!cell.error.empty()) continue;
        out.fitted_A = std::max(out.fitted_A, cell.sup_dist / theorem_scale(cell.epsilon, cell.L));
        out.fitted_C_drift = std::max(out.fitted_C_drift, cell.drift / drift_scale(cell.epsilon, cell.L));
    }
    return out;
}

}  // namespace peakonlab
