#include "peakonlab/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "peakonlab/errors.hpp"

namespace peakonlab {

std::string_view to_string(PerturbationMode mode) {
    switch (mode) {
        case PerturbationMode::amplitude_jitter: return "amplitude-jitter";
        case PerturbationMode::position_jitter: return "position-jitter";
        case PerturbationMode::extra_small_peakons: return "extra-small-peakons";
        case PerturbationMode::mixed: return "mixed";
    }
    return "amplitude-jitter";
}

PerturbationMode parse_perturbation_mode(std::string_view text) {
    for (auto mode : {PerturbationMode::amplitude_jitter, PerturbationMode::position_jitter,
                      PerturbationMode::extra_small_peakons, PerturbationMode::mixed}) {
        if (text == to_string(mode)) return mode;
    }
    throw InvalidScenario("unknown perturbation mode '" + std::string(text) + "'");
}

namespace {

void check_velocities(const Scenario& s) {
    const auto& c = s.velocities;
    if (c.empty()) throw InvalidScenario("velocities: at least one velocity is required");
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (!std::isfinite(c[i])) throw InvalidScenario("velocities: non-finite entry");
        if (c[i] == 0.0) throw InvalidScenario("velocities: zero velocity at index " + std::to_string(i + 1));
        if (i > 0 && !(c[i - 1] < c[i])) {
            throw InvalidScenario("velocities: not strictly increasing at index " + std::to_string(i + 1) +
                                  " (c_" + std::to_string(i) + " >= c_" + std::to_string(i + 1) + ")");
        }
    }
    if (s.k && *s.k != s.negative_count()) {
        throw InvalidScenario("k = " + std::to_string(*s.k) + " does not match the sign change of the velocities (" +
                              std::to_string(s.negative_count()) + " negative)");
    }
}

}  // namespace

std::size_t Scenario::negative_count() const noexcept {
    return static_cast<std::size_t>(std::count_if(velocities.begin(), velocities.end(), [](double c) { return c < 0.0; }));
}

double Scenario::weight_scale() const noexcept { return K ? *K : std::sqrt(L) / 8.0; }

void Scenario::validate() const {
    if (explicit_train) {
        if (!velocities.empty() && velocities.size() != explicit_train->size()) {
            throw InvalidScenario("velocities and explicit train differ in length");
        }
    } else {
        check_velocities(*this);
    }
    if (!(L > 0.0) || !std::isfinite(L)) throw InvalidScenario("L must be positive");
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw InvalidScenario("epsilon must be >= 0");
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw InvalidScenario("t_end must be positive");
    if (!(grid_h > 0.0) || !std::isfinite(grid_h)) throw InvalidScenario("grid_h must be positive");
    if (!(grid_pad > 0.0) || !std::isfinite(grid_pad)) throw InvalidScenario("grid_pad must be positive");
    if (samples < 3) throw InvalidScenario("samples must be at least 3");
    if (!(rel_tol > 0.0 && rel_tol <= 1e-2)) throw InvalidScenario("rel_tol must lie in (0, 1e-2]");
    if (!(abs_tol > 0.0 && abs_tol <= 1e-2)) throw InvalidScenario("abs_tol must lie in (0, 1e-2]");
    if (K && (!(*K > 0.0) || !std::isfinite(*K))) throw InvalidScenario("K must be positive");
    if (max_attempts == 0) throw InvalidScenario("max_attempts must be positive");
    for (double l : lambdas) {
        if (!std::isfinite(l) || l < 0.0) throw InvalidScenario("lambda values must be finite and >= 0");
    }
}

void Scenario::validate_for_analysis() const {
    validate();
    check_velocities(*this);
    const std::size_t k = negative_count();
    if (!lambdas.empty()) {
        if (k == velocities.size()) throw InvalidScenario("lambda list given but no positive velocity");
        const double lmax = 2.0 / velocities[k];
        for (double l : lambdas) {
            if (l > lmax * (1.0 + 1e-12)) {
                throw InvalidScenario("lambda " + std::to_string(l) + " outside [0, 2/c_{k+1}] = [0, " +
                                      std::to_string(lmax) + "]");
            }
        }
    }
}

std::vector<double> Scenario::output_times() const {
    std::vector<double> t(samples);
    for (std::size_t m = 0; m < samples; ++m) {
        t[m] = t_end * static_cast<double>(m) / static_cast<double>(samples - 1);
    }
    t.back() = t_end;
    return t;
}

std::vector<double> base_positions(std::size_t n, double L) {
    std::vector<double> z(n);
    const double mid = 0.5 * static_cast<double>(n - 1);
    for (std::size_t j = 0; j < n; ++j) z[j] = (static_cast<double>(j) - mid) * L;
    return z;
}

namespace {

// Raw perturbation direction; scaled by tau before use.
struct Draw {
    std::vector<double> amp;    // added to c_j
    std::vector<double> shift;  // added to z_j
    std::vector<double> extra_q;
    std::vector<double> extra_p;
};

Draw draw_perturbation(const Scenario& s, const std::vector<double>& z, double separator, double jitter,
                       std::mt19937_64& rng) {
    const std::size_t n = s.size();
    std::uniform_real_distribution<double> sym(-1.0, 1.0);
    std::uniform_real_distribution<double> mag(0.5, 1.0);
    const bool amp = s.perturbation == PerturbationMode::amplitude_jitter || s.perturbation == PerturbationMode::mixed;
    const bool pos = s.perturbation == PerturbationMode::position_jitter || s.perturbation == PerturbationMode::mixed;
    const bool extra =
        s.perturbation == PerturbationMode::extra_small_peakons || s.perturbation == PerturbationMode::mixed;

    Draw d;
    d.amp.assign(n, 0.0);
    d.shift.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        if (amp) d.amp[j] = jitter * std::abs(s.velocities[j]) * sym(rng);
        if (pos) d.shift[j] = jitter * sym(rng);
    }
    if (extra) {
        std::vector<double> sites;
        sites.push_back(z.front() - 0.5 * s.L);
        for (std::size_t j = 0; j + 1 < n; ++j) sites.push_back(0.5 * (z[j] + z[j + 1]));
        sites.push_back(z.back() + 0.5 * s.L);
        for (double site : sites) {
            double x = site + 0.125 * s.L * sym(rng);
            if (x == separator) x += 1e-3 * s.L;
            d.extra_q.push_back(x);
            d.extra_p.push_back((x < separator ? -1.0 : 1.0) * jitter * mag(rng));
        }
    }
    return d;
}

std::optional<PeakonTrain> assemble(const Scenario& s, const std::vector<double>& z, const Draw& d, double tau) {
    std::vector<std::pair<double, double>> atoms;  // (q, p)
    for (std::size_t j = 0; j < s.size(); ++j) {
        atoms.emplace_back(z[j] + tau * d.shift[j], s.velocities[j] + tau * d.amp[j]);
    }
    for (std::size_t m = 0; m < d.extra_q.size(); ++m) atoms.emplace_back(d.extra_q[m], tau * d.extra_p[m]);
    std::sort(atoms.begin(), atoms.end());
    std::vector<double> p, q;
    for (const auto& [qq, pp] : atoms) {
        q.push_back(qq);
        p.push_back(pp);
    }
    try {
        PeakonTrain t(std::move(p), std::move(q));
        if (!t.sign_ordered()) return std::nullopt;
        return t;
    } catch (const InvalidTrain&) {
        return std::nullopt;
    }
}

bool is_linear(PerturbationMode mode) {
    return mode == PerturbationMode::amplitude_jitter || mode == PerturbationMode::extra_small_peakons;
}

}  // namespace

InitialData build_initial_data(const Scenario& s) {
    s.validate();
    if (s.explicit_train) {
        return {*s.explicit_train, std::vector<double>(s.explicit_train->q().begin(), s.explicit_train->q().end()),
                s.explicit_train->sign_separator(), 0.0, 1};
    }
    const std::size_t n = s.size();
    const std::vector<double> z = base_positions(n, s.L);
    const PeakonTrain exact(s.velocities, z);
    const double separator = exact.sign_separator();
    if (s.epsilon == 0.0) return {exact, z, separator, 0.0, 1};

    const double target = s.epsilon * s.epsilon;
    std::mt19937_64 rng(s.seed);
    double jitter = 1.0;
    for (std::size_t attempt = 1; attempt <= s.max_attempts; ++attempt, jitter *= 0.5) {
        const Draw d = draw_perturbation(s, z, separator, jitter, rng);
        auto distance_at = [&](double tau) -> std::optional<std::pair<PeakonTrain, double>> {
            auto t = assemble(s, z, d, tau);
            if (!t) return std::nullopt;
            const double dist = h1_distance(*t, exact);
            return std::make_pair(std::move(*t), dist);
        };

        if (is_linear(s.perturbation)) {
            // delta depends linearly on tau: hit epsilon^2 in one step.
            auto unit = distance_at(1.0);
            if (unit && unit->second > 0.0) {
                double tau = target / unit->second;
                for (int shrink = 0; shrink < 8; ++shrink, tau *= 1.0 - 1e-12) {
                    auto r = distance_at(tau);
                    if (!r) break;
                    if (r->second <= target) return {std::move(r->first), z, separator, r->second, attempt};
                }
            }
            continue;
        }

        // Position shifts enter nonlinearly (the distance grows like sqrt(tau)):
        // bracket and bisect in log(tau) for the largest admissible tau.
        double lo = 0.0;
        double hi = 1.0;
        std::optional<std::pair<PeakonTrain, double>> best;
        auto r = distance_at(hi);
        if (r && r->second <= target) {
            best = std::move(r);
            lo = hi;
        } else {
            double probe = hi;
            for (int i = 0; i < 80 && !best; ++i) {
                probe *= 0.25;
                auto rp = distance_at(probe);
                if (rp && rp->second <= target) {
                    best = std::move(rp);
                    lo = probe;
                    hi = probe * 4.0;
                }
            }
            for (int i = 0; i < 60 && best; ++i) {
                const double mid = std::sqrt(lo * hi);
                auto rm = distance_at(mid);
                if (rm && rm->second <= target) {
                    best = std::move(rm);
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
        }
        if (best) return {std::move(best->first), z, separator, best->second, attempt};
    }
    throw SignOrderViolation("could not build a sign-ordered perturbed train within " +
                             std::to_string(s.max_attempts) + " attempts");
}

PeakonTrain build_perturbed_scenario(const Scenario& s) { return build_initial_data(s).train; }

}  // namespace peakonlab
