#include "pairlink/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>
#include <vector>

#include <json.hpp>

#include "pairlink/biphoton.hpp"

namespace pairlink {

std::pair<double, double> sample_pair_times(const BiphotonState& state, Rng& rng) {
    const double tau_a = unheralded_width(state, 1);
    const double tau_b = unheralded_width(state, 2);
    const double r = temporal_pearson(state);
    const double z1 = rng.normal();
    const double z2 = rng.normal();
    const double t1 = tau_a * z1;
    const double t2 = tau_b * (r * z1 + std::sqrt(1.0 - r * r) * z2);
    return {t1, t2};
}

namespace {

struct Click {
    double t = 0.0;
    bool dark = false;
};

// Clicks a station retains: its photon when it lands inside the filter
// window, plus dark counts over the window (Poisson, two detectors).
void station_clicks(std::optional<double> photon_time, double center, double width,
                    double dark_rate, Rng& rng, std::vector<Click>& out) {
    out.clear();
    if (photon_time && std::abs(*photon_time - center) <= 0.5 * width)
        out.push_back({*photon_time, false});
    const uint32_t n_dark = rng.poisson(2.0 * dark_rate * width);
    for (uint32_t k = 0; k < n_dark; ++k)
        out.push_back({center + (rng.uniform() - 0.5) * width, true});
}

const Click* earliest(const std::vector<Click>& clicks, double center, double width) {
    const Click* best = nullptr;
    for (const auto& c : clicks)
        if (std::abs(c.t - center) <= 0.5 * width && (!best || c.t < best->t)) best = &c;
    return best;
}

}  // namespace

TrialOutcome run_trial(const LinkConfig& config, Scenario scenario,
                       const BiphotonState& state, const WindowSet& windows,
                       double transmittance, double jitter_sigma, Rng& rng) {
    thread_local std::vector<Click> alice_clicks, bob_clicks;

    TrialOutcome out;
    const auto [t1, t2] = sample_pair_times(state, rng);

    out.alice_photon_lost = !rng.bernoulli(transmittance);
    out.bob_photon_lost = !rng.bernoulli(transmittance);
    std::optional<double> a_photon, b_photon;
    if (!out.alice_photon_lost)
        a_photon = jitter_sigma > 0.0 ? t1 + jitter_sigma * rng.normal() : t1;
    if (!out.bob_photon_lost)
        b_photon = jitter_sigma > 0.0 ? t2 + jitter_sigma * rng.normal() : t2;

    const double d = config.detector.dark_rate_hz;

    // Per-side retention: expected-arrival window (GlobalRef) or the
    // repetition-rate time slot (MutualRefOnly), centered on the nominal
    // arrival in the co-moving frame.
    station_clicks(a_photon, 0.0, windows.tau1_win, d, rng, alice_clicks);
    station_clicks(b_photon, 0.0, windows.tau2_win, d, rng, bob_clicks);

    const Click* bob = earliest(bob_clicks, 0.0, windows.tau2_win);
    if (!bob) return out;
    out.bob_click = bob->t;
    out.bob_click_dark = bob->dark;

    const Click* alice = nullptr;
    if (scenario == Scenario::GlobalRef) {
        // Bob announces his time; Alice searches her retained clicks inside
        // the coincidence window centered on the conditional mean.
        const double center = conditional_mean_shift(state, bob->t);
        alice = earliest(alice_clicks, center, windows.tau1h_win);
    } else {
        // Only the click-time difference is usable.
        alice = earliest(alice_clicks, 0.0, windows.tau1_win);
        if (alice && std::abs(bob->t - alice->t) > 0.5 * windows.tau1h_win) alice = nullptr;
    }
    if (!alice) return out;

    out.alice_click = alice->t;
    out.alice_click_dark = alice->dark;
    out.accepted = true;
    out.error = out.alice_click_dark || out.bob_click_dark;
    return out;
}

namespace {

constexpr uint64_t kChunk = 1 << 14;

struct Counts {
    uint64_t accepted = 0;
    uint64_t errors = 0;  // bit errors after the fair-coin rule for dark clicks
};

Counts run_chunk(const LinkConfig& config, Scenario scenario, const BiphotonState& state,
                 const WindowSet& windows, double t, double tj,
                 uint64_t seed, uint64_t chunk_index, uint64_t count) {
    Rng rng = Rng::stream(seed, chunk_index);
    Counts c;
    for (uint64_t i = 0; i < count; ++i) {
        const TrialOutcome out = run_trial(config, scenario, state, windows, t, tj, rng);
        if (out.accepted) {
            ++c.accepted;
            // a dark count gives the correct bit half the time
            if (out.error && rng.bernoulli(0.5)) ++c.errors;
        }
    }
    return c;
}

}  // namespace

McReport run_trials(const LinkConfig& config, Scenario scenario, uint64_t n,
                    uint64_t seed, unsigned workers) {
    validate(config);
    if (n < 10000) throw validation_error("n: need at least 1e4 trials");

    const BiphotonState state = make_state(config);
    const WindowSet windows = detection_windows(config, scenario);
    const double t = transmittance(config.fiber);
    const double tj = fwhm_to_sigma(config.detector.jitter_fwhm_s);
    // guard region matches the analytic model's validity
    (void)dark_count_probability(config.detector.dark_rate_hz, windows.tau1_win);
    (void)dark_count_probability(config.detector.dark_rate_hz, windows.tau1h_win);

    const uint64_t n_chunks = (n + kChunk - 1) / kChunk;
    std::vector<Counts> results(n_chunks);

    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<uint64_t>(workers, n_chunks));

    std::atomic<uint64_t> next{0};
    auto drain = [&]() {
        uint64_t c;
        while ((c = next.fetch_add(1)) < n_chunks) {
            const uint64_t count = std::min(kChunk, n - c * kChunk);
            results[c] = run_chunk(config, scenario, state, windows, t, tj, seed, c, count);
        }
    };
    if (workers <= 1) {
        drain();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(drain);
        for (auto& th : pool) th.join();
    }

    McReport rep;
    rep.n_trials = n;
    rep.seed = seed;
    for (const auto& c : results) {
        rep.accepted += c.accepted;
        rep.bit_errors += c.errors;
    }
    const double nn = static_cast<double>(n);
    rep.p_exp_hat = static_cast<double>(rep.accepted) / nn;
    rep.p_exp_se = std::sqrt(rep.p_exp_hat * (1.0 - rep.p_exp_hat) / nn);
    if (rep.accepted > 0) {
        const double na = static_cast<double>(rep.accepted);
        rep.qber_hat = static_cast<double>(rep.bit_errors) / na;
        rep.qber_se = std::sqrt(rep.qber_hat * (1.0 - rep.qber_hat) / na);
    }
    return rep;
}

std::string McReport::to_json() const {
    nlohmann::json j;
    j["n_trials"] = n_trials;
    j["seed"] = seed;
    j["accepted"] = accepted;
    j["bit_errors"] = bit_errors;
    j["p_exp_hat"] = p_exp_hat;
    j["p_exp_se"] = p_exp_se;
    j["qber_hat"] = qber_hat;
    j["qber_se"] = qber_se;
    return j.dump(2);
}

}  // namespace pairlink
