#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "pairlink/qkd.hpp"
#include "pairlink/rng.hpp"

namespace pairlink {

/// One simulated emission: the clicks each side accepted (if any), whether
/// the event entered the key, and whether an accepted click was a dark count.
struct TrialOutcome {
    std::optional<double> alice_click;
    std::optional<double> bob_click;
    bool accepted = false;
    bool error = false;          // accepted with at least one dark click selected
    bool alice_click_dark = false;
    bool bob_click_dark = false;
    bool alice_photon_lost = false;
    bool bob_photon_lost = false;
};

/// Aggregated estimates with binomial standard errors.
struct McReport {
    uint64_t n_trials = 0;
    uint64_t seed = 0;
    uint64_t accepted = 0;
    uint64_t bit_errors = 0;
    double p_exp_hat = 0.0;
    double p_exp_se = 0.0;
    double qber_hat = 0.0;
    double qber_se = 0.0;

    std::string to_json() const;
};

/// Detection-time pair drawn from |psi_L|^2: a bivariate normal with the
/// closed-form marginal widths and Pearson coefficient.
std::pair<double, double> sample_pair_times(const BiphotonState& state, Rng& rng);

/// One emission under the full protocol: per-photon Bernoulli(T) survival,
/// Gaussian detector jitter, Poisson dark counts in every open window,
/// earliest in-window click wins, scenario-specific coincidence filtering
/// (GlobalRef centers the coincidence window on the conditional mean).
TrialOutcome run_trial(const LinkConfig& config, Scenario scenario,
                       const BiphotonState& state, const WindowSet& windows,
                       double transmittance, double jitter_sigma, Rng& rng);

/// n independent trials; trials are processed in fixed-size chunks with
/// counter-derived RNG streams, so the report does not depend on the worker
/// count and is bit-identical for a given seed.
McReport run_trials(const LinkConfig& config, Scenario scenario, uint64_t n,
                    uint64_t seed, unsigned workers = 0);

}  // namespace pairlink
