#pragma once

#include "pairlink/model.hpp"
#include "pairlink/stats.hpp"

namespace pairlink {

/// Timing information available to Alice and Bob. GlobalRef: absolute
/// emission timing is known, both sides filter their own clicks before the
/// coincidence search. MutualRefOnly: only the difference of detection
/// times can be used; the per-pair time slot is set by the repetition rate.
enum class Scenario { GlobalRef, MutualRefOnly };

/// Full widths of the acceptance windows [s]. tau1_win/tau2_win are the
/// per-side (unheralded) windows, tau1h_win/tau2h_win the coincidence
/// windows used during basis reconciliation.
struct WindowSet {
    double tau1_win = 0.0;
    double tau2_win = 0.0;
    double tau1h_win = 0.0;
    double tau2h_win = 0.0;
};

/// Dark-count capture probabilities for each window.
struct DarkProbs {
    double p1 = 0.0;
    double p2 = 0.0;
    double p1h = 0.0;
    double p2h = 0.0;
};

struct KeyRateResult {
    double p_exp = 0.0;          // both sides accept an emitted pair
    double qber = 0.0;           // error ratio in the sifted key
    double key_rate = 0.0;       // secure bits per emitted pair
    double transmittance = 0.0;  // one-arm fiber transmittance
    WindowSet windows;
    DarkProbs dark_probs;
};

/// One-arm power transmittance 10^(-alpha L / 10), alpha in dB/km.
double transmittance(const FiberSpec& fiber);

/// Acceptance windows for the given scenario, jitter included in quadrature.
/// GlobalRef: per-side windows m*sqrt(tau1^2 + tj^2), coincidence windows
/// m*sqrt(tau1h^2 + 2 tj^2). MutualRefOnly: per-side window is the 1/r time
/// slot, coincidence windows m*sqrt(tau_dt^2 + 2 tj^2). m is the config's
/// window_multiplier (6 captures 99.73% of a Gaussian arrival).
WindowSet detection_windows(const LinkConfig& config, Scenario scenario);

/// Probability of at least one dark count inside a window: 2 d tau.
/// Valid only while small; refuses when 2 d tau > 0.1.
double dark_count_probability(double dark_rate, double window);

/// Probability that an emitted pair is accepted:
/// T^2 + T(1-T)(P1h + P2h) + (1-T)^2 P1 P2h.
double acceptance_probability(double transmittance, const DarkProbs& darks);

/// QBER given the acceptance probability: (p_exp - T^2) / (2 p_exp).
double qber(double p_exp, double transmittance);

/// Binary Shannon entropy with H(0) = H(1) = 0 by continuity.
double binary_entropy(double q);

/// Secure key fraction per emitted pair: p_exp * max(0, 1 - 2 H(Q)).
KeyRateResult key_rate(const LinkConfig& config, Scenario scenario);

struct MaxDistance {
    double length_m = 0.0;
    bool unbounded = false;  // no dark counts: key rate stays positive at any L
};

/// Largest fiber length with a positive key rate, found by bisection on the
/// monotone tail to +/- 10 m. Requires a positive rate at L = 0.
MaxDistance max_secure_distance(const LinkConfig& config, Scenario scenario);

}  // namespace pairlink
