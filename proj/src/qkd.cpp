#include "pairlink/qkd.hpp"

#include <cmath>
#include <limits>

#include "pairlink/biphoton.hpp"

namespace pairlink {

double transmittance(const FiberSpec& fiber) {
    return std::pow(10.0, -fiber.alpha_db_km * (fiber.length_m / 1000.0) / 10.0);
}

WindowSet detection_windows(const LinkConfig& config, Scenario scenario) {
    validate(config);
    const BiphotonState state = make_state(config);
    const double tj = fwhm_to_sigma(config.detector.jitter_fwhm_s);
    const double m = config.window_multiplier;

    WindowSet w;
    if (scenario == Scenario::GlobalRef) {
        w.tau1_win = m * widen_by_jitter(unheralded_width(state, 1), tj, 1);
        w.tau2_win = m * widen_by_jitter(unheralded_width(state, 2), tj, 1);
        w.tau1h_win = m * widen_by_jitter(heralded_width(state, 1), tj, 2);
        w.tau2h_win = m * widen_by_jitter(heralded_width(state, 2), tj, 2);
    } else {
        const double slot = 1.0 / config.detector.rep_rate_hz;
        const double coincidence = m * widen_by_jitter(difference_width(state), tj, 2);
        w.tau1_win = slot;
        w.tau2_win = slot;
        w.tau1h_win = coincidence;  // difference width is symmetric in the photons
        w.tau2h_win = coincidence;
    }
    return w;
}

double dark_count_probability(double dark_rate, double window) {
    if (!(dark_rate >= 0.0)) throw validation_error("dark_rate: must be >= 0");
    if (!(window > 0.0)) throw validation_error("window: must be > 0");
    const double p = 2.0 * dark_rate * window;
    if (p > 0.1)
        throw numeric_guard_error("dark-count probability 2*d*tau = " + std::to_string(p) +
                                  " exceeds 0.1; the linearized model is invalid here");
    return p;
}

double acceptance_probability(double transmittance, const DarkProbs& darks) {
    const double t = transmittance;
    return t * t + t * (1.0 - t) * (darks.p1h + darks.p2h) + (1.0 - t) * (1.0 - t) * darks.p1 * darks.p2h;
}

double qber(double p_exp, double transmittance) {
    const double t2 = transmittance * transmittance;
    if (p_exp < t2)
        throw numeric_guard_error("qber: p_exp < T^2, inconsistent acceptance probability");
    if (!(p_exp > 0.0)) throw numeric_guard_error("qber: p_exp must be positive");
    return (p_exp - t2) / (2.0 * p_exp);
}

double binary_entropy(double q) {
    if (q < 0.0 || q > 1.0) throw validation_error("binary_entropy: q must lie in [0, 1]");
    if (q == 0.0 || q == 1.0) return 0.0;
    return -q * std::log2(q) - (1.0 - q) * std::log2(1.0 - q);
}

KeyRateResult key_rate(const LinkConfig& config, Scenario scenario) {
    validate(config);
    KeyRateResult r;
    r.transmittance = transmittance(config.fiber);
    r.windows = detection_windows(config, scenario);
    const double d = config.detector.dark_rate_hz;
    r.dark_probs.p1 = dark_count_probability(d, r.windows.tau1_win);
    r.dark_probs.p2 = dark_count_probability(d, r.windows.tau2_win);
    r.dark_probs.p1h = dark_count_probability(d, r.windows.tau1h_win);
    r.dark_probs.p2h = dark_count_probability(d, r.windows.tau2h_win);
    r.p_exp = acceptance_probability(r.transmittance, r.dark_probs);
    r.qber = qber(r.p_exp, r.transmittance);
    r.key_rate = r.p_exp * std::max(0.0, 1.0 - 2.0 * binary_entropy(r.qber));
    return r;
}

MaxDistance max_secure_distance(const LinkConfig& config, Scenario scenario) {
    validate(config);
    auto rate_at = [&](double length) {
        LinkConfig c = config;
        c.fiber.length_m = length;
        return key_rate(c, scenario).key_rate;
    };

    if (!(rate_at(0.0) > 0.0))
        throw numeric_guard_error("max_secure_distance: no secure operation even at L = 0");

    if (config.detector.dark_rate_hz == 0.0)
        return MaxDistance{std::numeric_limits<double>::infinity(), true};

    double lo = 0.0, hi = 1000.0;
    const double cap = 1e8;  // 1e5 km; far beyond any single sign change of interest
    while (rate_at(hi) > 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > cap) return MaxDistance{std::numeric_limits<double>::infinity(), true};
    }
    while ((hi - lo) > 10.0) {
        const double mid = 0.5 * (lo + hi);
        (rate_at(mid) > 0.0 ? lo : hi) = mid;
    }
    return MaxDistance{0.5 * (lo + hi), false};
}

}  // namespace pairlink
