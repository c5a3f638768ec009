#include "pairlink/stats.hpp"

#include <cmath>

namespace pairlink {

namespace {

// Widths of photon 1 and 2 swap roles by swapping sigmas.
BiphotonState swapped(const BiphotonState& state) {
    BiphotonState s = state;
    std::swap(s.source.sigma1, s.source.sigma2);
    return s;
}

void check_photon_index(int which) {
    if (which != 1 && which != 2)
        throw validation_error("which_photon: must be 1 or 2");
}

}  // namespace

double temporal_pearson(const BiphotonState& state) {
    const double s1 = state.source.sigma1, s2 = state.source.sigma2, rho = state.source.rho;
    const double fm = dispersion_factor(-s1 * s1 * s2 * s2, state);
    const double f1 = dispersion_factor(s1 * s1 * s1 * s1, state);
    const double f2 = dispersion_factor(s2 * s2 * s2 * s2, state);
    return -rho * fm / std::sqrt(f1 * f2);
}

double zero_correlation_length(const SourceSpec& source, double beta) {
    const double c = 1.0 - source.rho * source.rho;
    if (!(c > 0.0)) throw validation_error("rho: degenerate correlation, |rho| must be < 1");
    if (beta == 0.0) throw validation_error("beta: must be nonzero for a sign-change length");
    return 1.0 / (2.0 * source.sigma1 * source.sigma2 * std::abs(beta) * std::sqrt(c));
}

double saturation_length_95(const SourceSpec& source, double beta) {
    const double rho = source.rho;
    if (rho == 0.0) throw validation_error("rho: saturation contour undefined at rho = 0");
    const double l0 = zero_correlation_length(source, beta);
    const double target = 0.95 * rho;
    auto resid = [&](double length) {
        return temporal_pearson(BiphotonState{source, beta, length}) - target;
    };
    // pearson passes through 0 at l0 and rises monotonically toward rho
    double lo = l0, hi = 1e6 * l0;
    if (!(resid(lo) < 0.0) || !(resid(hi) > 0.0))
        throw numeric_guard_error("saturation length: bracket failed");
    while ((hi - lo) > 1e-9 * hi) {
        const double mid = 0.5 * (lo + hi);
        (resid(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double unheralded_width(const BiphotonState& state, int which_photon) {
    check_photon_index(which_photon);
    const double s = which_photon == 1 ? state.source.sigma1 : state.source.sigma2;
    const double c = 1.0 - state.source.rho * state.source.rho;
    const double bl = state.beta * state.length;
    return std::sqrt(2.0 * s * s * bl * bl + 1.0 / (2.0 * s * s * c));
}

double heralded_width(const BiphotonState& state, int which_photon) {
    check_photon_index(which_photon);
    const BiphotonState s = which_photon == 1 ? state : swapped(state);
    const double s1 = s.source.sigma1, s2 = s.source.sigma2;
    const double bl = s.beta * s.length;
    const double fm = dispersion_factor(-s1 * s1 * s2 * s2, s);
    const double f2 = dispersion_factor(s2 * s2 * s2 * s2, s);
    const double sum = s1 * s1 + s2 * s2;
    return std::sqrt((fm * fm + 4.0 * bl * bl * sum * sum) / (2.0 * s1 * s1 * f2));
}

double difference_width(const BiphotonState& state) {
    const double s1 = state.source.sigma1, s2 = state.source.sigma2, rho = state.source.rho;
    const double c = 1.0 - rho * rho;
    if (!(c > 0.0)) throw validation_error("rho: degenerate correlation, |rho| must be < 1");
    const double fp = dispersion_factor(s1 * s1 * s2 * s2, state);
    const double fm = dispersion_factor(-s1 * s1 * s2 * s2, state);
    const double num = (s1 * s1 + s2 * s2) * fp + 2.0 * s1 * s2 * rho * fm;
    return std::sqrt(num / (2.0 * s1 * s1 * s2 * s2 * c));
}

double conditional_mean_shift(const BiphotonState& state, double t2_known) {
    const double s1 = state.source.sigma1, s2 = state.source.sigma2, rho = state.source.rho;
    const double fm = dispersion_factor(-s1 * s1 * s2 * s2, state);
    const double f2 = dispersion_factor(s2 * s2 * s2 * s2, state);
    return -t2_known * rho * s2 * fm / (s1 * f2);
}

double widen_by_jitter(double width, double jitter_sigma, int n_detectors) {
    if (!(width >= 0.0)) throw validation_error("width: must be >= 0");
    if (!(jitter_sigma >= 0.0)) throw validation_error("jitter_sigma: must be >= 0");
    if (n_detectors != 1 && n_detectors != 2) throw validation_error("n_detectors: must be 1 or 2");
    return std::sqrt(width * width + n_detectors * jitter_sigma * jitter_sigma);
}

TemporalStats temporal_stats(const BiphotonState& state) {
    TemporalStats out;
    out.pearson = temporal_pearson(state);
    out.tau1 = unheralded_width(state, 1);
    out.tau2 = unheralded_width(state, 2);
    out.tau1h = heralded_width(state, 1);
    out.tau2h = heralded_width(state, 2);
    out.tau_dt = difference_width(state);
    out.mean_shift_slope = conditional_mean_shift(state, 1.0);
    return out;
}

}  // namespace pairlink
