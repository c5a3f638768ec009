#pragma once

#include "pairlink/biphoton.hpp"

namespace pairlink {

/// Closed-form temporal statistics of |psi_L|^2 at one propagation distance.
/// tau1/tau2 are the marginal (no-heralding) widths, tau1h/tau2h the
/// conditional widths given the partner's detection time, tau_dt the width
/// of the detection-time difference t2 - t1, and mean_shift_slope the
/// dimensionless d<t1>/dT2 of the conditional mean.
struct TemporalStats {
    double pearson = 0.0;
    double tau1 = 0.0;
    double tau2 = 0.0;
    double tau1h = 0.0;
    double tau2h = 0.0;
    double tau_dt = 0.0;
    double mean_shift_slope = 0.0;
};

/// Signed correlation coefficient of the two detection times. Equals -rho
/// at L = 0, crosses zero once, and tends to +rho for long fibers.
double temporal_pearson(const BiphotonState& state);

/// Fiber length at which the temporal correlation changes sign:
/// 1 / (2 sigma1 sigma2 |beta| sqrt(1 - rho^2)). Requires |rho| < 1.
double zero_correlation_length(const SourceSpec& source, double beta);

/// Smallest L beyond the sign change where the correlation has recovered to
/// 0.95 rho, found by bisection to 1e-9 relative. Requires rho != 0.
double saturation_length_95(const SourceSpec& source, double beta);

/// Marginal detection-time standard deviation of the selected photon (1 or 2).
double unheralded_width(const BiphotonState& state, int which_photon = 1);

/// Conditional detection-time width of the selected photon given the exact
/// detection time of its partner.
double heralded_width(const BiphotonState& state, int which_photon = 1);

/// Standard deviation of the detection-time difference t2 - t1; the relevant
/// heralded width when only a mutual time reference exists.
double difference_width(const BiphotonState& state);

/// Conditional mean of t1 given the partner was detected at t2_known.
double conditional_mean_shift(const BiphotonState& state, double t2_known);

/// Quadrature-added detector jitter: sqrt(width^2 + n_detectors * jitter_sigma^2).
/// One detector contributes in the no-heralding case, two in any heralded one.
double widen_by_jitter(double width, double jitter_sigma, int n_detectors);

TemporalStats temporal_stats(const BiphotonState& state);

}  // namespace pairlink
