#pragma once

#include <map>
#include <string>

#include "pairlink/biphoton.hpp"

namespace pairlink {

/// Grid controls for the numeric propagation. n must be a power of two;
/// span_sigmas is the half-width of each frequency axis in units of that
/// photon's marginal spectral standard deviation (must be >= 6).
struct OracleGridParams {
    size_t n = 512;
    double span_sigmas = 9.0;
};

/// Moments taken by direct quadrature on |values|^2 of a normalized grid.
/// tau1h/tau2h are conditional widths of the slice through t2 = 0 / t1 = 0.
struct NumericMoments {
    double mean1 = 0.0;
    double mean2 = 0.0;
    double tau1 = 0.0;
    double tau2 = 0.0;
    double pearson = 0.0;
    double tau1h = 0.0;
    double tau2h = 0.0;
    double tau_dt = 0.0;
    double total_prob = 0.0;
};

/// Outcome of one analytic-vs-numeric comparison. moment_errors holds
/// relative errors for the widths and the absolute error for the Pearson
/// coefficient, each against the closed forms.
struct OracleReport {
    double rel_l2_error = 0.0;
    std::map<std::string, double> moment_errors;
    size_t grid_size = 0;
    double span_sigmas = 0.0;
    std::string route;  // "spectral" (chirp multiply + DFT) or "fresnel" (single-FFT far field)
    double total_prob = 0.0;

    std::string to_json() const;
};

/// Numeric propagation of the joint spectral amplitude to the time domain:
/// quadratic dispersion phase applied per photon in the spectral domain,
/// then a discrete Fourier transform. Two FFT routes cover complementary
/// distance regimes; the valid one is selected automatically and the call
/// refuses (numeric_guard_error) when the grid cannot represent the chirped
/// output without aliasing.
ComplexGrid propagate_numeric(const SourceSpec& source, double beta, double length,
                              const OracleGridParams& params = {});

/// Same, reporting which route was used.
ComplexGrid propagate_numeric(const SourceSpec& source, double beta, double length,
                              const OracleGridParams& params, std::string* route_out);

/// Direct quadrature moments of |grid|^2. The grid must carry (close to)
/// unit total probability; refuses otherwise.
NumericMoments numeric_moments(const ComplexGrid& grid);

/// Relative L2 distance between the grid and the closed-form amplitude
/// evaluated on the same axes, minimized over one global phase.
double rel_l2_vs_analytic(const ComplexGrid& numeric, const BiphotonState& state);

/// Full comparison at one distance: propagate, compare amplitudes, compare
/// moments against the closed-form statistics.
OracleReport oracle_report(const SourceSpec& source, double beta, double length,
                           const OracleGridParams& params = {});

}  // namespace pairlink
