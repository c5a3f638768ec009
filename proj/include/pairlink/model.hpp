#pragma once

#include <string>
#include <vector>

#include "pairlink/errors.hpp"

namespace pairlink {

/// Spectral description of a down-converted photon pair.
/// Frequencies are angular [rad/s]; rho is the dimensionless spectral
/// correlation coefficient of the joint Gaussian amplitude.
struct SourceSpec {
    double sigma1 = 0.0;   // spectral width of photon 1 [rad/s]
    double sigma2 = 0.0;   // spectral width of photon 2 [rad/s]
    double rho = 0.0;      // spectral correlation, open interval (-1, 1)
    double omega0 = 0.0;   // central angular frequency [rad/s], informational
};

/// Dispersive fiber channel, identical on both arms.
struct FiberSpec {
    double beta = 0.0;       // half group-velocity dispersion [s^2/m], signed
    double alpha_db_km = 0.0;  // attenuation [dB/km]
    double length_m = 0.0;     // one arm length [m]
};

/// Detection model. Jitter is quoted as a Gaussian FWHM; quadrature
/// formulas use the converted standard deviation.
struct DetectorSpec {
    double dark_rate_hz = 0.0;    // dark counts per second, per detector
    double jitter_fwhm_s = 0.0;   // timing jitter FWHM [s]
    double rep_rate_hz = 0.0;     // source repetition rate [Hz]
};

struct LinkConfig {
    SourceSpec source;
    FiberSpec fiber;
    DetectorSpec detector;
    double window_multiplier = 6.0;  // detection window width in units of the temporal width
};

/// All violated invariants, one message per offending field; empty if valid.
std::vector<std::string> validation_errors(const LinkConfig& config);

/// Returns the config unchanged if every invariant holds, otherwise throws
/// validation_error listing every violation.
const LinkConfig& validate(const LinkConfig& config);

/// Standard deviation of a Gaussian with the given FWHM: fwhm / (2 sqrt(2 ln 2)).
double fwhm_to_sigma(double fwhm);

/// Parse a flat key = value config ('#' comments). Unknown keys are hard
/// errors. Required keys: sigma1_rad_s, sigma2_rad_s, rho, beta_s2_m,
/// alpha_db_km, length_m, dark_rate_hz, jitter_fwhm_s, rep_rate_hz.
/// Optional: omega0_rad_s, window_multiplier (default 6).
LinkConfig parse_config(const std::string& text);

/// parse_config applied to the contents of a file.
LinkConfig load_config(const std::string& path);

}  // namespace pairlink
