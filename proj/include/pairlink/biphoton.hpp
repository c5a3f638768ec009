#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include "pairlink/model.hpp"

namespace pairlink {

using complexd = std::complex<double>;

/// Analytic parametrization of the pair amplitude after both photons
/// traversed a dispersive fiber of the given length.
struct BiphotonState {
    SourceSpec source;
    double beta = 0.0;    // [s^2/m]
    double length = 0.0;  // [m]
};

BiphotonState make_state(const LinkConfig& config);
BiphotonState make_state(const SourceSpec& source, double beta, double length);

/// Joint spectral amplitude phi(nu1, nu2): a real positive bivariate
/// Gaussian, unit L2 norm. nu are angular detunings from the carrier.
complexd spectral_amplitude(const SourceSpec& source, double nu1, double nu2);

/// 1 + 4 x beta^2 L^2 (1 - rho^2). Shows up in every closed-form statistic;
/// its root at x = -(sigma1 sigma2)^2 marks the correlation sign change.
double dispersion_factor(double x, const BiphotonState& state);

/// Time-domain amplitude psi_L(t1, t2) including the complex prefactor and
/// chirp phase, principal square-root branch. Detection times are relative
/// to the co-moving frame (group delay removed). At L = 0 the value is real
/// up to a fixed global phase.
complexd temporal_amplitude(const BiphotonState& state, double t1, double t2);

/// Row-major complex matrix sampled on uniform, strictly increasing axes.
/// values[i * t2_axis.size() + j] corresponds to (t1_axis[i], t2_axis[j]).
struct ComplexGrid {
    std::vector<double> t1_axis;
    std::vector<double> t2_axis;
    std::vector<complexd> values;

    size_t n1() const { return t1_axis.size(); }
    size_t n2() const { return t2_axis.size(); }
    const complexd& at(size_t i, size_t j) const { return values[i * t2_axis.size() + j]; }
    complexd& at(size_t i, size_t j) { return values[i * t2_axis.size() + j]; }
    double dt1() const { return t1_axis.size() > 1 ? t1_axis[1] - t1_axis[0] : 0.0; }
    double dt2() const { return t2_axis.size() > 1 ? t2_axis[1] - t2_axis[0] : 0.0; }
};

/// Throws validation_error unless both axes are uniform and strictly
/// increasing and the value count matches.
void check_grid(const ComplexGrid& grid);

/// Uniform axis of n points centered on zero spanning +/- span_sigmas
/// marginal standard deviations of the selected photon (1 or 2).
std::vector<double> default_time_axis(const BiphotonState& state, int which_photon,
                                      size_t n = 512, double span_sigmas = 6.0);

/// temporal_amplitude evaluated on the product grid of the two axes.
ComplexGrid evaluate_grid(const BiphotonState& state,
                          const std::vector<double>& t1_axis,
                          const std::vector<double>& t2_axis);

/// CSV export, columns t1,t2,re,im,abs,phase (9 significant digits).
void write_grid_csv(const ComplexGrid& grid, std::ostream& out);

/// Compact little-endian binary layout: magic "PLGRD01\0", two uint32 axis
/// lengths, both axes as float64, then row-major re,im float64 pairs.
void write_grid_binary(const ComplexGrid& grid, std::ostream& out);
ComplexGrid read_grid_binary(std::istream& in);

}  // namespace pairlink
