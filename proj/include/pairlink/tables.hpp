#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pairlink/montecarlo.hpp"
#include "pairlink/qkd.hpp"

namespace pairlink {

/// One sweep axis over a config key. Key names are the config-file keys
/// plus the shorthand "sigma_rad_s" which sets both spectral widths.
struct AxisSpec {
    std::string name;
    double min = 0.0;
    double max = 0.0;
    size_t count = 0;
    bool log_scale = false;
};

std::vector<double> axis_values(const AxisSpec& axis);

/// Returns a copy of the config with one named parameter replaced.
LinkConfig apply_param(const LinkConfig& config, const std::string& name, double value);

/// Column-labelled numeric table; NaN marks undefined entries.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

/// 9 significant digits, scientific; NaN prints as "nan".
void write_table_csv(const Table& table, std::ostream& out);

/// JSON array of row objects; NaN serializes as null.
void write_table_json(const Table& table, std::ostream& out);

/// Temporal statistics along one axis (length_m or sigma_rad_s): Pearson
/// coefficient, all widths bare and jitter-widened, and the characteristic
/// lengths of the correlation sign change and 95% recovery.
Table stats_table(const LinkConfig& config, const AxisSpec& axis);

/// Key-rate curve over fiber length, one column block per requested rho
/// (the config's rho when the list is empty).
Table keyrate_table(const LinkConfig& config, Scenario scenario,
                    const AxisSpec& length_axis, std::vector<double> rhos = {});

/// Cartesian sweep over one or more axes with the full per-point record;
/// key-rate columns are NaN where the dark-count guard refuses.
Table sweep_table(const LinkConfig& config, Scenario scenario,
                  const std::vector<AxisSpec>& axes);

/// Monte Carlo run with the analytic prediction and standard-error distances
/// alongside, as a JSON object.
std::string mc_comparison_json(const LinkConfig& config, Scenario scenario,
                               uint64_t trials, uint64_t seed, unsigned workers = 0);

}  // namespace pairlink
