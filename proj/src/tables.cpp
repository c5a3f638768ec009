#include "pairlink/tables.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include <json.hpp>

#include "pairlink/biphoton.hpp"

namespace pairlink {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

std::vector<double> axis_values(const AxisSpec& axis) {
    if (axis.count < 1) throw validation_error("axis count: must be >= 1");
    if (axis.count == 1) return {axis.min};
    if (!(axis.min < axis.max)) throw validation_error("axis " + axis.name + ": need min < max");
    if (axis.log_scale && !(axis.min > 0.0))
        throw validation_error("axis " + axis.name + ": log scale needs min > 0");
    std::vector<double> vals(axis.count);
    const double n1 = static_cast<double>(axis.count - 1);
    for (size_t i = 0; i < axis.count; ++i) {
        const double f = static_cast<double>(i) / n1;
        vals[i] = axis.log_scale
                      ? axis.min * std::pow(axis.max / axis.min, f)
                      : axis.min + (axis.max - axis.min) * f;
    }
    return vals;
}

LinkConfig apply_param(const LinkConfig& config, const std::string& name, double value) {
    LinkConfig c = config;
    if (name == "sigma1_rad_s") c.source.sigma1 = value;
    else if (name == "sigma2_rad_s") c.source.sigma2 = value;
    else if (name == "sigma_rad_s") { c.source.sigma1 = value; c.source.sigma2 = value; }
    else if (name == "rho") c.source.rho = value;
    else if (name == "beta_s2_m") c.fiber.beta = value;
    else if (name == "alpha_db_km") c.fiber.alpha_db_km = value;
    else if (name == "length_m") c.fiber.length_m = value;
    else if (name == "dark_rate_hz") c.detector.dark_rate_hz = value;
    else if (name == "jitter_fwhm_s") c.detector.jitter_fwhm_s = value;
    else if (name == "rep_rate_hz") c.detector.rep_rate_hz = value;
    else if (name == "window_multiplier") c.window_multiplier = value;
    else throw validation_error("unknown parameter name '" + name + "'");
    return c;
}

void write_table_csv(const Table& table, std::ostream& out) {
    for (size_t c = 0; c < table.header.size(); ++c)
        out << (c ? "," : "") << table.header[c];
    out << '\n';
    char buf[32];
    for (const auto& row : table.rows) {
        for (size_t c = 0; c < row.size(); ++c) {
            if (c) out << ',';
            if (std::isnan(row[c])) {
                out << "nan";
            } else {
                std::snprintf(buf, sizeof(buf), "%.8e", row[c]);
                out << buf;
            }
        }
        out << '\n';
    }
}

void write_table_json(const Table& table, std::ostream& out) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& row : table.rows) {
        nlohmann::json obj;
        for (size_t c = 0; c < row.size(); ++c) obj[table.header[c]] = row[c];
        arr.push_back(obj);
    }
    out << arr.dump(2) << '\n';
}

Table stats_table(const LinkConfig& config, const AxisSpec& axis) {
    validate(config);
    if (axis.name != "length_m" && axis.name != "sigma_rad_s")
        throw validation_error("stats axis: must be length_m or sigma_rad_s");

    Table t;
    t.header = {axis.name, "pearson", "tau1_s", "tau2_s", "tau1h_s", "tau2h_s",
                "tau_dt_s", "mean_shift_slope",
                "tau1_jitter_s", "tau1h_jitter_s", "tau_dt_jitter_s",
                "l_zero_m", "l_095_m"};
    for (double v : axis_values(axis)) {
        const LinkConfig c = apply_param(config, axis.name, v);
        validate(c);
        const BiphotonState state = make_state(c);
        const TemporalStats s = temporal_stats(state);
        const double tj = fwhm_to_sigma(c.detector.jitter_fwhm_s);
        const double l0 = zero_correlation_length(c.source, c.fiber.beta);
        double l95 = kNaN;
        if (c.source.rho != 0.0) l95 = saturation_length_95(c.source, c.fiber.beta);
        t.rows.push_back({v, s.pearson, s.tau1, s.tau2, s.tau1h, s.tau2h,
                          s.tau_dt, s.mean_shift_slope,
                          widen_by_jitter(s.tau1, tj, 1),
                          widen_by_jitter(s.tau1h, tj, 2),
                          widen_by_jitter(s.tau_dt, tj, 2),
                          l0, l95});
    }
    return t;
}

namespace {

void append_keyrate_columns(std::vector<std::string>& header, const std::string& suffix) {
    for (const char* name : {"transmittance", "tau1_win_s", "tau2_win_s", "tau1h_win_s",
                             "tau2h_win_s", "p1", "p2", "p1h", "p2h", "p_exp", "qber",
                             "key_rate"})
        header.push_back(name + suffix);
}

void append_keyrate_values(std::vector<double>& row, const KeyRateResult& r) {
    row.insert(row.end(), {r.transmittance, r.windows.tau1_win, r.windows.tau2_win,
                           r.windows.tau1h_win, r.windows.tau2h_win,
                           r.dark_probs.p1, r.dark_probs.p2, r.dark_probs.p1h,
                           r.dark_probs.p2h, r.p_exp, r.qber, r.key_rate});
}

}  // namespace

Table keyrate_table(const LinkConfig& config, Scenario scenario,
                    const AxisSpec& length_axis, std::vector<double> rhos) {
    validate(config);
    if (length_axis.name != "length_m")
        throw validation_error("keyrate axis: must be length_m");

    const bool multi = !rhos.empty();
    if (rhos.empty()) rhos.push_back(config.source.rho);

    Table t;
    t.header = {"length_m"};
    for (double rho : rhos) {
        std::string suffix;
        if (multi) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "[rho=%g]", rho);
            suffix = buf;
        }
        append_keyrate_columns(t.header, suffix);
    }
    for (double L : axis_values(length_axis)) {
        std::vector<double> row = {L};
        for (double rho : rhos) {
            LinkConfig c = apply_param(config, "length_m", L);
            c = apply_param(c, "rho", rho);
            validate(c);
            append_keyrate_values(row, key_rate(c, scenario));
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table sweep_table(const LinkConfig& config, Scenario scenario,
                  const std::vector<AxisSpec>& axes) {
    validate(config);
    if (axes.empty()) throw validation_error("sweep: need at least one axis");
    std::vector<std::vector<double>> grids;
    for (const auto& ax : axes) grids.push_back(axis_values(ax));

    Table t;
    for (const auto& ax : axes) t.header.push_back(ax.name);
    t.header.insert(t.header.end(), {"pearson", "tau1_s", "tau1h_s", "tau_dt_s",
                                     "l_zero_m", "l_095_m"});
    append_keyrate_columns(t.header, "");

    std::vector<size_t> idx(axes.size(), 0);
    while (true) {
        LinkConfig c = config;
        std::vector<double> row;
        for (size_t a = 0; a < axes.size(); ++a) {
            row.push_back(grids[a][idx[a]]);
            c = apply_param(c, axes[a].name, grids[a][idx[a]]);
        }
        validate(c);
        const BiphotonState state = make_state(c);
        const TemporalStats s = temporal_stats(state);
        row.insert(row.end(), {s.pearson, s.tau1, s.tau1h, s.tau_dt,
                               zero_correlation_length(c.source, c.fiber.beta),
                               c.source.rho != 0.0 ? saturation_length_95(c.source, c.fiber.beta)
                                                   : kNaN});
        try {
            append_keyrate_values(row, key_rate(c, scenario));
        } catch (const numeric_guard_error&) {
            for (int k = 0; k < 12; ++k) row.push_back(kNaN);
        }
        t.rows.push_back(std::move(row));

        // advance the odometer, last axis fastest
        size_t a = axes.size();
        while (a > 0) {
            --a;
            if (++idx[a] < grids[a].size()) break;
            idx[a] = 0;
            if (a == 0) return t;
        }
    }
}

std::string mc_comparison_json(const LinkConfig& config, Scenario scenario,
                               uint64_t trials, uint64_t seed, unsigned workers) {
    const KeyRateResult analytic = key_rate(config, scenario);
    const McReport mc = run_trials(config, scenario, trials, seed, workers);

    const double n = static_cast<double>(mc.n_trials);
    const double se_p = std::sqrt(analytic.p_exp * (1.0 - analytic.p_exp) / n);
    const double na = std::max<double>(1.0, static_cast<double>(mc.accepted));
    const double se_q = std::sqrt(std::max(analytic.qber * (1.0 - analytic.qber), 1e-300) / na);

    nlohmann::json j;
    j["monte_carlo"] = nlohmann::json::parse(mc.to_json());
    j["analytic"]["p_exp"] = analytic.p_exp;
    j["analytic"]["qber"] = analytic.qber;
    j["comparison"]["p_exp_sigma_distance"] = se_p > 0.0 ? std::abs(mc.p_exp_hat - analytic.p_exp) / se_p : 0.0;
    j["comparison"]["qber_sigma_distance"] = se_q > 0.0 ? std::abs(mc.qber_hat - analytic.qber) / se_q : 0.0;
    j["comparison"]["p_exp_within_3se"] = std::abs(mc.p_exp_hat - analytic.p_exp) <= 3.0 * se_p;
    j["comparison"]["qber_within_3se"] = std::abs(mc.qber_hat - analytic.qber) <= 3.0 * se_q;
    return j.dump(2);
}

}  // namespace pairlink
