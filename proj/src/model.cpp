#include "pairlink/model.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace pairlink {

std::vector<std::string> validation_errors(const LinkConfig& config) {
    std::vector<std::string> errors;
    const auto& s = config.source;
    const auto& f = config.fiber;
    const auto& d = config.detector;

    auto bad = [&](const std::string& msg) { errors.push_back(msg); };

    if (!(s.sigma1 > 0.0) || !std::isfinite(s.sigma1)) bad("sigma1: must be > 0");
    if (!(s.sigma2 > 0.0) || !std::isfinite(s.sigma2)) bad("sigma2: must be > 0");
    if (!(s.rho > -1.0 && s.rho < 1.0)) bad("rho: must lie in the open interval (-1, 1)");
    if (!std::isfinite(s.omega0)) bad("omega0: must be finite");
    if (!std::isfinite(f.beta)) bad("beta: must be finite");
    if (!(f.alpha_db_km >= 0.0) || !std::isfinite(f.alpha_db_km)) bad("alpha_db_km: must be >= 0");
    if (!(f.length_m >= 0.0) || !std::isfinite(f.length_m)) bad("length_m: must be >= 0");
    if (!(d.dark_rate_hz >= 0.0) || !std::isfinite(d.dark_rate_hz)) bad("dark_rate_hz: must be >= 0");
    if (!(d.jitter_fwhm_s >= 0.0) || !std::isfinite(d.jitter_fwhm_s)) bad("jitter_fwhm_s: must be >= 0");
    if (!(d.rep_rate_hz > 0.0) || !std::isfinite(d.rep_rate_hz)) bad("rep_rate_hz: must be > 0");
    if (!(config.window_multiplier > 0.0) || !std::isfinite(config.window_multiplier))
        bad("window_multiplier: must be > 0");

    return errors;
}

const LinkConfig& validate(const LinkConfig& config) {
    auto errors = validation_errors(config);
    if (errors.empty()) return config;
    std::string msg = "invalid link configuration:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw validation_error(msg);
}

double fwhm_to_sigma(double fwhm) {
    static const double kFactor = 2.0 * std::sqrt(2.0 * std::log(2.0));
    return fwhm / kFactor;
}

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

LinkConfig parse_config(const std::string& text) {
    std::map<std::string, double> values;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw validation_error("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        try {
            size_t pos = 0;
            double v = std::stod(val, &pos);
            if (pos != val.size()) throw std::invalid_argument(val);
            if (values.count(key))
                throw validation_error("config line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
            values[key] = v;
        } catch (const std::invalid_argument&) {
            throw validation_error("config line " + std::to_string(lineno) + ": cannot parse value '" + val + "'");
        } catch (const std::out_of_range&) {
            throw validation_error("config line " + std::to_string(lineno) + ": value out of range '" + val + "'");
        }
    }

    static const std::vector<std::string> kRequired = {
        "sigma1_rad_s", "sigma2_rad_s", "rho", "beta_s2_m", "alpha_db_km",
        "length_m", "dark_rate_hz", "jitter_fwhm_s", "rep_rate_hz"};
    static const std::vector<std::string> kOptional = {"omega0_rad_s", "window_multiplier"};

    std::vector<std::string> problems;
    for (const auto& k : kRequired)
        if (!values.count(k)) problems.push_back("missing required key '" + k + "'");
    for (const auto& [k, v] : values) {
        bool known = false;
        for (const auto& r : kRequired) known = known || (k == r);
        for (const auto& o : kOptional) known = known || (k == o);
        if (!known) problems.push_back("unknown key '" + k + "'");
    }
    if (!problems.empty()) {
        std::string msg = "invalid config file:";
        for (const auto& p : problems) msg += "\n  " + p;
        throw validation_error(msg);
    }

    LinkConfig cfg;
    cfg.source.sigma1 = values["sigma1_rad_s"];
    cfg.source.sigma2 = values["sigma2_rad_s"];
    cfg.source.rho = values["rho"];
    cfg.source.omega0 = values.count("omega0_rad_s") ? values["omega0_rad_s"] : 0.0;
    cfg.fiber.beta = values["beta_s2_m"];
    cfg.fiber.alpha_db_km = values["alpha_db_km"];
    cfg.fiber.length_m = values["length_m"];
    cfg.detector.dark_rate_hz = values["dark_rate_hz"];
    cfg.detector.jitter_fwhm_s = values["jitter_fwhm_s"];
    cfg.detector.rep_rate_hz = values["rep_rate_hz"];
    cfg.window_multiplier = values.count("window_multiplier") ? values["window_multiplier"] : 6.0;
    validate(cfg);
    return cfg;
}

LinkConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

}  // namespace pairlink
