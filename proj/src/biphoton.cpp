#include "pairlink/biphoton.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <numbers>
#include <ostream>

#include "pairlink/stats.hpp"

namespace pairlink {

BiphotonState make_state(const SourceSpec& source, double beta, double length) {
    std::vector<std::string> errors;
    if (!(source.sigma1 > 0.0) || !std::isfinite(source.sigma1)) errors.push_back("sigma1: must be > 0");
    if (!(source.sigma2 > 0.0) || !std::isfinite(source.sigma2)) errors.push_back("sigma2: must be > 0");
    if (!(source.rho > -1.0 && source.rho < 1.0)) errors.push_back("rho: must lie in (-1, 1)");
    if (!std::isfinite(beta)) errors.push_back("beta: must be finite");
    if (!(length >= 0.0) || !std::isfinite(length)) errors.push_back("length: must be >= 0");
    if (!errors.empty()) {
        std::string msg = "invalid biphoton state:";
        for (const auto& e : errors) msg += "\n  " + e;
        throw validation_error(msg);
    }
    return BiphotonState{source, beta, length};
}

BiphotonState make_state(const LinkConfig& config) {
    validate(config);
    return BiphotonState{config.source, config.fiber.beta, config.fiber.length_m};
}

complexd spectral_amplitude(const SourceSpec& source, double nu1, double nu2) {
    const double s1 = source.sigma1, s2 = source.sigma2, rho = source.rho;
    const double c = 1.0 - rho * rho;
    const double pref = 1.0 / (std::sqrt(std::numbers::pi) * std::sqrt(s1 * s2 * std::sqrt(c)));
    const double q = nu1 * nu1 / (s1 * s1) + nu2 * nu2 / (s2 * s2) - 2.0 * nu1 * nu2 * rho / (s1 * s2);
    return complexd(pref * std::exp(-q / (2.0 * c)), 0.0);
}

double dispersion_factor(double x, const BiphotonState& state) {
    const double rho = state.source.rho;
    const double bl = state.beta * state.length;
    return 1.0 + 4.0 * x * bl * bl * (1.0 - rho * rho);
}

complexd temporal_amplitude(const BiphotonState& state, double t1, double t2) {
    const double s1 = state.source.sigma1, s2 = state.source.sigma2, rho = state.source.rho;
    const double c = 1.0 - rho * rho;
    const double bl = state.beta * state.length;
    const double fm = dispersion_factor(-s1 * s1 * s2 * s2, state);

    const complexd denom(fm, 2.0 * bl * (s1 * s1 + s2 * s2));  // shared by prefactor and exponent
    const complexd pref = complexd(0.0, 1.0) * std::sqrt(s1 * s2) * std::pow(c, 0.25) /
                          std::sqrt(-std::numbers::pi * denom);
    const complexd quad =
        complexd(0.0, 2.0 * s1 * s1 * s2 * s2 * bl * c) * (t1 * t1 + t2 * t2) +
        complexd(s1 * s1 * t1 * t1 + s2 * s2 * t2 * t2 + 2.0 * s1 * s2 * rho * t1 * t2, 0.0);
    return pref * std::exp(-quad / (2.0 * denom));
}

void check_grid(const ComplexGrid& grid) {
    auto check_axis = [](const std::vector<double>& ax, const char* name) {
        if (ax.size() < 2) throw validation_error(std::string(name) + ": need at least 2 points");
        const double d = ax[1] - ax[0];
        if (!(d > 0.0)) throw validation_error(std::string(name) + ": must be strictly increasing");
        for (size_t i = 1; i < ax.size(); ++i) {
            const double step = ax[i] - ax[i - 1];
            if (!(step > 0.0) || std::abs(step - d) > 1e-9 * std::abs(d))
                throw validation_error(std::string(name) + ": must be uniform and strictly increasing");
        }
    };
    check_axis(grid.t1_axis, "t1_axis");
    check_axis(grid.t2_axis, "t2_axis");
    if (grid.values.size() != grid.n1() * grid.n2())
        throw validation_error("grid values size does not match axes");
}

std::vector<double> default_time_axis(const BiphotonState& state, int which_photon,
                                      size_t n, double span_sigmas) {
    if (n < 2) throw validation_error("axis needs at least 2 points");
    const double tau = unheralded_width(state, which_photon);
    const double half = span_sigmas * tau;
    std::vector<double> ax(n);
    const double step = 2.0 * half / static_cast<double>(n);
    for (size_t i = 0; i < n; ++i)
        ax[i] = (static_cast<double>(i) - static_cast<double>(n / 2)) * step;
    return ax;
}

ComplexGrid evaluate_grid(const BiphotonState& state,
                          const std::vector<double>& t1_axis,
                          const std::vector<double>& t2_axis) {
    ComplexGrid grid;
    grid.t1_axis = t1_axis;
    grid.t2_axis = t2_axis;
    grid.values.resize(t1_axis.size() * t2_axis.size());
    check_grid(grid);
    for (size_t i = 0; i < t1_axis.size(); ++i)
        for (size_t j = 0; j < t2_axis.size(); ++j)
            grid.at(i, j) = temporal_amplitude(state, t1_axis[i], t2_axis[j]);
    return grid;
}

namespace {

void write_sci(std::ostream& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.8e", v);
    out << buf;
}

}  // namespace

void write_grid_csv(const ComplexGrid& grid, std::ostream& out) {
    out << "t1,t2,re,im,abs,phase\n";
    for (size_t i = 0; i < grid.n1(); ++i) {
        for (size_t j = 0; j < grid.n2(); ++j) {
            const complexd v = grid.at(i, j);
            write_sci(out, grid.t1_axis[i]); out << ',';
            write_sci(out, grid.t2_axis[j]); out << ',';
            write_sci(out, v.real()); out << ',';
            write_sci(out, v.imag()); out << ',';
            write_sci(out, std::abs(v)); out << ',';
            write_sci(out, std::arg(v)); out << '\n';
        }
    }
}

static const char kGridMagic[8] = {'P', 'L', 'G', 'R', 'D', '0', '1', '\0'};

void write_grid_binary(const ComplexGrid& grid, std::ostream& out) {
    out.write(kGridMagic, 8);
    const uint32_t n1 = static_cast<uint32_t>(grid.n1());
    const uint32_t n2 = static_cast<uint32_t>(grid.n2());
    out.write(reinterpret_cast<const char*>(&n1), 4);
    out.write(reinterpret_cast<const char*>(&n2), 4);
    out.write(reinterpret_cast<const char*>(grid.t1_axis.data()), 8 * n1);
    out.write(reinterpret_cast<const char*>(grid.t2_axis.data()), 8 * n2);
    out.write(reinterpret_cast<const char*>(grid.values.data()), 16 * grid.values.size());
}

ComplexGrid read_grid_binary(std::istream& in) {
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kGridMagic, 8) != 0)
        throw validation_error("not a grid binary file (bad magic)");
    uint32_t n1 = 0, n2 = 0;
    in.read(reinterpret_cast<char*>(&n1), 4);
    in.read(reinterpret_cast<char*>(&n2), 4);
    ComplexGrid grid;
    grid.t1_axis.resize(n1);
    grid.t2_axis.resize(n2);
    grid.values.resize(static_cast<size_t>(n1) * n2);
    in.read(reinterpret_cast<char*>(grid.t1_axis.data()), 8 * n1);
    in.read(reinterpret_cast<char*>(grid.t2_axis.data()), 8 * n2);
    in.read(reinterpret_cast<char*>(grid.values.data()), 16 * grid.values.size());
    if (!in) throw validation_error("truncated grid binary file");
    check_grid(grid);
    return grid;
}

}  // namespace pairlink
