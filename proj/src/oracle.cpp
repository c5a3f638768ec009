#include "pairlink/oracle.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include <json.hpp>

#include "pairlink/stats.hpp"

namespace pairlink {

namespace {

constexpr double kNearStepMax = 0.2;  // max spectral chirp phase step [rad] between samples
constexpr double kFarStepMax = std::numbers::pi / 2.0;  // max input chirp step at the support edge
constexpr double kZcut = 8.0;  // required half-span in units of the local temporal width

bool power_of_two(size_t n) { return n >= 8 && (n & (n - 1)) == 0; }

std::vector<double> centered_axis(size_t n, double step) {
    std::vector<double> ax(n);
    for (size_t i = 0; i < n; ++i)
        ax[i] = (static_cast<double>(i) - static_cast<double>(n / 2)) * step;
    return ax;
}

// out[j1,j2] = sum_{k1,k2} g[k1,k2] exp(-i (u_j1 x_k1 + u_j2 x_k2)) * scale1 * scale2
// on centered grids x_k = (k - N/2) dx, u_j = (j - N/2) * 2 pi / (N dx).
void centered_dft2(std::vector<complexd>& g, size_t n, double scale1, double scale2) {
    const complexd axis_const = std::exp(complexd(0.0, -std::numbers::pi * static_cast<double>(n) / 2.0));
    auto sign = [](size_t k) { return (k % 2 == 0) ? 1.0 : -1.0; };
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            g[i * n + j] *= sign(i) * sign(j);
    fftw_plan plan = fftw_plan_dft_2d(static_cast<int>(n), static_cast<int>(n),
                                      reinterpret_cast<fftw_complex*>(g.data()),
                                      reinterpret_cast<fftw_complex*>(g.data()),
                                      FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
    const complexd c = axis_const * axis_const * scale1 * scale2;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            g[i * n + j] *= sign(i) * sign(j) * c;
}

struct RoutePlan {
    double margin_spectral = 0.0;
    double margin_fresnel = 0.0;
};

RoutePlan route_margins(const BiphotonState& state, const OracleGridParams& p) {
    const size_t n = p.n;
    const double abl = std::abs(state.beta * state.length);
    RoutePlan plan;

    const BiphotonState at0{state.source, state.beta, 0.0};
    double m_spec = 1e300, m_fres = 1e300;
    for (int photon = 1; photon <= 2; ++photon) {
        const double sigma = photon == 1 ? state.source.sigma1 : state.source.sigma2;
        const double nu_max = p.span_sigmas * sigma / std::sqrt(2.0);
        const double dnu = 2.0 * nu_max / static_cast<double>(n);
        const double tau_l = unheralded_width(state, photon);
        const double tau_0 = unheralded_width(at0, photon);

        // spectral route: chirp resolvable and output window large enough
        const double step = 2.0 * abl * nu_max * dnu;
        const double t_span = 2.0 * std::numbers::pi / dnu;
        m_spec = std::min(m_spec, step > 0.0 ? kNearStepMax / step : 1e300);
        m_spec = std::min(m_spec, t_span / (2.0 * kZcut * tau_l));

        // fresnel route: output window covers the broadened state, input
        // chirp resolvable across the initial support, input window covers it
        if (abl > 0.0) {
            const double dtp = std::numbers::pi / nu_max;
            const double z_out = 2.0 * abl * nu_max / tau_l;
            const double step_in = kZcut * tau_0 * dtp / (2.0 * abl);
            m_fres = std::min(m_fres, z_out / kZcut);
            m_fres = std::min(m_fres, kFarStepMax / step_in);
            m_fres = std::min(m_fres, static_cast<double>(n) * dtp / (2.0 * kZcut * tau_0));
        } else {
            m_fres = 0.0;
        }
    }
    plan.margin_spectral = m_spec;
    plan.margin_fresnel = m_fres;
    return plan;
}

ComplexGrid propagate_spectral(const BiphotonState& state, const OracleGridParams& p) {
    const size_t n = p.n;
    const double bl = state.beta * state.length;
    const double nu_max1 = p.span_sigmas * state.source.sigma1 / std::sqrt(2.0);
    const double nu_max2 = p.span_sigmas * state.source.sigma2 / std::sqrt(2.0);
    const double dnu1 = 2.0 * nu_max1 / static_cast<double>(n);
    const double dnu2 = 2.0 * nu_max2 / static_cast<double>(n);
    const auto nu1 = centered_axis(n, dnu1);
    const auto nu2 = centered_axis(n, dnu2);

    std::vector<complexd> g(n * n);
    for (size_t i = 0; i < n; ++i) {
        const double chirp1 = bl * nu1[i] * nu1[i];
        for (size_t j = 0; j < n; ++j) {
            const double phase = -(chirp1 + bl * nu2[j] * nu2[j]);
            g[i * n + j] = spectral_amplitude(state.source, nu1[i], nu2[j]) *
                           std::exp(complexd(0.0, phase));
        }
    }
    const double root2pi = std::sqrt(2.0 * std::numbers::pi);
    centered_dft2(g, n, dnu1 / root2pi, dnu2 / root2pi);

    ComplexGrid grid;
    grid.t1_axis = centered_axis(n, 2.0 * std::numbers::pi / (static_cast<double>(n) * dnu1));
    grid.t2_axis = centered_axis(n, 2.0 * std::numbers::pi / (static_cast<double>(n) * dnu2));
    grid.values = std::move(g);
    return grid;
}

ComplexGrid propagate_fresnel(const BiphotonState& state, const OracleGridParams& p) {
    const size_t n = p.n;
    const double bl = state.beta * state.length;

    const BiphotonState at0{state.source, state.beta, 0.0};
    ComplexGrid base = propagate_spectral(at0, p);

    const double inv4bl = 1.0 / (4.0 * bl);
    for (size_t i = 0; i < n; ++i) {
        const double c1 = base.t1_axis[i] * base.t1_axis[i] * inv4bl;
        for (size_t j = 0; j < n; ++j) {
            const double phase = c1 + base.t2_axis[j] * base.t2_axis[j] * inv4bl;
            base.values[i * n + j] *= std::exp(complexd(0.0, phase));
        }
    }
    const double dt1 = base.dt1();
    const double dt2 = base.dt2();
    centered_dft2(base.values, n, dt1, dt2);

    const double du1 = 2.0 * std::numbers::pi / (static_cast<double>(n) * dt1);
    const double du2 = 2.0 * std::numbers::pi / (static_cast<double>(n) * dt2);
    std::vector<double> t1(n), t2(n);
    for (size_t i = 0; i < n; ++i) {
        t1[i] = 2.0 * bl * (static_cast<double>(i) - static_cast<double>(n / 2)) * du1;
        t2[i] = 2.0 * bl * (static_cast<double>(i) - static_cast<double>(n / 2)) * du2;
    }

    const complexd pref = 1.0 / std::sqrt(complexd(0.0, 4.0 * std::numbers::pi * bl));
    for (size_t i = 0; i < n; ++i) {
        const double c1 = t1[i] * t1[i] * inv4bl;
        for (size_t j = 0; j < n; ++j) {
            const double phase = c1 + t2[j] * t2[j] * inv4bl;
            base.values[i * n + j] *= pref * pref * std::exp(complexd(0.0, phase));
        }
    }

    ComplexGrid grid;
    if (t1[1] < t1[0]) {  // negative beta*L mirrors the output axes
        grid.t1_axis.assign(t1.rbegin(), t1.rend());
        grid.t2_axis.assign(t2.rbegin(), t2.rend());
        grid.values.resize(n * n);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j)
                grid.values[i * n + j] = base.values[(n - 1 - i) * n + (n - 1 - j)];
    } else {
        grid.t1_axis = std::move(t1);
        grid.t2_axis = std::move(t2);
        grid.values = std::move(base.values);
    }
    return grid;
}

}  // namespace

ComplexGrid propagate_numeric(const SourceSpec& source, double beta, double length,
                              const OracleGridParams& params, std::string* route_out) {
    if (!power_of_two(params.n))
        throw validation_error("grid n: must be a power of two >= 8");
    if (!(params.span_sigmas >= 6.0))
        throw validation_error("span_sigmas: must be >= 6");
    const BiphotonState state = make_state(source, beta, length);

    const RoutePlan plan = route_margins(state, params);
    const bool spec_ok = plan.margin_spectral >= 1.0;
    const bool fres_ok = plan.margin_fresnel >= 1.0;
    if (!spec_ok && !fres_ok)
        throw numeric_guard_error(
            "grid too small for requested length: chirped output would alias "
            "(spectral margin " + std::to_string(plan.margin_spectral) +
            ", fresnel margin " + std::to_string(plan.margin_fresnel) +
            "); increase n");

    const bool use_spectral = spec_ok && (!fres_ok || plan.margin_spectral >= plan.margin_fresnel);
    if (route_out) *route_out = use_spectral ? "spectral" : "fresnel";
    return use_spectral ? propagate_spectral(state, params) : propagate_fresnel(state, params);
}

ComplexGrid propagate_numeric(const SourceSpec& source, double beta, double length,
                              const OracleGridParams& params) {
    return propagate_numeric(source, beta, length, params, nullptr);
}

NumericMoments numeric_moments(const ComplexGrid& grid) {
    check_grid(grid);
    const size_t n1 = grid.n1(), n2 = grid.n2();
    const double w = grid.dt1() * grid.dt2();

    NumericMoments m;
    double total = 0.0;
    for (size_t i = 0; i < n1; ++i)
        for (size_t j = 0; j < n2; ++j)
            total += std::norm(grid.at(i, j));
    total *= w;
    m.total_prob = total;
    if (std::abs(total - 1.0) > 1e-3)
        throw numeric_guard_error("numeric_moments: grid is not normalized (total probability " +
                                  std::to_string(total) + ")");

    double m1 = 0.0, m2 = 0.0;
    for (size_t i = 0; i < n1; ++i)
        for (size_t j = 0; j < n2; ++j) {
            const double p = std::norm(grid.at(i, j)) * w / total;
            m1 += p * grid.t1_axis[i];
            m2 += p * grid.t2_axis[j];
        }
    double v1 = 0.0, v2 = 0.0, cov = 0.0;
    for (size_t i = 0; i < n1; ++i) {
        const double d1 = grid.t1_axis[i] - m1;
        for (size_t j = 0; j < n2; ++j) {
            const double p = std::norm(grid.at(i, j)) * w / total;
            const double d2 = grid.t2_axis[j] - m2;
            v1 += p * d1 * d1;
            v2 += p * d2 * d2;
            cov += p * d1 * d2;
        }
    }
    m.mean1 = m1;
    m.mean2 = m2;
    m.tau1 = std::sqrt(v1);
    m.tau2 = std::sqrt(v2);
    m.pearson = cov / (m.tau1 * m.tau2);
    m.tau_dt = std::sqrt(v1 + v2 - 2.0 * cov);

    // conditional slices through zero delay of the partner photon
    auto zero_index = [](const std::vector<double>& ax) {
        size_t best = 0;
        for (size_t i = 1; i < ax.size(); ++i)
            if (std::abs(ax[i]) < std::abs(ax[best])) best = i;
        return best;
    };
    const size_t j0 = zero_index(grid.t2_axis);
    const size_t i0 = zero_index(grid.t1_axis);
    {
        double norm = 0.0, mu = 0.0, var = 0.0;
        for (size_t i = 0; i < n1; ++i) norm += std::norm(grid.at(i, j0));
        for (size_t i = 0; i < n1; ++i) mu += std::norm(grid.at(i, j0)) / norm * grid.t1_axis[i];
        for (size_t i = 0; i < n1; ++i) {
            const double d = grid.t1_axis[i] - mu;
            var += std::norm(grid.at(i, j0)) / norm * d * d;
        }
        m.tau1h = std::sqrt(var);
    }
    {
        double norm = 0.0, mu = 0.0, var = 0.0;
        for (size_t j = 0; j < n2; ++j) norm += std::norm(grid.at(i0, j));
        for (size_t j = 0; j < n2; ++j) mu += std::norm(grid.at(i0, j)) / norm * grid.t2_axis[j];
        for (size_t j = 0; j < n2; ++j) {
            const double d = grid.t2_axis[j] - mu;
            var += std::norm(grid.at(i0, j)) / norm * d * d;
        }
        m.tau2h = std::sqrt(var);
    }
    return m;
}

double rel_l2_vs_analytic(const ComplexGrid& numeric, const BiphotonState& state) {
    complexd inner(0.0, 0.0);
    double norm_a = 0.0;
    std::vector<complexd> analytic(numeric.values.size());
    for (size_t i = 0; i < numeric.n1(); ++i)
        for (size_t j = 0; j < numeric.n2(); ++j) {
            const complexd a = temporal_amplitude(state, numeric.t1_axis[i], numeric.t2_axis[j]);
            analytic[i * numeric.n2() + j] = a;
            inner += std::conj(numeric.at(i, j)) * a;
            norm_a += std::norm(a);
        }
    const double theta = std::arg(inner);
    const complexd phase = std::exp(complexd(0.0, theta));
    double diff = 0.0;
    for (size_t k = 0; k < analytic.size(); ++k)
        diff += std::norm(analytic[k] - phase * numeric.values[k]);
    return std::sqrt(diff / norm_a);
}

OracleReport oracle_report(const SourceSpec& source, double beta, double length,
                           const OracleGridParams& params) {
    OracleReport report;
    report.grid_size = params.n;
    report.span_sigmas = params.span_sigmas;

    const ComplexGrid grid = propagate_numeric(source, beta, length, params, &report.route);
    const BiphotonState state = make_state(source, beta, length);
    report.rel_l2_error = rel_l2_vs_analytic(grid, state);

    const NumericMoments nm = numeric_moments(grid);
    report.total_prob = nm.total_prob;
    const TemporalStats ts = temporal_stats(state);
    auto rel = [](double num, double ref) { return std::abs(num / ref - 1.0); };
    report.moment_errors["tau1"] = rel(nm.tau1, ts.tau1);
    report.moment_errors["tau2"] = rel(nm.tau2, ts.tau2);
    report.moment_errors["tau1h"] = rel(nm.tau1h, ts.tau1h);
    report.moment_errors["tau2h"] = rel(nm.tau2h, ts.tau2h);
    report.moment_errors["tau_dt"] = rel(nm.tau_dt, ts.tau_dt);
    report.moment_errors["pearson"] = std::abs(nm.pearson - ts.pearson);
    return report;
}

std::string OracleReport::to_json() const {
    nlohmann::json j;
    j["rel_l2_error"] = rel_l2_error;
    j["moment_errors"] = moment_errors;
    j["grid_size"] = grid_size;
    j["span_sigmas"] = span_sigmas;
    j["route"] = route;
    j["total_prob"] = total_prob;
    return j.dump(2);
}

}  // namespace pairlink
