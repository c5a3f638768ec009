#include <doctest.h>

#include <cmath>

#include "pairlink/rng.hpp"
#include "pairlink/stats.hpp"

using namespace pairlink;

namespace {

constexpr double kSigma = 1.57e12;
constexpr double kBeta = -1.15e-26;

SourceSpec source(double rho, double s1 = kSigma, double s2 = kSigma) {
    return SourceSpec{s1, s2, rho, 0.0};
}

BiphotonState state(double rho, double length, double s1 = kSigma, double s2 = kSigma) {
    return make_state(source(rho, s1, s2), kBeta, length);
}

}  // namespace

TEST_CASE("pearson limits") {
    for (double rho : {-0.9, -0.2, 0.0, 0.5, 0.9}) {
        CHECK(temporal_pearson(state(rho, 0.0)) == doctest::Approx(-rho).epsilon(1e-15));
        if (rho != 0.0) {
            const double l0 = zero_correlation_length(source(rho), kBeta);
            CHECK(std::abs(temporal_pearson(state(rho, l0))) < 1e-9);
            CHECK(temporal_pearson(state(rho, 1e4 * l0)) == doctest::Approx(rho).epsilon(1e-3));
        }
    }
    // frozen value at 10 km
    CHECK(temporal_pearson(state(0.9, 1e4)) == doctest::Approx(0.899970524749).epsilon(1e-10));
}

TEST_CASE("zero-correlation length") {
    CHECK(zero_correlation_length(source(0.9), kBeta) == doctest::Approx(40.4665387026).epsilon(1e-10));
    CHECK(std::abs(zero_correlation_length(source(0.9), kBeta) - 40.47) < 0.5);
    CHECK(zero_correlation_length(source(0.0), kBeta) == doctest::Approx(17.63895528).epsilon(1e-9));
    // 1/(sigma1 sigma2) scaling
    const double narrow = zero_correlation_length(source(0.9, 1e10, 1e10), kBeta);
    const double broad = zero_correlation_length(source(0.9), kBeta);
    CHECK(narrow / broad == doctest::Approx(std::pow(1.57e12 / 1e10, 2)).epsilon(1e-12));
    // magnitude of beta only
    CHECK(zero_correlation_length(source(0.9), -kBeta) == zero_correlation_length(source(0.9), kBeta));
}

TEST_CASE("saturation length") {
    SUBCASE("exceeds the sign-change length and satisfies the defining equation") {
        for (double rho : {0.2, -0.5, 0.9, -0.9}) {
            const double l0 = zero_correlation_length(source(rho), kBeta);
            const double l95 = saturation_length_95(source(rho), kBeta);
            CHECK(l95 > l0);
            const double r = temporal_pearson(state(rho, l95));
            CHECK(std::abs(r - 0.95 * rho) < 1e-9 * std::abs(rho));
        }
    }
    SUBCASE("equal-width closed form: sqrt(39) L0") {
        CHECK(saturation_length_95(source(0.9), kBeta) ==
              doctest::Approx(std::sqrt(39.0) * 40.4665387026).epsilon(1e-8));
    }
    SUBCASE("quadratic scaling in the bandwidth") {
        const double full = saturation_length_95(source(0.7), kBeta);
        const double halfw = saturation_length_95(source(0.7, kSigma / 2, kSigma / 2), kBeta);
        CHECK(halfw == doctest::Approx(4.0 * full).epsilon(1e-8));
    }
    SUBCASE("undefined at rho = 0") {
        CHECK_THROWS_AS(saturation_length_95(source(0.0), kBeta), validation_error);
    }
}

TEST_CASE("unheralded width frozen values") {
    CHECK(unheralded_width(state(0.0, 0.0)) == doctest::Approx(4.50386484832e-13).epsilon(1e-11));
    CHECK(std::abs(unheralded_width(state(0.0, 0.0)) - 4.504e-13) < 5e-16);
    CHECK(unheralded_width(state(0.0, 1e4)) == doctest::Approx(2.55336655904e-10).epsilon(1e-11));
    CHECK(std::abs(unheralded_width(state(0.0, 1e4)) - 2.553e-10) < 1e-13);
    // dispersion dominates at long distance: rho barely matters
    const double w0 = unheralded_width(state(0.0, 1e5));
    const double w9 = unheralded_width(state(0.9, 1e5));
    CHECK(std::abs(w9 / w0 - 1.0) < 1e-6);
}

TEST_CASE("heralded width") {
    SUBCASE("L = 0 value independent of rho") {
        for (double rho : {0.0, 0.5, 0.9, -0.9})
            CHECK(heralded_width(state(rho, 0.0)) ==
                  doctest::Approx(4.50386484832e-13).epsilon(1e-12));
    }
    SUBCASE("frozen value at 10 km") {
        CHECK(heralded_width(state(0.9, 1e4)) == doctest::Approx(1.1131494434e-10).epsilon(1e-11));
        CHECK(std::abs(heralded_width(state(0.9, 1e4)) - 1.113e-10) < 1e-13);
    }
    SUBCASE("equals the unheralded width exactly at the sign-change length") {
        for (double rho : {0.3, 0.9, -0.7}) {
            const double l0 = zero_correlation_length(source(rho), kBeta);
            const BiphotonState st = state(rho, l0);
            CHECK(heralded_width(st, 1) ==
                  doctest::Approx(unheralded_width(st, 1)).epsilon(1e-9));
        }
    }
    SUBCASE("photon-2 width is the argument swap") {
        const BiphotonState st = state(0.6, 3.0e3, 1.1e12, 2.3e12);
        const BiphotonState sw = state(0.6, 3.0e3, 2.3e12, 1.1e12);
        CHECK(heralded_width(st, 2) == heralded_width(sw, 1));
        CHECK(unheralded_width(st, 2) == unheralded_width(sw, 1));
    }
}

TEST_CASE("width ratio tends to sqrt(1-rho^2)") {
    for (double rho : {0.2, 0.5, 0.9, -0.9}) {
        const double l0 = zero_correlation_length(source(rho), kBeta);
        const BiphotonState st = state(rho, 1e3 * l0);
        const double ratio = heralded_width(st) / unheralded_width(st);
        CHECK(ratio == doctest::Approx(std::sqrt(1.0 - rho * rho)).epsilon(1e-4));
    }
}

TEST_CASE("difference width") {
    CHECK(difference_width(state(0.9, 0.0)) == doctest::Approx(2.01418959246e-12).epsilon(1e-11));
    CHECK(difference_width(state(-0.9, 0.0)) == doctest::Approx(4.6208678351e-13).epsilon(1e-11));
    // ordering flips at long distance: positive correlation wins
    CHECK(difference_width(state(0.9, 0.0)) > difference_width(state(-0.9, 0.0)));
    CHECK(difference_width(state(0.9, 1e4)) < difference_width(state(-0.9, 1e4)));
    // symmetric under photon exchange
    CHECK(difference_width(state(0.4, 2e3, 1.2e12, 2.8e12)) ==
          difference_width(state(0.4, 2e3, 2.8e12, 1.2e12)));
}

TEST_CASE("conditional mean shift") {
    CHECK(conditional_mean_shift(state(0.0, 777.0), 3e-12) == 0.0);
    const double l0 = zero_correlation_length(source(0.8), kBeta);
    CHECK(std::abs(conditional_mean_shift(state(0.8, l0), 1e-12)) < 1e-9 * 1e-12);
    CHECK(conditional_mean_shift(state(0.9, 0.0), 1e-12) == doctest::Approx(-0.9e-12).epsilon(1e-12));
}

TEST_CASE("jitter quadrature") {
    CHECK(widen_by_jitter(3.3e-12, 0.0, 1) == 3.3e-12);
    CHECK(widen_by_jitter(0.45e-12, 8.49e-12, 2) == doctest::Approx(1.20151029958e-11).epsilon(1e-10));
    CHECK(std::abs(widen_by_jitter(0.45e-12, 8.49e-12, 2) - 12.02e-12) < 0.01e-12);
    // strictly increasing in the jitter
    double prev = widen_by_jitter(1e-12, 0.0, 1);
    for (double tj = 1e-13; tj < 1e-11; tj *= 2.0) {
        const double cur = widen_by_jitter(1e-12, tj, 1);
        CHECK(cur > prev);
        prev = cur;
    }
}

TEST_CASE("even/odd dependence on rho") {
    Rng rng(13);
    for (int k = 0; k < 50; ++k) {
        const double rho = 0.98 * (2.0 * rng.uniform() - 1.0);
        const double length = rng.uniform() * 1e4;
        const BiphotonState plus = state(rho, length);
        const BiphotonState minus = state(-rho, length);
        CHECK(unheralded_width(plus) == doctest::Approx(unheralded_width(minus)).epsilon(1e-14));
        CHECK(heralded_width(plus) == doctest::Approx(heralded_width(minus)).epsilon(1e-14));
    }
    CHECK(difference_width(state(0.9, 0.0)) != difference_width(state(-0.9, 0.0)));
}

TEST_CASE("algebraic cross-checks between the closed forms") {
    // conditional width, difference width and mean shift of a bivariate
    // normal expressed through the marginals and the correlation
    Rng rng(17);
    for (int k = 0; k < 200; ++k) {
        const double rho = 1.9 * (rng.uniform() - 0.5);
        const double s1 = 5e11 + rng.uniform() * 3e12;
        const double s2 = 5e11 + rng.uniform() * 3e12;
        const double length = rng.uniform() * 5e4;
        const BiphotonState st = make_state(source(rho, s1, s2), kBeta, length);
        const double r = temporal_pearson(st);
        const double tau_a = unheralded_width(st, 1);
        const double tau_b = unheralded_width(st, 2);
        CHECK(heralded_width(st, 1) ==
              doctest::Approx(tau_a * std::sqrt(1.0 - r * r)).epsilon(1e-10));
        CHECK(difference_width(st) ==
              doctest::Approx(std::sqrt(tau_a * tau_a + tau_b * tau_b - 2.0 * r * tau_a * tau_b))
                  .epsilon(1e-10));
        const double t2 = (rng.uniform() - 0.5) * 1e-11;
        CHECK(conditional_mean_shift(st, t2) ==
              doctest::Approx(r * tau_a / tau_b * t2).epsilon(1e-10));
    }
}

TEST_CASE("temporal_stats bundles the pieces consistently") {
    const BiphotonState st = state(0.6, 2.5e3);
    const TemporalStats s = temporal_stats(st);
    CHECK(s.pearson == temporal_pearson(st));
    CHECK(s.tau1 == unheralded_width(st, 1));
    CHECK(s.tau2h == heralded_width(st, 2));
    CHECK(s.tau_dt == difference_width(st));
    CHECK(s.mean_shift_slope == conditional_mean_shift(st, 1.0));
    CHECK(std::abs(s.pearson) <= 1.0);
    CHECK(s.tau1 > 0.0);
}
