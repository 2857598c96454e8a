#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <iostream>
#include <numbers>
#include <sstream>

#include "pssv/errors.hpp"
#include "pssv/pulse_model.hpp"

using namespace pssv;
constexpr double kPi = std::numbers::pi;

namespace {
// paper-style defaults: w = 1.2 w_P, w_f = w/1.5, tau = tau_P = 150 fs
PulseGeometry default_geometry(double qle0 = 0.0) {
    PulseGeometry g;
    g.w = 100.0;
    g.w_p = g.w / 1.2;
    g.w_f = g.w / 1.5;
    g.tau = 150.0;
    g.tau_p = 150.0;
    g.tau_g = 120.0;
    g.qle0 = qle0;
    return g;
}

const FilterChain kFilter{0.02, 0.10, 0.3};
} // namespace

TEST_CASE("series tables at zero pump strength") {
    const SeriesTables t = series_tables(default_geometry(0.0));
    CHECK(t.b[0] == 1.0);
    for (int m = 1; m <= t.order; ++m) {
        CHECK(t.b[m] == 0.0);
        CHECK(t.c[m] == 0.0);
        CHECK(t.d[m] == 0.0);
    }
}

TEST_CASE("series parity and b-d relation") {
    const SeriesTables t = series_tables(default_geometry(0.8));
    for (int m = 0; m <= t.order; ++m) {
        if (m % 2 == 0) {
            CHECK(t.c[m] == 0.0);
            CHECK(t.b[m] - t.d[m] == doctest::Approx(m == 0 ? 1.0 : 0.0));
        } else {
            CHECK(t.b[m] == 0.0);
            CHECK(t.d[m] == 0.0);
        }
    }
}

TEST_CASE("gaussian moments are positive, decreasing, and P0 = 1") {
    const PulseGeometry g = default_geometry(0.5);
    CHECK(moment_p(g, 0) == doctest::Approx(1.0).epsilon(1e-15));
    for (int m = 1; m <= 8; ++m) {
        CHECK(moment_p(g, m) > 0.0);
        CHECK(moment_p(g, m) < moment_p(g, m - 1));
        CHECK(moment_r(g, m) > 0.0);
        CHECK(moment_r(g, m) < moment_r(g, m - 1));
        if (m >= 2) CHECK(moment_q(g, m) < moment_q(g, m - 1));
    }
}

TEST_CASE("closed-form moments match direct quadrature") {
    const PulseGeometry g = default_geometry(0.6);
    CHECK(std::abs(quadrature_oracle(g, kFilter, PulseIntegral::pm, 0) - 1.0) < 1e-10);
    for (int m = 1; m <= 3; ++m) {
        CHECK(std::abs(quadrature_oracle(g, kFilter, PulseIntegral::pm, m) -
                       moment_p(g, m)) < 1e-9);
        CHECK(std::abs(quadrature_oracle(g, kFilter, PulseIntegral::qm, m) -
                       moment_q(g, m)) < 1e-9);
        CHECK(std::abs(quadrature_oracle(g, kFilter, PulseIntegral::rm, m) -
                       moment_r(g, m)) < 1e-9);
    }
}

TEST_CASE("series sums match the unexpanded integrals") {
    const PulseGeometry g = default_geometry(0.597);
    const SeriesTables t = series_tables(g);
    CHECK(std::abs(quadrature_oracle(g, kFilter, PulseIntegral::eta2) - t.sum_bp()) <
          1e-9);
    CHECK(std::abs(quadrature_oracle(g, kFilter, PulseIntegral::eta_alpha) -
                   t.sum_cp()) < 1e-9);
    CHECK(std::abs(quadrature_oracle(g, kFilter, PulseIntegral::p_tot) -
                   ptot_narrow(g, kFilter)) < 1e-9);
}

TEST_CASE("mode reduction of the pulse model") {
    const ModeReduction vac = modered_from_pulse(default_geometry(0.0));
    CHECK(vac.eta == doctest::Approx(1.0));
    CHECK(vac.alpha == doctest::Approx(0.0));
    CHECK(vac.beta == doctest::Approx(0.0));

    const ModeReduction mr = modered_from_pulse(default_geometry(0.6));
    CHECK(mr.eta > 1.0);
    CHECK(mr.alpha > 0.0);
    CHECK(mr.beta > 0.0);
    CHECK(modered_residual(mr) < 1e-12);
}

TEST_CASE("uniform profiles collapse to the single-mode amplifier") {
    PulseGeometry g = default_geometry(0.45);
    g.uniform_profile = true;
    const ModeReduction mr = modered_from_pulse(g);
    CHECK(mr.eta == doctest::Approx(std::cosh(0.45)).epsilon(1e-13));
    CHECK(mr.alpha == doctest::Approx(std::sinh(0.45)).epsilon(1e-13));
    CHECK(mr.beta == doctest::Approx(0.0));

    const AveragedMoments m = narrow_moments(g, kFilter);
    CHECK(averaged_state(m).xi == doctest::Approx(1.0).epsilon(1e-12));
    const WignerForm w = wigner_coeffs(mr, m);
    CHECK(w.c == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(eval_wigner(w, 0, 0) == doctest::Approx(-1.0 / kPi).epsilon(1e-10));
}

TEST_CASE("detection probability is linear in the filter chain") {
    const PulseGeometry g = default_geometry(0.6);
    const double base = ptot_narrow(g, kFilter);
    FilterChain fc2 = kFilter;
    fc2.omega *= 3.0;
    CHECK(ptot_narrow(g, fc2) == doctest::Approx(3.0 * base).epsilon(1e-14));
    FilterChain fc3 = kFilter;
    fc3.eta_c *= 2.0;
    fc3.r *= 1.7;
    CHECK(ptot_narrow(g, fc3) == doctest::Approx(2.0 * 1.7 * base).epsilon(1e-14));
    CHECK(ptot_narrow(default_geometry(0.0), kFilter) == 0.0);
}

TEST_CASE("a large detection probability is flagged") {
    std::ostringstream captured;
    auto* old_buf = std::cerr.rdbuf(captured.rdbuf());
    const double p = ptot_narrow(default_geometry(0.8), {50.0, 0.5, 1.0});
    std::cerr.rdbuf(old_buf);
    CHECK(p >= 0.1);
    CHECK(captured.str().find("warning") != std::string::npos);
}

TEST_CASE("narrow-filter purity is scale free") {
    const PulseGeometry g = default_geometry(0.597);
    const AveragedMoments m1 = narrow_moments(g, kFilter);
    FilterChain fc2{0.11, 0.23, 0.77};
    const AveragedMoments m2 = narrow_moments(g, fc2);
    const ConditionalState a1 = averaged_state(m1);
    const ConditionalState a2 = averaged_state(m2);
    CHECK(a1.xi == doctest::Approx(a2.xi).epsilon(1e-13));
    CHECK(a1.theta == doctest::Approx(a2.theta).epsilon(1e-13));

    const NarrowCoeffs none = narrowfilter_coeffs(default_geometry(0.0), kFilter);
    CHECK(none.gamma_bar == 0.0);
    CHECK(none.delta_bar == 0.0);
    CHECK(none.single_mode);
}

TEST_CASE("working point reproduces the published squeezing ratio") {
    const PulseGeometry g0 = default_geometry();
    const double qle0 = solve_pump_amplitude(g0, 0.56);
    PulseGeometry g = g0;
    g.qle0 = qle0;
    const SqueezeSpec sq = squeeze_convert(modered_from_pulse(g));
    CHECK(sq.s == doctest::Approx(0.56).epsilon(1e-9));
    CHECK(sq.g == doctest::Approx(0.50).epsilon(0.02));

    const AveragedMoments m = narrow_moments(g, kFilter);
    const ConditionalState avg = averaged_state(m);
    CHECK(avg.xi == doctest::Approx(0.91).epsilon(0.02));

    const ModeReduction mr = modered_from_pulse(g);
    const double theta0 = std::atan2(mr.beta, mr.alpha);
    CHECK(std::abs(avg.theta - theta0) / theta0 < 0.10);
}

TEST_CASE("pump amplitude solving") {
    const PulseGeometry g = default_geometry();
    CHECK(solve_pump_amplitude(g, 1.0) == doctest::Approx(0.0));
    double prev_s = 1.0;
    for (double q = 0.1; q <= 1.3; q += 0.2) {
        PulseGeometry gi = g;
        gi.qle0 = q;
        const double s = squeeze_convert(modered_from_pulse(gi)).s;
        CHECK(s < prev_s); // monotone: stronger pump, more squeezing
        prev_s = s;
    }
    CHECK_THROWS_AS(solve_pump_amplitude(g, 1e-6), NumericalError);
    CHECK_THROWS_AS(solve_pump_amplitude(g, 1.5), NumericalError);
}

TEST_CASE("series truncation") {
    PulseGeometry g = default_geometry(1.9);
    const SeriesTables t = series_tables(g);
    CHECK(t.order <= 200);
    const SeriesTables fine = series_tables(g, 1e-15);
    CHECK(std::abs(t.sum_bp() - fine.sum_bp()) / fine.sum_bp() < 1e-12);
    // tol = 0 is unreachable while terms stay nonzero: hits the order cap
    CHECK_THROWS_AS(series_tables(default_geometry(1.9), 0.0), NumericalError);
    g.qle0 = 2.5;
    CHECK_THROWS_AS(series_tables(g), ConfigError);
}

TEST_CASE("effective pump profile") {
    PulseGeometry g = default_geometry();
    g.tau_g = 0.0;
    const EffectivePump plain = effective_pump(g);
    CHECK(plain.residual == doctest::Approx(0.0));
    CHECK(plain.fitted_tau_p == doctest::Approx(g.tau / std::sqrt(2.0)).epsilon(1e-4));

    const EffectivePump gvm = effective_pump(default_geometry());
    // double gate convolution widens the pulse toward tau
    CHECK(std::abs(gvm.fitted_tau_p - 150.0) / 150.0 < 0.10);
    CHECK(gvm.residual < 0.05);
    CHECK(gvm.fitted_tau_p > g.tau / std::sqrt(2.0));

    // area conservation against the ungated gaussian
    double area = 0.0;
    for (std::size_t i = 0; i + 1 < gvm.t.size(); ++i) {
        area += 0.5 * (gvm.f[i] + gvm.f[i + 1]) * (gvm.t[i + 1] - gvm.t[i]);
    }
    const double tau0 = 150.0 / std::sqrt(2.0);
    CHECK(area == doctest::Approx(tau0 * std::sqrt(kPi / 2.0)).epsilon(1e-10));

    for (double v : gvm.f) CHECK(v >= 0.0);
}

TEST_CASE("temporal discretization matches its closed forms") {
    PulseGeometry g = default_geometry(0.597);
    const auto disc = temporal::discretize(g, 1200, 8.0 * g.tau);
    const SeriesTables t = series_tables(g);

    double eta2 = 0.0, etaal = 0.0;
    for (int m = 0; m <= t.order; ++m) {
        eta2 += t.b[m] * temporal::moment_p(g, m);
        etaal += t.c[m] * temporal::moment_p(g, m);
    }
    const ModeReduction mr = mode_reduce(disc.transform, disc.psi_h);
    CHECK(mr.eta == doctest::Approx(std::sqrt(eta2)).epsilon(1e-8));
    CHECK(mr.alpha == doctest::Approx(etaal / std::sqrt(eta2)).epsilon(1e-8));

    const DetectionCoeffs dc =
        detection_coeffs(disc.transform, disc.psi_h, mr, disc.phi_d);
    const ConditionalState cs = conditional_state(dc);
    // purity of the temporal-only model from the closed-form series
    double gam = 0.0, del2 = 0.0, ptot = 0.0;
    for (int m = 1; m <= t.order; ++m) {
        gam += t.c[m] * temporal::moment_r(g, m) * 2.0 * kPi;
        del2 += t.d[m] * temporal::moment_r(g, m) * 2.0 * kPi;
        if (t.d[m] != 0.0) ptot += t.d[m] * temporal::moment_q(g, m) * 4.0 * kPi * kPi;
    }
    const double gcl = gam / mr.eta;
    const double dcl = (del2 - mr.alpha * gcl) / mr.beta;
    CHECK(cs.xi == doctest::Approx((gcl * gcl + dcl * dcl) / ptot).epsilon(1e-7));
    CHECK(cs.theta ==
          doctest::Approx(std::atan2(std::abs(dcl), gcl)).epsilon(1e-7));
}
