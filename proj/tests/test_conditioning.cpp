#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "pssv/conditioning.hpp"
#include "pssv/errors.hpp"

using namespace pssv;
using Cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

namespace {
ModeReduction modered_rg(double r, double g) {
    return modered_from_squeeze({r, g, std::exp(-2.0 * r), false});
}

// moments of a single detection mode with purity xi and angle theta
AveragedMoments moments_xi_theta(double xi, double theta, double p_tot = 1.0) {
    AveragedMoments m;
    m.gg = xi * p_tot * std::cos(theta) * std::cos(theta);
    m.dd = xi * p_tot * std::sin(theta) * std::sin(theta);
    m.gd = xi * p_tot * std::cos(theta) * std::sin(theta);
    m.p_tot = p_tot;
    return m;
}
} // namespace

TEST_CASE("single-mode photon subtraction has unit purity") {
    const double r = 0.44;
    const FiniteBogoliubov b = single_mode_squeezer(1, 0, r);
    Eigen::VectorXcd psi(1);
    psi(0) = 1.0;
    const ModeReduction mr = mode_reduce(b, psi);
    const DetectionCoeffs dc = detection_coeffs(b, psi, mr, psi);
    CHECK(dc.gamma.real() == doctest::Approx(std::sinh(r)).epsilon(1e-14));
    CHECK(std::abs(dc.delta) == 0.0);
    CHECK(dc.single_mode);
    CHECK(dc.p == doctest::Approx(std::sinh(r) * std::sinh(r)).epsilon(1e-14));
    const ConditionalState cs = conditional_state(dc);
    CHECK(cs.xi == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cs.theta == doctest::Approx(0.0));
}

TEST_CASE("detecting on the homodyne mode itself gives the source angle") {
    // unfiltered detection projects out (gamma, delta) = (alpha, beta),
    // so theta equals theta_0 = atan(beta/alpha)
    const double r = 0.29, gr = 0.145;
    const FiniteBogoliubov b =
        compose(two_mode_squeezer(2, 0, 1, gr), single_mode_squeezer(2, 0, r));
    Eigen::VectorXcd psi(2);
    psi << 1.0, 0.0;
    const ModeReduction mr = mode_reduce(b, psi);
    const DetectionCoeffs dc = detection_coeffs(b, psi, mr, psi);
    CHECK(dc.gamma.real() == doctest::Approx(mr.alpha).epsilon(1e-13));
    CHECK(dc.delta.real() == doctest::Approx(mr.beta).epsilon(1e-12));
    const ConditionalState cs = conditional_state(dc);
    CHECK(cs.theta == doctest::Approx(std::atan2(mr.beta, mr.alpha)).epsilon(1e-11));
}

TEST_CASE("no squeezing means no detections") {
    const FiniteBogoliubov b = identity_transform(2);
    Eigen::VectorXcd psi(2);
    psi << 1.0, 0.0;
    const ModeReduction mr = mode_reduce(b, psi);
    const DetectionCoeffs dc = detection_coeffs(b, psi, mr, psi);
    CHECK(std::abs(dc.gamma) == 0.0);
    CHECK(std::abs(dc.delta) == 0.0);
    CHECK(dc.p == 0.0);
    CHECK_THROWS_AS(conditional_state(dc), NumericalError);
}

TEST_CASE("conditional state angles") {
    const ConditionalState perp = conditional_state({0.0, 0.7, 0.49, false});
    CHECK(perp.theta == doctest::Approx(kPi / 2));
    CHECK(perp.xi == doctest::Approx(1.0));
}

TEST_CASE("conditional density matrix") {
    const Eigen::Matrix3cd vac = density_matrix({0.0, 0.3});
    CHECK(vac(0, 0).real() == doctest::Approx(1.0));
    CHECK(vac.diagonal().sum().real() == doctest::Approx(1.0));

    const Eigen::Matrix3cd photon = density_matrix({1.0, 0.0});
    CHECK(photon(1, 1).real() == doctest::Approx(1.0));

    const Eigen::Matrix3cd half = density_matrix({0.5, kPi / 4});
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> eig(half);
    CHECK(eig.eigenvalues()(0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(eig.eigenvalues()(1) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(eig.eigenvalues()(2) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK((half - half.adjoint()).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("averaging over identical modes rescales only P_tot") {
    const DetectionCoeffs dc{Cplx(0.3, 0.0), Cplx(0.1, 0.05), 0.2, false};
    const DetectionCoeffs two[] = {dc, dc};
    const AveragedMoments one = average_moments({&dc, 1});
    const AveragedMoments dup = average_moments({two, 2});
    CHECK(dup.p_tot == doctest::Approx(2.0 * one.p_tot));

    // quadrature weights: two half-weighted copies equal one plain mode
    const double half[] = {0.5, 0.5};
    const AveragedMoments weighted = average_moments({two, 2}, {half, 2});
    CHECK(weighted.p_tot == doctest::Approx(one.p_tot));
    CHECK(weighted.gg == doctest::Approx(one.gg));
    CHECK(std::abs(weighted.gd - one.gd) < 1e-15);
    const ConditionalState a1 = averaged_state(one);
    const ConditionalState a2 = averaged_state(dup);
    CHECK(a1.xi == doctest::Approx(a2.xi).epsilon(1e-14));
    CHECK(a1.theta == doctest::Approx(a2.theta).epsilon(1e-14));

    const ModeReduction mr = modered_rg(0.4, 0.6);
    const WignerForm w1 = wigner_coeffs(mr, one);
    const WignerForm w2 = wigner_coeffs(mr, dup);
    CHECK(w1.a == doctest::Approx(w2.a).epsilon(1e-14));
    CHECK(w1.b == doctest::Approx(w2.b).epsilon(1e-14));
    CHECK(w1.d == doctest::Approx(w2.d).epsilon(1e-14));
}

TEST_CASE("unconditioned moments give back the squeezed vacuum") {
    const ModeReduction mr = modered_rg(0.3, 0.5);
    const WignerForm w = wigner_coeffs(mr, {0.0, 0.0, 0.0, 1.0});
    CHECK(w.a == 0.0);
    CHECK(w.b == 0.0);
    CHECK(w.d == 0.0);
    CHECK(w.c == doctest::Approx(1.0));
    const QuadVariances v = variances_from_modered(mr);
    CHECK(eval_wigner(w, 0.4, -0.2) ==
          doctest::Approx(eval_wigner(squeezed_vacuum_form(v), 0.4, -0.2)));
}

TEST_CASE("pure single-mode conditioning reaches the Wigner floor") {
    const double r = 0.35;
    const ModeReduction mr = modered_rg(r, 0.0); // beta = 0
    const WignerForm w = wigner_coeffs(mr, moments_xi_theta(1.0, 0.0));
    CHECK(w.c == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(eval_wigner(w, 0.0, 0.0) == doctest::Approx(-1.0 / kPi).epsilon(1e-12));
}

TEST_CASE("real moments produce no d coefficient") {
    const ModeReduction mr = modered_rg(0.29, 0.5);
    const WignerForm w = wigner_coeffs(mr, moments_xi_theta(0.9, 0.45));
    CHECK(w.d == 0.0);
    // complex cross moment switches it on
    AveragedMoments m = moments_xi_theta(0.9, 0.45);
    m.gd *= std::exp(Cplx(0.0, 0.8));
    CHECK(wigner_coeffs(mr, m).d != 0.0);
}

TEST_CASE("losses") {
    const ModeReduction mr = modered_rg(0.29, 0.5);
    const WignerForm w = wigner_coeffs(mr, moments_xi_theta(0.9, 0.45));

    const WignerForm same = apply_losses(w, {1.0, 1.0});
    CHECK(same.a == doctest::Approx(w.a));
    CHECK(same.c == doctest::Approx(w.c));
    CHECK(same.vx == doctest::Approx(w.vx));

    const WignerForm vac = squeezed_vacuum_form({1.0, 1.0});
    const WignerForm vac2 = apply_losses(vac, {0.93, 0.9});
    CHECK(vac2.vx == doctest::Approx(1.0));
    CHECK(vac2.c == doctest::Approx(1.0));

    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (int i = 0; i < 25; ++i) {
        const ModeReduction mri = modered_rg(0.1 + 0.5 * dist(rng), dist(rng));
        const WignerForm wi =
            wigner_coeffs(mri, moments_xi_theta(dist(rng), 0.5 * kPi * dist(rng)));
        const LossChain l{0.5 + 0.5 * dist(rng), 0.5 + 0.5 * dist(rng)};
        const WignerForm lo = apply_losses(wi, l);
        CHECK(lo.c == doctest::Approx(1.0 - lo.a / lo.vx - lo.b / lo.vp).epsilon(1e-12));
        CHECK(wigner_norm_quad(lo) == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(lo.c >= -1.0 - 1e-10);
        if (wi.c < 0.0) {
            CHECK(eval_wigner(lo, 0, 0) >= eval_wigner(wi, 0, 0) - 1e-12);
        }
    }
}

TEST_CASE("wigner evaluation reference points") {
    CHECK(eval_wigner(squeezed_vacuum_form({1.0, 1.0}), 0.0, 0.0) ==
          doctest::Approx(1.0 / kPi));
    const WignerForm floor{0.0, 0.0, -1.0, 0.0, 1.0, 1.0};
    CHECK(eval_wigner(floor, 0.0, 0.0) == doctest::Approx(-1.0 / kPi));
}

TEST_CASE("empirical coefficients") {
    const QuadVariances v{2.1, 0.62};
    const WignerForm none = empirical_coeffs(v, 0.0);
    CHECK(none.a == 0.0);
    CHECK(none.c == doctest::Approx(1.0));

    // full purity at minimal uncertainty reaches the floor
    const double r = 0.4;
    const WignerForm full =
        empirical_coeffs({std::exp(2 * r), std::exp(-2 * r)}, 1.0);
    CHECK(full.c == doctest::Approx(-1.0).epsilon(1e-12));

    bool degenerate = false;
    const WignerForm vac = empirical_coeffs({1.0, 1.0}, 0.7, &degenerate);
    CHECK(degenerate);
    CHECK(vac.c == doctest::Approx(1.0));
}

TEST_CASE("empirical self-fit recovers the planted purity") {
    const double r = -0.5 * std::log(0.56);
    const SqueezeSpec sqz{r, 0.5, 0.56, false};
    const LossChain losses{0.93, 0.9};
    const double planted = 0.73;
    const ModeReduction mr = modered_from_squeeze(sqz);
    const QuadVariances v = variances_from_modered(mr);
    const QuadVariances vl{losses.eta_hom * losses.t * (v.vx - 1.0) + 1.0,
                           losses.eta_hom * losses.t * (v.vp - 1.0) + 1.0};
    const WignerForm target = empirical_coeffs(vl, planted);
    const EmpiricalParams fit = fit_empirical(target, sqz, losses, false);
    CHECK(fit.xi == doctest::Approx(planted).epsilon(1e-5));
    CHECK(fit.fit_error < 1e-4);
}

TEST_CASE("equivalent beamsplitter ratio") {
    CHECK(equivalent_bs_ratio(0.6, 0.6, 0.3) == doctest::Approx(0.0));
    CHECK(equivalent_bs_ratio(kPi / 4, kPi / 2, 1e-9) == doctest::Approx(1.0));
    CHECK_THROWS_AS(equivalent_bs_ratio(0.0, 0.5, 0.3), NumericalError);
    CHECK_THROWS_AS(equivalent_bs_ratio(0.5, kPi, 0.3), NumericalError);
    CHECK_THROWS_AS(equivalent_bs_ratio(0.5, 0.6, 0.0), NumericalError);
}

TEST_CASE("quadrature oracle: squeezed vacuum limit") {
    const ModeReduction mr = modered_rg(0.5, 0.7);
    const WignerForm w = squeezed_vacuum_form(variances_from_modered(mr));
    for (auto [x, p] : {std::pair{0.0, 0.0}, std::pair{0.8, -0.6}}) {
        CHECK(oracle_wigner_numeric(mr, ConditionalState{0.0, 0.0}, x, p) ==
              doctest::Approx(eval_wigner(w, x, p)).epsilon(1e-8));
    }
}

TEST_CASE("quadrature oracle: single-mode floor at the origin") {
    const ModeReduction mr = modered_rg(0.35, 0.0);
    CHECK(oracle_wigner_numeric(mr, ConditionalState{1.0, 0.0}, 0.0, 0.0) ==
          doctest::Approx(-1.0 / kPi).epsilon(1e-8));
}

TEST_CASE("quadrature oracle agrees with the closed form") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (int trial = 0; trial < 6; ++trial) {
        const ModeReduction mr = modered_rg(0.05 + 0.6 * dist(rng), 1.2 * dist(rng));
        const double xi = dist(rng);
        const double theta = 0.5 * kPi * dist(rng);
        const WignerForm w = wigner_coeffs(mr, moments_xi_theta(xi, theta));
        const ConditionalState cs{xi, theta};
        for (int k = 0; k < 3; ++k) {
            const double x = 4.0 * dist(rng) - 2.0;
            const double p = 4.0 * dist(rng) - 2.0;
            CHECK(std::abs(oracle_wigner_numeric(mr, cs, x, p) - eval_wigner(w, x, p)) <
                  1e-6);
        }
    }
}

TEST_CASE("quadrature oracle covers complex amplitudes and the d term") {
    std::mt19937_64 rng(31);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (int trial = 0; trial < 4; ++trial) {
        const ModeReduction mr = modered_rg(0.1 + 0.4 * dist(rng), 0.2 + dist(rng));
        DetectionCoeffs dc;
        dc.gamma = Cplx(gauss(rng), gauss(rng));
        dc.delta = Cplx(gauss(rng), gauss(rng));
        dc.p = (std::norm(dc.gamma) + std::norm(dc.delta)) / (0.3 + 0.7 * dist(rng));
        AveragedMoments m{std::norm(dc.gamma), std::norm(dc.delta),
                          std::conj(dc.gamma) * dc.delta, dc.p};
        const WignerForm w = wigner_coeffs(mr, m);
        CHECK(w.d != 0.0);
        for (int k = 0; k < 3; ++k) {
            const double x = 3.0 * dist(rng) - 1.5;
            const double p = 3.0 * dist(rng) - 1.5;
            CHECK(std::abs(oracle_wigner_numeric(mr, dc, x, p) - eval_wigner(w, x, p)) <
                  1e-6);
        }
    }
}

TEST_CASE("detection coefficients on random multimode transforms") {
    std::mt19937_64 rng(37);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> par(0.1, 0.7);
    std::uniform_real_distribution<double> angle(0.0, 6.28);
    auto random_mode = [&](int n) {
        Eigen::VectorXcd m(n);
        for (int i = 0; i < n; ++i) m(i) = Cplx(gauss(rng), gauss(rng));
        return (m / m.norm()).eval();
    };
    for (int trial = 0; trial < 15; ++trial) {
        const int n = 3;
        FiniteBogoliubov b = identity_transform(n);
        for (int i = 0; i < 6; ++i) {
            b = compose(two_mode_squeezer(n, i % n, (i + 1) % n, par(rng)), b);
            b = compose(beam_splitter(n, i % n, (i + 2) % n, angle(rng), angle(rng)), b);
            b = compose(phase_shift(n, i % n, angle(rng)), b);
        }
        const Eigen::VectorXcd psi = random_mode(n);
        const Eigen::VectorXcd phi = random_mode(n);
        const ModeReduction mr = mode_reduce(b, psi);
        const DetectionCoeffs dc = detection_coeffs(b, psi, mr, phi);
        REQUIRE(dc.p > 0.0);
        const ConditionalState cs = conditional_state(dc); // asserts xi <= 1
        CHECK(cs.xi >= 0.0);

        // a homodyne-mode phase redefinition must not change anything
        // physical: the rotated-psi convention absorbs it exactly
        const Eigen::VectorXcd psi2 = std::exp(Cplx(0.0, angle(rng))) * psi;
        const ModeReduction mr2 = mode_reduce(b, psi2);
        const DetectionCoeffs dc2 = detection_coeffs(b, psi2, mr2, phi);
        CHECK(mr2.eta == doctest::Approx(mr.eta).epsilon(1e-12));
        CHECK(mr2.alpha == doctest::Approx(mr.alpha).epsilon(1e-10));
        CHECK(mr2.beta == doctest::Approx(mr.beta).epsilon(1e-10));
        CHECK(std::abs(dc2.gamma) == doctest::Approx(std::abs(dc.gamma)).epsilon(1e-10));
        CHECK(std::abs(dc2.delta) == doctest::Approx(std::abs(dc.delta)).epsilon(1e-10));
        CHECK(dc2.p == doctest::Approx(dc.p).epsilon(1e-12));
        const Cplx gd1 = std::conj(dc.gamma) * dc.delta;
        const Cplx gd2 = std::conj(dc2.gamma) * dc2.delta;
        CHECK(std::abs(gd2 - gd1) < 1e-10);
    }
}

TEST_CASE("moment validation rejects inconsistent sums") {
    const ModeReduction mr = modered_rg(0.3, 0.5);
    CHECK_THROWS_AS(wigner_coeffs(mr, {1.0, 1.0, Cplx(2.0, 0.0), 3.0}),
                    NumericalError); // Cauchy-Schwarz
    CHECK_THROWS_AS(wigner_coeffs(mr, {0.8, 0.5, Cplx(0.0, 0.0), 1.0}),
                    NumericalError); // gg + dd > p_tot
    CHECK_THROWS_AS(wigner_coeffs(mr, {0.0, 0.0, Cplx(0.0, 0.0), 0.0}),
                    NumericalError); // p_tot = 0
}
