#include "pssv/validation.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "pssv/experiment.hpp"
#include "pssv/quadrature.hpp"
#include "pssv/spectral_filter.hpp"

namespace pssv {

namespace {
constexpr double kPi = std::numbers::pi;

FiniteBogoliubov random_composition(std::mt19937_64& rng, int n, int factors) {
    std::uniform_real_distribution<double> par(0.1, 0.8);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
    std::uniform_int_distribution<int> mode(0, n - 1);
    std::uniform_int_distribution<int> kind(0, 3);
    FiniteBogoliubov b = identity_transform(n);
    for (int i = 0; i < factors; ++i) {
        int j = mode(rng), k = mode(rng);
        if (k == j) k = (j + 1) % n;
        switch (kind(rng)) {
        case 0: b = compose(single_mode_squeezer(n, j, par(rng)), b); break;
        case 1: b = compose(two_mode_squeezer(n, j, k, par(rng)), b); break;
        case 2: b = compose(beam_splitter(n, j, k, angle(rng), angle(rng)), b); break;
        default: b = compose(phase_shift(n, j, angle(rng)), b); break;
        }
    }
    return b;
}

Eigen::VectorXcd random_mode(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> gauss;
    Eigen::VectorXcd psi(n);
    for (int i = 0; i < n; ++i) psi(i) = std::complex<double>(gauss(rng), gauss(rng));
    psi /= psi.norm();
    return psi;
}

ModeReduction random_modered(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> r_dist(0.02, 0.8);
    std::uniform_real_distribution<double> g_dist(0.0, 1.2);
    const double r = r_dist(rng), g = g_dist(rng);
    return modered_from_squeeze({r, g, std::exp(-2.0 * r), false});
}
} // namespace

std::vector<CheckResult> run_validation(const ExperimentConfig& cfg,
                                        std::uint64_t seed) {
    validate_config(cfg);
    std::mt19937_64 rng(seed);
    std::vector<CheckResult> out;
    auto check = [&](const std::string& name, double measured, double tol) {
        out.push_back({name, measured, tol, measured <= tol});
    };

    // --- finite Bogoliubov layer -----------------------------------------
    {
        double worst = 0.0, worst_id = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            const int n = 2 + static_cast<int>(trial % 3);
            FiniteBogoliubov b = random_composition(rng, n, 6);
            worst = std::max(worst, check_symplectic(b));
            const ModeReduction mr = mode_reduce(b, random_mode(rng, n));
            worst_id = std::max(worst_id, modered_residual(mr));
        }
        check("symplectic residual of composed transforms", worst, 1e-10);
        check("mode-reduction identity on composed transforms", worst_id, 1e-10);

        FiniteBogoliubov broken = random_composition(rng, 2, 4);
        broken.u(0, 0) += 1e-3;
        const double res = check_symplectic(broken);
        out.push_back({"negative control: perturbed transform is flagged", res, 1e-4,
                       res > 1e-4});

        // single-mode transforms reduce with beta = 0
        double worst_beta = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
            std::uniform_real_distribution<double> rr(0.05, 1.0);
            FiniteBogoliubov b = single_mode_squeezer(1, 0, rr(rng));
            Eigen::VectorXcd psi(1);
            psi(0) = 1.0;
            worst_beta = std::max(worst_beta, mode_reduce(b, psi).beta);
        }
        check("single-mode transform gives beta = 0", worst_beta, 1e-12);
    }

    // --- parameterization round trips ------------------------------------
    {
        double worst = 0.0;
        for (int trial = 0; trial < 200; ++trial) {
            const ModeReduction mr = random_modered(rng);
            const QuadVariances v = variances_from_modered(mr);
            const ModeReduction mr2 = modered_from_variances(v);
            const SqueezeSpec sq = squeeze_convert(mr);
            const ModeReduction mr3 = modered_from_squeeze(sq);
            worst = std::max({worst, std::abs(mr2.eta - mr.eta),
                              std::abs(mr2.alpha - mr.alpha),
                              std::abs(mr2.beta - mr.beta),
                              std::abs(mr3.eta - mr.eta),
                              std::abs(mr3.alpha - mr.alpha),
                              std::abs(mr3.beta - mr.beta)});
        }
        check("round trips (eta,alpha,beta) <-> (V_x,V_p) <-> (r,g)", worst, 1e-10);
    }

    // --- Wigner quadrature oracle ----------------------------------------
    {
        std::uniform_real_distribution<double> xi_dist(0.0, 1.0);
        std::uniform_real_distribution<double> th_dist(0.0, 0.5 * kPi);
        std::uniform_real_distribution<double> probe(-2.0, 2.0);
        double worst = 0.0;
        for (int draw = 0; draw < 20; ++draw) {
            const ModeReduction mr = random_modered(rng);
            const ConditionalState cs{xi_dist(rng), th_dist(rng)};
            AveragedMoments m;
            m.gg = cs.xi * std::cos(cs.theta) * std::cos(cs.theta);
            m.dd = cs.xi * std::sin(cs.theta) * std::sin(cs.theta);
            m.gd = cs.xi * std::cos(cs.theta) * std::sin(cs.theta);
            m.p_tot = 1.0;
            const WignerForm w = wigner_coeffs(mr, m);
            for (int k = 0; k < 5; ++k) {
                const double x = probe(rng), p = probe(rng);
                const double numeric = oracle_wigner_numeric(mr, cs, x, p);
                worst = std::max(worst, std::abs(numeric - eval_wigner(w, x, p)));
            }
        }
        check("2-D quadrature oracle vs closed-form Wigner function", worst, 1e-6);
    }

    // --- Riemann-sum temporal discretization ------------------------------
    {
        PulseGeometry geom = cfg.geometry();
        geom.qle0 = cfg.qle0 >= 0.0 ? cfg.qle0 : solve_pump_amplitude(geom, cfg.target_s);
        const auto disc = temporal::discretize(geom, 1600, 8.0 * std::max(geom.tau, geom.tau_p));
        const SeriesTables t = series_tables(geom);

        auto series = [&](const std::vector<double>& coef, auto moment, double scale) {
            double s = 0.0;
            for (int m = t.order; m >= 0; --m) {
                if (coef[m] != 0.0) s += coef[m] * moment(geom, m);
            }
            return scale * s;
        };
        const double eta2_series = series(t.b, temporal::moment_p, 1.0);
        const double etaal_series = series(t.c, temporal::moment_p, 1.0);
        const double ptot_series = series(t.d, temporal::moment_q, 4.0 * kPi * kPi);
        const double gam_series = series(t.c, temporal::moment_r, 2.0 * kPi);
        const double del2_series = series(t.d, temporal::moment_r, 2.0 * kPi);

        const Eigen::VectorXd eh = disc.psi_h.real() / std::sqrt(disc.dt);
        const Eigen::VectorXd uu = disc.transform.u.diagonal().real();
        const Eigen::VectorXd vv = disc.transform.v.diagonal().real();
        const double dt = disc.dt;
        const double eta2_sum = (eh.array().square() * uu.array().square()).sum() * dt;
        const double etaal_sum = (eh.array().square() * uu.array() * vv.array()).sum() * dt;
        const double ptot_sum = vv.array().square().sum() * dt;
        const double gam_sum = (eh.array() * uu.array() * vv.array()).sum() * dt;
        const double del2_sum = (eh.array() * vv.array().square()).sum() * dt;

        double worst = std::max({std::abs(eta2_sum - eta2_series),
                                 std::abs(etaal_sum - etaal_series),
                                 std::abs(ptot_sum - ptot_series),
                                 std::abs(gam_sum - gam_series),
                                 std::abs(del2_sum - del2_series)});
        check("Riemann sums vs temporal series closed forms", worst, 1e-6);

        // matrix path: mode_reduce + detection_coeffs against the same sums
        const ModeReduction mr = mode_reduce(disc.transform, disc.psi_h);
        const DetectionCoeffs dc =
            detection_coeffs(disc.transform, disc.psi_h, mr, disc.phi_d);
        const ConditionalState cs = conditional_state(dc);
        const double eta = std::sqrt(eta2_series);
        const double alpha = etaal_series / eta;
        const double beta = std::sqrt(eta * eta - alpha * alpha - 1.0);
        const double gam_cl = gam_series / eta;
        const double del_cl = (del2_series - alpha * gam_cl) / beta;
        const double xi_cl =
            (gam_cl * gam_cl + del_cl * del_cl) / ptot_series; // common window scale
        double worst_dc = std::max(std::abs(mr.eta - eta), std::abs(mr.alpha - alpha));
        worst_dc = std::max(worst_dc, std::abs(cs.xi - xi_cl));
        worst_dc = std::max(worst_dc,
                            std::abs(cs.theta - std::atan2(std::abs(del_cl), gam_cl)));
        check("discretized detection coefficients vs closed forms", worst_dc, 1e-6);
    }

    // --- gaussian moments against direct quadrature -----------------------
    {
        PulseGeometry geom = cfg.geometry();
        geom.qle0 = cfg.qle0 >= 0.0 ? cfg.qle0 : solve_pump_amplitude(geom, cfg.target_s);
        const FilterChain fc = cfg.filter_chain();

        check("normalization of e_h (quadrature)",
              std::abs(quadrature_oracle(geom, fc, PulseIntegral::pm, 0) - 1.0), 1e-10);

        double worst = 0.0;
        for (int m = 1; m <= 6; ++m) {
            worst = std::max(worst, std::abs(quadrature_oracle(geom, fc, PulseIntegral::pm, m) -
                                             moment_p(geom, m)));
            worst = std::max(worst, std::abs(quadrature_oracle(geom, fc, PulseIntegral::qm, m) -
                                             moment_q(geom, m)));
            worst = std::max(worst, std::abs(quadrature_oracle(geom, fc, PulseIntegral::rm, m) -
                                             moment_r(geom, m)));
        }
        check("gaussian moments m=1..6 vs quadrature", worst, 1e-9);

        const SeriesTables t = series_tables(geom);
        const double eta = std::sqrt(t.sum_bp());
        const NarrowCoeffs nc = narrowfilter_coeffs(geom, fc);
        const ModeReduction mr = modered_from_pulse(geom);
        double worst2 = std::abs(quadrature_oracle(geom, fc, PulseIntegral::eta2) - t.sum_bp());
        worst2 = std::max(worst2, std::abs(quadrature_oracle(geom, fc, PulseIntegral::eta_alpha) -
                                           t.sum_cp()));
        worst2 = std::max(worst2, std::abs(quadrature_oracle(geom, fc, PulseIntegral::p_tot) -
                                           ptot_narrow(geom, fc)));
        worst2 = std::max(worst2, std::abs(quadrature_oracle(geom, fc, PulseIntegral::gamma_bar) -
                                           eta * nc.gamma_bar));
        worst2 = std::max(worst2,
                          std::abs(quadrature_oracle(geom, fc, PulseIntegral::delta_bar) -
                                   (mr.beta * nc.delta_bar + mr.alpha * nc.gamma_bar)));
        check("series sums vs direct spatio-temporal quadrature", worst2, 1e-9);
    }

    // --- uniform-profile limit --------------------------------------------
    {
        PulseGeometry geom = cfg.geometry();
        geom.uniform_profile = true;
        geom.qle0 = 0.35;
        const ModeReduction mr = modered_from_pulse(geom);
        const AveragedMoments m = narrow_moments(geom, cfg.filter_chain());
        const WignerForm w = wigner_coeffs(mr, m);
        check("uniform profile: beta = 0", mr.beta, 1e-10);
        check("uniform profile: xi_bar = 1", std::abs(averaged_state(m).xi - 1.0), 1e-12);
        check("uniform profile: C_bar = -1", std::abs(w.c + 1.0), 1e-12);
        check("uniform profile: W(0,0) = -1/pi",
              std::abs(eval_wigner(w, 0.0, 0.0) + 1.0 / kPi), 1e-10);
    }

    // --- Wigner-form invariants on random inputs ---------------------------
    {
        std::uniform_real_distribution<double> xi_dist(0.0, 1.0);
        std::uniform_real_distribution<double> th_dist(0.0, 0.5 * kPi);
        double worst_norm = 0.0, worst_floor = 0.0, worst_c = 0.0;
        for (int trial = 0; trial < 50; ++trial) {
            const ModeReduction mr = random_modered(rng);
            const double xi = xi_dist(rng), th = th_dist(rng);
            AveragedMoments m{xi * std::cos(th) * std::cos(th),
                              xi * std::sin(th) * std::sin(th),
                              xi * std::cos(th) * std::sin(th), 1.0};
            const WignerForm w = wigner_coeffs(mr, m);
            worst_c = std::max(worst_c,
                               std::abs(w.c - (1.0 - w.a / w.vx - w.b / w.vp)));
            worst_norm = std::max(worst_norm, std::abs(wigner_norm_quad(w) - 1.0));
            worst_floor = std::max(worst_floor,
                                   -1.0 / kPi - wigner_grid_min(w));
        }
        check("normalization integral of W equals 1", worst_norm, 1e-6);
        check("grid minimum of W above -1/pi", worst_floor, 1e-9);
        check("C identity of W coefficients", worst_c, 1e-12);
    }

    // --- scale invariance and losses ---------------------------------------
    {
        PulseGeometry geom = cfg.geometry();
        geom.qle0 = cfg.qle0 >= 0.0 ? cfg.qle0 : solve_pump_amplitude(geom, cfg.target_s);
        const FilterChain fc1 = cfg.filter_chain();
        FilterChain fc2 = fc1;
        fc2.omega *= 3.7;
        fc2.eta_c = std::min(1.0, fc1.eta_c * 2.1);
        fc2.r = std::min(0.9, fc1.r * 1.9);
        const ModeReduction mr = modered_from_pulse(geom);
        const AveragedMoments m1 = narrow_moments(geom, fc1);
        const AveragedMoments m2 = narrow_moments(geom, fc2);
        const WignerForm w1 = wigner_coeffs(mr, m1);
        const WignerForm w2 = wigner_coeffs(mr, m2);
        const ConditionalState a1 = averaged_state(m1), a2 = averaged_state(m2);
        const double worst =
            std::max({std::abs(w1.a - w2.a), std::abs(w1.b - w2.b),
                      std::abs(w1.c - w2.c), std::abs(w1.d - w2.d),
                      std::abs(a1.xi - a2.xi), std::abs(a1.theta - a2.theta)});
        check("narrow-filter results invariant under (Omega, eta_c, R) scaling",
              worst, 1e-12);

        const WignerForm lossy = apply_losses(w1, cfg.loss_chain());
        double viol = 0.0;
        viol = std::max(viol, std::abs(wigner_norm_quad(lossy) - 1.0));
        if (w1.c < 0.0) {
            viol = std::max(viol, eval_wigner(w1, 0, 0) - eval_wigner(lossy, 0, 0));
        }
        viol = std::max(viol, (lossy.vx - 1.0) * (w1.vx - 1.0) < -1e-14 ? 1.0 : 0.0);
        check("losses keep normalization and pull W(0,0) toward 0", viol, 1e-6);
    }

    // --- spectral filter ----------------------------------------------------
    {
        PulseGeometry geom = cfg.geometry();
        geom.qle0 = cfg.qle0 >= 0.0 ? cfg.qle0 : solve_pump_amplitude(geom, cfg.target_s);
        const FilterChain fc = cfg.filter_chain();
        auto [gk, dk] = time_kernels(geom);

        // Parseval: all-pass slit on f = h equals the time-domain energy
        const SpectralMask wide = SpectralMask::slit(40.0 / geom.tau);
        const double lhs = spectral_moment(gk, gk, wide, fc);
        const double energy = quad::integrate([&](double t) { return gk(t) * gk(t); },
                                              -8.0 * geom.tau, 8.0 * geom.tau, 1e-13);
        const double rhs = fc.eta_c * fc.r / (2.0 * kPi) * energy;
        check("Parseval identity of the spectral moment",
              std::abs(lhs - rhs) / std::abs(rhs), 1e-10);

        const SpectralMask slit = SpectralMask::slit(fc.omega);
        const double analytic = spectral_moment(gk, dk, slit, fc);
        const double numeric = spectral_moment_quad(gk, dk, slit, fc);
        check("analytic vs quadrature spectral moment",
              std::abs(analytic - numeric) / std::max(1e-30, std::abs(analytic)), 1e-10);

        const LossChain losses = cfg.loss_chain();
        const double omega_2pc = slit_width_for_transmission(geom, 0.02);
        const double w_full = eval_wigner(wigner_full(geom, fc, omega_2pc, losses), 0, 0);
        const double w_narrow = eval_wigner(
            apply_losses(wigner_coeffs(modered_from_pulse(geom), narrow_moments(geom, fc)),
                         losses), 0, 0);
        check("full evaluation matches narrow filter at 2% transmission",
              std::abs(w_full - w_narrow), 1e-3);

        double worst_mono = 0.0, worst_cs = 0.0;
        double prev_xi = 1.0;
        for (double trans : {0.01, 0.05, 0.1, 0.2, 0.35, 0.5, 0.65}) {
            const double omega = slit_width_for_transmission(geom, trans);
            const AveragedMoments m = full_moments(geom, fc, omega);
            const double xi = averaged_state(m).xi;
            worst_mono = std::max(worst_mono, xi - prev_xi);
            prev_xi = xi;
            worst_cs = std::max(worst_cs, std::norm(m.gd) - m.gg * m.dd);
        }
        check("modal purity non-increasing with slit width", worst_mono, 1e-12);
        check("Cauchy-Schwarz of averaged moments along the slit sweep", worst_cs, 1e-15);

        // composition = pointwise product
        SpectralMask a{{{-1.0, 0.5, 0.8}, {0.6, 2.0, 0.4}}};
        SpectralMask b2{{{-0.7, 1.2, 0.5}}};
        const SpectralMask ab = compose(a, b2);
        double worst_comp = 0.0;
        for (double w = -1.5; w <= 2.5; w += 0.01) {
            worst_comp = std::max(worst_comp, std::abs(ab(w) - a(w) * b2(w)));
        }
        check("mask composition is the pointwise product", worst_comp, 1e-15);
    }

    // --- effective pump ------------------------------------------------------
    {
        PulseGeometry geom = cfg.geometry();
        const EffectivePump ep = effective_pump(geom);
        double area_f = 0.0, sym = 0.0;
        const std::size_t n = ep.t.size();
        for (std::size_t i = 0; i + 1 < n; ++i) {
            area_f += 0.5 * (ep.f[i] + ep.f[i + 1]) * (ep.t[i + 1] - ep.t[i]);
        }
        for (std::size_t i = 0; i < n; ++i) {
            sym = std::max(sym, std::abs(ep.f[i] - ep.f[n - 1 - i]));
        }
        const double tau0 = geom.tau / std::sqrt(2.0);
        const double area_e = tau0 * std::sqrt(kPi / 2.0); // gaussian of unit peak
        check("effective pump conserves pulse area", std::abs(area_f - area_e), 1e-10);
        check("effective pump symmetric about t = 0", sym, 1e-12);

        PulseGeometry no_gate = geom;
        no_gate.tau_g = 0.0;
        const EffectivePump ep0 = effective_pump(no_gate);
        check("zero gate leaves the pump profile unchanged", ep0.residual, 1e-12);
    }

    // --- series truncation stability -----------------------------------------
    {
        PulseGeometry geom = cfg.geometry();
        geom.qle0 = cfg.qle0 >= 0.0 ? cfg.qle0 : solve_pump_amplitude(geom, cfg.target_s);
        const SeriesTables coarse = series_tables(geom, 1e-12);
        const SeriesTables fine = series_tables(geom, 1e-15);
        const double worst = std::max(
            {std::abs(coarse.sum_bp() - fine.sum_bp()) / fine.sum_bp(),
             std::abs(coarse.sum_cp() - fine.sum_cp()) / fine.sum_cp(),
             std::abs(coarse.sum_dq() - fine.sum_dq()) / fine.sum_dq()});
        check("series sums stable under deeper truncation", worst, 1e-12);
    }

    return out;
}

} // namespace pssv
