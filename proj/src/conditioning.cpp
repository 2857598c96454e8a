#include "pssv/conditioning.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pssv/errors.hpp"
#include "pssv/optim.hpp"
#include "pssv/quadrature.hpp"

namespace pssv {

namespace {
using Cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

void require_moments(const AveragedMoments& m) {
    if (m.gg < 0.0 || m.dd < 0.0) {
        throw NumericalError("averaged moments must be nonnegative");
    }
    if (std::norm(m.gd) > m.gg * m.dd * (1.0 + 1e-10) + 1e-30) {
        throw NumericalError("averaged moments violate Cauchy-Schwarz");
    }
    if (m.gg + m.dd > m.p_tot * (1.0 + 1e-10)) {
        throw NumericalError("averaged moments exceed total detection probability");
    }
}
} // namespace

DetectionCoeffs detection_coeffs(const FiniteBogoliubov& b,
                                 const Eigen::VectorXcd& psi_h,
                                 const ModeReduction& mr,
                                 const Eigen::VectorXcd& phi_d) {
    require_valid(mr);
    if (phi_d.size() != b.modes() || psi_h.size() != b.modes()) {
        throw NumericalError("mode dimension does not match transform");
    }
    // Work with the rotated homodyne mode for which alpha is real >= 0.
    const Cplx rot = std::exp(Cplx(0.0, mr.phase));
    const Eigen::VectorXcd psi = rot * psi_h;

    DetectionCoeffs dc;
    // gamma = (1/eta) psi^dag u v^T phi^*
    dc.gamma = (psi.adjoint() * b.u * b.v.transpose() * phi_d.conjugate())(0) / mr.eta;
    dc.p = (phi_d.adjoint() * b.v * b.v.adjoint() * phi_d)(0).real();
    if (mr.beta > 0.0) {
        const Cplx vvh = (phi_d.adjoint() * b.v * b.v.adjoint() * psi)(0);
        dc.delta = (vvh - mr.alpha * dc.gamma) / mr.beta;
    } else {
        dc.delta = 0.0;
        dc.single_mode = true;
    }
    return dc;
}

ConditionalState conditional_state(const DetectionCoeffs& dc) {
    if (dc.p <= 0.0) {
        throw NumericalError("no detection: P must be positive");
    }
    double xi = (std::norm(dc.gamma) + std::norm(dc.delta)) / dc.p;
    if (xi > 1.0 + 1e-10) {
        throw NumericalError("modal purity above 1: inconsistent detection coefficients");
    }
    xi = std::min(xi, 1.0);
    return {xi, std::atan2(std::abs(dc.delta), std::abs(dc.gamma))};
}

ConditionalState averaged_state(const AveragedMoments& m) {
    require_moments(m);
    if (m.p_tot <= 0.0) {
        throw NumericalError("no detection: P_tot must be positive");
    }
    double xi = std::min((m.gg + m.dd) / m.p_tot, 1.0);
    return {xi, std::atan2(std::sqrt(m.dd), std::sqrt(m.gg))};
}

Eigen::Matrix3cd density_matrix(const ConditionalState& cs) {
    if (cs.xi < 0.0 || cs.xi > 1.0) {
        throw NumericalError("modal purity must lie in [0, 1]");
    }
    Eigen::Vector3cd photon(0.0, std::cos(cs.theta), std::sin(cs.theta));
    Eigen::Matrix3cd rho = cs.xi * photon * photon.adjoint();
    rho(0, 0) += 1.0 - cs.xi;
    return rho;
}

AveragedMoments average_moments(std::span<const DetectionCoeffs> modes,
                                std::span<const double> weights) {
    if (modes.empty()) {
        throw NumericalError("average over an empty set of detection modes");
    }
    if (!weights.empty() && weights.size() != modes.size()) {
        throw NumericalError("weight count does not match mode count");
    }
    AveragedMoments m;
    for (std::size_t j = 0; j < modes.size(); ++j) {
        const double w = weights.empty() ? 1.0 : weights[j];
        m.gg += w * std::norm(modes[j].gamma);
        m.dd += w * std::norm(modes[j].delta);
        m.gd += w * std::conj(modes[j].gamma) * modes[j].delta;
        m.p_tot += w * modes[j].p;
    }
    return m;
}

WignerForm wigner_coeffs(const ModeReduction& mr, const AveragedMoments& m) {
    require_valid(mr);
    require_moments(m);
    if (m.p_tot <= 0.0) {
        throw NumericalError("P_tot must be positive");
    }
    const QuadVariances v = variances_from_modered(mr);
    const double ep = mr.eta + mr.alpha;
    const double em = mr.eta - mr.alpha;
    const double re_gd = m.gd.real();
    WignerForm w;
    w.vx = v.vx;
    w.vp = v.vp;
    w.a = (ep * ep * m.gg + mr.beta * mr.beta * m.dd + 2.0 * ep * mr.beta * re_gd) / m.p_tot;
    w.b = (em * em * m.gg + mr.beta * mr.beta * m.dd - 2.0 * em * mr.beta * re_gd) / m.p_tot;
    w.c = 1.0 - w.a / w.vx - w.b / w.vp;
    w.d = -8.0 * m.gd.imag() * mr.eta * mr.beta / m.p_tot;
    return w;
}

WignerForm apply_losses(const WignerForm& w, const LossChain& l) {
    const double k = l.eta_hom * l.t;
    if (k <= 0.0 || k > 1.0) {
        throw NumericalError("loss chain product eta_hom*T must lie in (0, 1]");
    }
    WignerForm out;
    out.vx = k * (w.vx - 1.0) + 1.0;
    out.vp = k * (w.vp - 1.0) + 1.0;
    out.a = k * w.a;
    out.b = k * w.b;
    out.d = k * w.d;
    out.c = 1.0 - out.a / out.vx - out.b / out.vp;
    return out;
}

double eval_wigner(const WignerForm& w, double x, double p) {
    const double w0 = std::exp(-x * x / w.vx - p * p / w.vp) /
                      (kPi * std::sqrt(w.vx * w.vp));
    return (w.c + 2.0 * w.a * x * x / (w.vx * w.vx) +
            2.0 * w.b * p * p / (w.vp * w.vp) + w.d * x * p / (w.vx * w.vp)) * w0;
}

WignerForm squeezed_vacuum_form(const QuadVariances& v) {
    return {0.0, 0.0, 1.0, 0.0, v.vx, v.vp};
}

WignerForm empirical_coeffs(const QuadVariances& v, double xi, bool* degenerate) {
    if (xi < 0.0 || xi > 1.0) {
        throw NumericalError("empirical modal purity must lie in [0, 1]");
    }
    const double denom = v.vx + v.vp - 2.0;
    if (degenerate) *degenerate = false;
    if (std::abs(denom) < 1e-14) {
        if (degenerate) *degenerate = true;
        return squeezed_vacuum_form(v);
    }
    WignerForm w;
    w.vx = v.vx;
    w.vp = v.vp;
    w.a = xi * (v.vx - 1.0) * (v.vx - 1.0) / denom;
    w.b = xi * (v.vp - 1.0) * (v.vp - 1.0) / denom;
    w.c = 1.0 - w.a / w.vx - w.b / w.vp;
    w.d = 0.0;
    return w;
}

double section_rms_error(const WignerForm& model, const WignerForm& target) {
    constexpr int kPoints = 161;
    constexpr double kRange = 4.0;
    double sum_sq = 0.0;
    double max_abs = 0.0;
    for (int i = 0; i < kPoints; ++i) {
        const double t = -kRange + 2.0 * kRange * i / (kPoints - 1);
        for (auto [x, p] : {std::pair{t, 0.0}, std::pair{0.0, t}}) {
            const double wt = eval_wigner(target, x, p);
            const double wm = eval_wigner(model, x, p);
            sum_sq += (wm - wt) * (wm - wt);
            max_abs = std::max(max_abs, std::abs(wt));
        }
    }
    if (max_abs <= 0.0) {
        throw NumericalError("fit target vanishes on the comparison sections");
    }
    return 100.0 * std::sqrt(sum_sq / (2 * kPoints)) / max_abs;
}

namespace {
// Loss-treated empirical form for source (r, g) and purity xi. Applying
// the empirical formula at the lossy variances equals building it at the
// source variances and then applying the losses.
WignerForm empirical_with_losses(double r, double g, double xi, const LossChain& l) {
    const ModeReduction mr = modered_from_squeeze({r, g, std::exp(-2.0 * r), false});
    const QuadVariances v = variances_from_modered(mr);
    const QuadVariances vl{l.eta_hom * l.t * (v.vx - 1.0) + 1.0,
                           l.eta_hom * l.t * (v.vp - 1.0) + 1.0};
    return empirical_coeffs(vl, xi);
}
} // namespace

EmpiricalParams fit_empirical(const WignerForm& target, const SqueezeSpec& sqz,
                              const LossChain& losses, bool fit_g) {
    if (sqz.pure_ndopa) {
        throw NumericalError("empirical fit needs a finite NDOPA ratio g");
    }
    auto err_at = [&](double xi, double g) {
        return section_rms_error(empirical_with_losses(sqz.r, g, xi, losses), target);
    };
    auto best_xi = [&](double g) {
        return optim::golden_minimize([&](double xi) { return err_at(xi, g); },
                                      0.0, 1.0, 1e-6);
    };

    EmpiricalParams out;
    if (!fit_g) {
        auto [xi, err] = best_xi(sqz.g);
        out = {xi, sqz.g, err, false};
        return out;
    }

    // Coarse scan over g, then golden-section refinement in the winning
    // bracket; the inner xi search runs for every g sample.
    const double g_hi = std::max(2.0, 2.0 * sqz.g);
    constexpr int kScan = 81;
    int best = 0;
    double best_err = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kScan; ++i) {
        const double g = g_hi * i / (kScan - 1);
        const double err = best_xi(g).second;
        if (err < best_err) {
            best_err = err;
            best = i;
        }
    }
    const double step = g_hi / (kScan - 1);
    const double lo = std::max(0.0, step * (best - 1));
    const double hi = std::min(g_hi, step * (best + 1));
    auto [g_opt, err] = optim::golden_minimize(
        [&](double g) { return best_xi(g).second; }, lo, hi, 1e-6);
    out = {best_xi(g_opt).first, g_opt, err, true};
    return out;
}

double equivalent_bs_ratio(double theta_j, double theta_0, double r) {
    if (r <= 0.0) {
        throw NumericalError("equivalent beamsplitter needs r > 0");
    }
    if (std::abs(std::sin(theta_j)) < 1e-12 || std::abs(std::sin(theta_0)) < 1e-12) {
        throw NumericalError("mixing angle at a pole of 1/tan");
    }
    return (1.0 / std::tan(theta_j) - 1.0 / std::tan(theta_0)) / std::cosh(r);
}

namespace {
// Marginal of the two-mode initial Wigner function over the auxiliary
// output mode. Quadrature window +-8 covers the unit-variance gaussian
// factors far beyond the requested tolerances.
double oracle_integral(const ModeReduction& mr, Cplx gamma, Cplx delta,
                       double xi, double x, double p, double abs_tol) {
    require_valid(mr);
    const double bb = 1.0 + mr.beta * mr.beta;
    const double cx = (mr.eta - mr.alpha) / bb;
    const double cp = (mr.eta + mr.alpha) / bb;
    const double n2 = std::norm(gamma) + std::norm(delta);

    auto integrand = [&](double x1, double p1) {
        const double x0 = cx * (x - mr.beta * x1);
        const double p0 = cp * (p + mr.beta * p1);
        const double gauss =
            std::exp(-(x0 * x0 + p0 * p0 + x1 * x1 + p1 * p1)) / (kPi * kPi);
        double val = (1.0 - xi) * gauss;
        if (xi > 0.0) {
            const Cplx z = std::conj(gamma) * Cplx(x0, p0) +
                           std::conj(delta) * Cplx(x1, p1);
            val += xi * (2.0 * std::norm(z) / n2 - 1.0) * gauss;
        }
        return val / bb;
    };
    constexpr double kWin = 8.0;
    return quad::integrate_2d(integrand, -kWin, kWin, -kWin, kWin, abs_tol);
}
} // namespace

double oracle_wigner_numeric(const ModeReduction& mr, const ConditionalState& cs,
                             double x, double p, double abs_tol) {
    return oracle_integral(mr, std::cos(cs.theta), std::sin(cs.theta), cs.xi,
                           x, p, abs_tol);
}

double oracle_wigner_numeric(const ModeReduction& mr, const DetectionCoeffs& dc,
                             double x, double p, double abs_tol) {
    const ConditionalState cs = conditional_state(dc);
    return oracle_integral(mr, dc.gamma, dc.delta, cs.xi, x, p, abs_tol);
}

double wigner_norm_quad(const WignerForm& w, double abs_tol) {
    const double lx = 8.0 * std::sqrt(w.vx);
    const double lp = 8.0 * std::sqrt(w.vp);
    return quad::integrate_2d([&](double x, double p) { return eval_wigner(w, x, p); },
                              -lx, lx, -lp, lp, abs_tol);
}

double wigner_grid_min(const WignerForm& w, int points_per_axis) {
    const double lx = 5.0 * std::sqrt(w.vx);
    const double lp = 5.0 * std::sqrt(w.vp);
    double min_val = std::numeric_limits<double>::infinity();
    for (int i = 0; i < points_per_axis; ++i) {
        const double x = -lx + 2.0 * lx * i / (points_per_axis - 1);
        for (int j = 0; j < points_per_axis; ++j) {
            const double p = -lp + 2.0 * lp * j / (points_per_axis - 1);
            min_val = std::min(min_val, eval_wigner(w, x, p));
        }
    }
    return min_val;
}

} // namespace pssv
