#include "pssv/two_mode.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "pssv/errors.hpp"

namespace pssv {

namespace {
constexpr double kClampTol = 1e-10;

// sqrt with a tolerance window below zero: small negative radicands are
// numerical noise and clamp to 0, larger ones signal inconsistent input.
double checked_sqrt(double radicand, const char* what) {
    if (radicand < -kClampTol) {
        throw NumericalError(std::string(what) + ": radicand " +
                             std::to_string(radicand) + " below -1e-10");
    }
    return std::sqrt(std::max(radicand, 0.0));
}
} // namespace

double modered_residual(const ModeReduction& mr) {
    double res = std::abs(mr.eta * mr.eta - mr.alpha * mr.alpha - mr.beta * mr.beta - 1.0);
    res = std::max(res, std::max(0.0, 1.0 - mr.eta));
    res = std::max(res, std::max(0.0, -mr.alpha));
    res = std::max(res, std::max(0.0, -mr.beta));
    return res;
}

void require_valid(const ModeReduction& mr, double tol) {
    if (modered_residual(mr) > tol) {
        throw NumericalError("invalid mode reduction: eta^2-alpha^2-beta^2 != 1 "
                             "or sign constraint violated");
    }
}

ModeReduction modered_from_eta_alpha(double eta, double alpha, double phase) {
    double radicand = eta * eta - alpha * alpha - 1.0;
    // cancellation noise around zero is a single-mode reduction, not a
    // tiny beta: sqrt would amplify ulp-level residue to ~1e-8
    if (std::abs(radicand) <= 1e-12 * std::max(1.0, eta * eta)) radicand = 0.0;
    double beta = checked_sqrt(radicand, "mode reduction");
    return {eta, alpha, beta, phase};
}

QuadVariances variances_from_modered(const ModeReduction& mr) {
    require_valid(mr);
    const double b2 = mr.beta * mr.beta;
    return {(mr.eta + mr.alpha) * (mr.eta + mr.alpha) + b2,
            (mr.eta - mr.alpha) * (mr.eta - mr.alpha) + b2};
}

ModeReduction modered_from_variances(const QuadVariances& v) {
    if (v.vx <= 0.0 || v.vp <= 0.0) {
        throw NumericalError("variances must be positive");
    }
    const double uncert = v.vx * v.vp - 1.0;
    if (uncert < -1e-12) {
        throw NumericalError("uncertainty violation: V_x*V_p < 1");
    }
    const double den = 2.0 * std::sqrt(v.vx + v.vp + 2.0);
    ModeReduction mr;
    mr.eta = (v.vp + v.vx + 2.0) / den;
    mr.alpha = (v.vx - v.vp) / den;
    // radicand noise within the uncertainty tolerance is a minimal-
    // uncertainty state, not a tiny beta
    mr.beta = uncert <= 1e-12 ? 0.0 : 2.0 * std::sqrt(uncert) / den;
    mr.phase = 0.0;
    // alpha >= 0 convention: x is always the anti-squeezed quadrature. A
    // negative alpha corresponds to swapped variance labels, which the
    // caller expressed through V_x < V_p; fold it into the phase.
    if (mr.alpha < 0.0) {
        mr.alpha = -mr.alpha;
        mr.phase = std::numbers::pi / 2.0; // quadrature relabeling x <-> p
    }
    return mr;
}

SqueezeSpec squeeze_convert(const ModeReduction& mr) {
    require_valid(mr);
    SqueezeSpec sq;
    sq.r = std::atanh(mr.alpha / mr.eta);
    sq.s = std::exp(-2.0 * sq.r);
    const double gr = std::asinh(mr.beta);
    if (sq.r <= 0.0 && mr.beta > 0.0) {
        sq.pure_ndopa = true;
        sq.g = gr; // degenerate: stores the product g*r
    } else {
        sq.pure_ndopa = false;
        sq.g = sq.r > 0.0 ? gr / sq.r : 0.0;
    }
    return sq;
}

ModeReduction modered_from_squeeze(const SqueezeSpec& sq) {
    if (sq.r < 0.0) throw NumericalError("squeezing parameter r must be >= 0");
    const double gr = sq.pure_ndopa ? sq.g : sq.g * sq.r;
    ModeReduction mr;
    mr.eta = std::cosh(sq.r) * std::cosh(gr);
    mr.alpha = std::sinh(sq.r) * std::cosh(gr);
    mr.beta = std::sinh(gr);
    mr.phase = 0.0;
    return mr;
}

} // namespace pssv
