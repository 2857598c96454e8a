#include "pssv/spectral_filter.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/erf.hpp>

#include "pssv/errors.hpp"
#include "pssv/quadrature.hpp"

namespace pssv {

namespace {
constexpr double kPi = std::numbers::pi;

// integral of exp(-k w^2) over [lo, hi]
double gaussian_segment(double k, double lo, double hi) {
    const double rk = std::sqrt(k);
    return 0.5 * std::sqrt(kPi / k) * (std::erf(rk * hi) - std::erf(rk * lo));
}
} // namespace

double TimeKernel::operator()(double t) const {
    double s = 0.0;
    for (const auto& g : terms) s += g.amplitude * std::exp(-t * t / (2.0 * g.variance));
    return s;
}

double TimeKernel::fourier(double omega) const {
    double s = 0.0;
    for (const auto& g : terms) {
        s += g.amplitude * std::sqrt(2.0 * kPi * g.variance) *
             std::exp(-0.5 * g.variance * omega * omega);
    }
    return s;
}

TimeKernel TimeKernel::plus_scaled(const TimeKernel& other, double scale) const {
    TimeKernel out = *this;
    out.terms.reserve(terms.size() + other.terms.size());
    for (const auto& g : other.terms) {
        out.terms.push_back({scale * g.amplitude, g.variance});
    }
    return out;
}

TimeKernel TimeKernel::scaled(double scale) const {
    TimeKernel out = *this;
    for (auto& g : out.terms) g.amplitude *= scale;
    return out;
}

double SpectralMask::operator()(double omega) const {
    for (const auto& s : segments) {
        if (omega >= s.lo && omega <= s.hi) return s.value;
    }
    return 0.0;
}

SpectralMask SpectralMask::slit(double width) {
    if (width <= 0.0) throw NumericalError("slit width must be positive");
    return {{{-0.5 * width, 0.5 * width, 1.0}}};
}

SpectralMask compose(const SpectralMask& first, const SpectralMask& second) {
    SpectralMask out;
    for (const auto& a : first.segments) {
        for (const auto& b : second.segments) {
            const double lo = std::max(a.lo, b.lo);
            const double hi = std::min(a.hi, b.hi);
            if (lo < hi) out.segments.push_back({lo, hi, a.value * b.value});
        }
    }
    return out;
}

std::pair<TimeKernel, TimeKernel> time_kernels(const PulseGeometry& g) {
    if (g.uniform_profile) {
        throw NumericalError("time kernels apply to the gaussian model only");
    }
    const SeriesTables t = series_tables(g);
    const double eh0 = homodyne_amplitude(g);
    const double ps0 = fiber_amplitude(g);

    TimeKernel gamma_k, delta2_k;
    for (int m = 0; m <= t.order; ++m) {
        // spatial integral of e_h e_P^m phi_s and the temporal gaussian
        // exp(-2(1/tau^2 + m/tau_p^2) t^2) it multiplies
        const double spatial =
            eh0 * ps0 * kPi /
            (1.0 / (g.w * g.w) + m / (g.w_p * g.w_p) + 1.0 / (g.w_f * g.w_f));
        const double sigma = 1.0 / (g.tau * g.tau) + m / (g.tau_p * g.tau_p);
        const double variance = 1.0 / (4.0 * sigma);
        if (t.c[m] != 0.0) gamma_k.terms.push_back({t.c[m] * spatial, variance});
        if (t.d[m] != 0.0) delta2_k.terms.push_back({t.d[m] * spatial, variance});
    }
    return {gamma_k, delta2_k};
}

double spectral_moment(const TimeKernel& f, const TimeKernel& h,
                       const SpectralMask& mask, const FilterChain& fc) {
    double total = 0.0;
    for (const auto& seg : mask.segments) {
        if (seg.value < 0.0 || seg.value > 1.0) {
            throw NumericalError("mask transmission must lie in [0, 1]");
        }
        double part = 0.0;
        for (const auto& gf : f.terms) {
            for (const auto& gh : h.terms) {
                const double amp = gf.amplitude * gh.amplitude * 2.0 * kPi *
                                   std::sqrt(gf.variance * gh.variance);
                const double k = 0.5 * (gf.variance + gh.variance);
                part += amp * gaussian_segment(k, seg.lo, seg.hi);
            }
        }
        total += seg.value * part;
    }
    return fc.eta_c * fc.r / (4.0 * kPi * kPi) * total;
}

double spectral_moment_quad(const TimeKernel& f, const TimeKernel& h,
                            const SpectralMask& mask, const FilterChain& fc) {
    double total = 0.0;
    for (const auto& seg : mask.segments) {
        total += seg.value * quad::integrate(
                                 [&](double w) { return f.fourier(w) * h.fourier(w); },
                                 seg.lo, seg.hi, 1e-12);
    }
    return fc.eta_c * fc.r / (4.0 * kPi * kPi) * total;
}

AveragedMoments full_moments(const PulseGeometry& g, const FilterChain& fc,
                             double omega) {
    if (omega <= 0.0) throw NumericalError("slit width must be positive");
    const ModeReduction mr = modered_from_pulse(g);
    auto [gamma_k, delta2_k] = time_kernels(g);
    const SpectralMask slit = SpectralMask::slit(omega);

    FilterChain fc_omega = fc;
    fc_omega.omega = omega;

    AveragedMoments m;
    m.p_tot = ptot_narrow(g, fc_omega); // exactly linear in omega

    if (mr.beta > 0.0) {
        // per-frequency delta amplitude: (delta2 - (alpha/eta) gamma)/beta
        const TimeKernel delta_k =
            delta2_k.plus_scaled(gamma_k, -mr.alpha / mr.eta).scaled(1.0 / mr.beta);
        m.gg = spectral_moment(gamma_k, gamma_k, slit, fc) / (mr.eta * mr.eta);
        m.dd = spectral_moment(delta_k, delta_k, slit, fc);
        m.gd = spectral_moment(gamma_k, delta_k, slit, fc) / mr.eta;
    } else {
        m.gg = spectral_moment(gamma_k, gamma_k, slit, fc) / (mr.eta * mr.eta);
        m.dd = 0.0;
        m.gd = 0.0;
    }
    return m;
}

WignerForm wigner_full(const PulseGeometry& g, const FilterChain& fc,
                       double omega, const LossChain& losses) {
    const ModeReduction mr = modered_from_pulse(g);
    const AveragedMoments m = full_moments(g, fc, omega);
    return apply_losses(wigner_coeffs(mr, m), losses);
}

double homodyne_slit_transmission(const PulseGeometry& g, double omega) {
    if (omega <= 0.0) throw NumericalError("slit width must be positive");
    return std::erf(omega * g.tau / 4.0);
}

double slit_width_for_transmission(const PulseGeometry& g, double transmission) {
    if (transmission <= 0.0 || transmission >= 1.0) {
        throw NumericalError("transmission must lie in (0, 1)");
    }
    return 4.0 * boost::math::erf_inv(transmission) / g.tau;
}

} // namespace pssv
