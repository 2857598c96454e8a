#ifndef PSSV_SPECTRAL_FILTER_HPP
#define PSSV_SPECTRAL_FILTER_HPP

#include <utility>
#include <vector>

#include "pssv/conditioning.hpp"
#include "pssv/pulse_model.hpp"

// Detection averages through a spectral slit of finite width: the
// spatially integrated kernels of the concrete pulse model are sums of
// gaussians in time, so their Fourier transforms and the slit-windowed
// frequency integrals have erf closed forms. Fourier convention:
// f~(omega) = integral f(t) exp(-i omega t) dt.

namespace pssv {

struct GaussianTerm {
    double amplitude;
    double variance; // temporal variance, fs^2: term = a exp(-t^2/(2 var))
};

// Real even sum of gaussians in time.
struct TimeKernel {
    std::vector<GaussianTerm> terms;

    double operator()(double t) const;
    double fourier(double omega) const; // real for these kernels

    // this + scale * other
    TimeKernel plus_scaled(const TimeKernel& other, double scale) const;
    TimeKernel scaled(double scale) const;
};

// Piecewise-constant spectral transmission, 0 <= T(omega) <= 1 everywhere;
// zero outside the listed segments.
struct SpectralMask {
    struct Segment {
        double lo, hi;
        double value;
    };
    std::vector<Segment> segments;

    double operator()(double omega) const;
    static SpectralMask slit(double width); // T = 1 on [-width/2, width/2]
};

// Stacked filters multiply pointwise.
SpectralMask compose(const SpectralMask& first, const SpectralMask& second);

// Spatially integrated detection kernels of the pulse model, per series
// order in the pump profile:
//   gamma kernel:  integral dxdy e_h u v phi_s   (uses the uv coefficients)
//   delta2 kernel: integral dxdy e_h v^2 phi_s   (uses the v^2 coefficients)
std::pair<TimeKernel, TimeKernel> time_kernels(const PulseGeometry& g);

// (eta_c R / 4pi^2) integral T(omega) f~(omega) h~*(omega) domega, via the
// erf closed form per gaussian term pair.
double spectral_moment(const TimeKernel& f, const TimeKernel& h,
                       const SpectralMask& mask, const FilterChain& fc);

// Same moment by adaptive quadrature of the Fourier transforms; cross-check
// for the analytic path.
double spectral_moment_quad(const TimeKernel& f, const TimeKernel& h,
                            const SpectralMask& mask, const FilterChain& fc);

// Detection-averaged moments through a slit of width omega, without the
// narrow-filter approximation. P_tot stays exactly linear in omega: the
// per-frequency detection probability of this model is flat across the
// slit.
AveragedMoments full_moments(const PulseGeometry& g, const FilterChain& fc,
                             double omega);

// Complete Wigner pipeline at finite slit width: full_moments ->
// wigner_coeffs -> apply_losses.
WignerForm wigner_full(const PulseGeometry& g, const FilterChain& fc,
                       double omega, const LossChain& losses);

// Fraction of the homodyne mode's spectral energy accepted by the slit;
// erf(omega tau / 4) for the gaussian pulse.
double homodyne_slit_transmission(const PulseGeometry& g, double omega);

// Inverse of the above.
double slit_width_for_transmission(const PulseGeometry& g, double transmission);

} // namespace pssv

#endif
