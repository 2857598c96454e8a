#ifndef PSSV_PULSE_MODEL_HPP
#define PSSV_PULSE_MODEL_HPP

#include <vector>

#include <Eigen/Dense>

#include "pssv/bogoliubov.hpp"
#include "pssv/conditioning.hpp"
#include "pssv/two_mode.hpp"

// Concrete spatio-temporal model of pulsed parametric down-conversion with
// gaussian beam and pulse profiles. The local gain is u = cosh(ql E_P),
// v = sinh(ql E_P) with a gaussian pump E_P = E0 exp(-(x^2+y^2)/w_P^2 -
// 2 t^2/tau_P^2); everything downstream is expanded in powers of the pump
// profile so that the spatio-temporal integrals reduce to closed-form
// gaussian moments.
//
// Units: transverse lengths in um, time in fs, angular frequency in
// rad/fs. All reported state quantities depend only on waist and
// duration ratios.

namespace pssv {

struct PulseGeometry {
    double w;      // homodyne beam waist, um
    double w_p;    // pump beam waist, um
    double w_f;    // fiber (detection) mode waist, um
    double tau;    // homodyne pulse duration, fs
    double tau_p;  // pump pulse duration, fs
    double tau_g;  // GVM gate duration, fs
    double qle0;   // dimensionless pump strength q*l*E0
    // Validation mode: replaces every profile by a constant on a common
    // support, which collapses the model to a single effective mode.
    bool uniform_profile = false;
};

struct FilterChain {
    double omega;  // spectral slit width, rad/fs
    double r;      // sampling beamsplitter reflectivity, R = 1 - T
    double eta_c;  // conditioning-arm efficiency (APD, optics), in (0, 1]
};

// Taylor coefficients of u^2, uv, v^2 in powers of the pump profile,
// together with the gaussian moments they multiply:
//   p[m] = integral e_h^2 e_P^m        (dimensionless)
//   q[m] = (1/4pi^2) integral phi_s^2 e_P^m   (fs)
//   r[m] = (1/2pi) integral phi_s e_P^m e_h   (fs^1/2)
struct SeriesTables {
    int order = 0; // M; arrays run 0..M
    std::vector<double> b, c, d;
    std::vector<double> p, q, r;

    double sum_bp() const; // eta^2
    double sum_cp() const; // eta*alpha
    double sum_dq() const; // P_tot / (eta_c R Omega)
    double sum_cr() const; // eta*gamma_bar / sqrt(eta_c R Omega)
    double sum_dr() const; // (beta*delta_bar + alpha*gamma_bar) / sqrt(...)
};

// Truncation order is grown until the last retained term contributes
// less than tol (relative) to eta^2, eta*alpha and P_tot; hard cap 200.
SeriesTables series_tables(const PulseGeometry& g, double tol = 1e-12);

// Closed-form gaussian moments (uniform_profile: 1, 1/4pi^2, 1/2pi).
double moment_p(const PulseGeometry& g, int m);
double moment_q(const PulseGeometry& g, int m); // m >= 1
double moment_r(const PulseGeometry& g, int m);

// Normalization amplitudes of the homodyne mode and the fiber mode.
double homodyne_amplitude(const PulseGeometry& g); // e_h(0,0,0)
double fiber_amplitude(const PulseGeometry& g);    // phi_s(0,0)

// Effective two-mode parameters of the pulse model.
ModeReduction modered_from_pulse(const PulseGeometry& g);

// Average photon detection probability per pulse through a narrow slit;
// warns on stderr when the single-photon-counting assumption P_tot << 1
// is marginal.
double ptot_narrow(const PulseGeometry& g, const FilterChain& fc);

struct NarrowCoeffs {
    double gamma_bar;
    double delta_bar;
    bool single_mode = false; // beta = 0: delta_bar forced to 0
};

// Detection-averaged amplitudes in the narrow-filter approximation,
// where averages of products reduce to products of averages.
NarrowCoeffs narrowfilter_coeffs(const PulseGeometry& g, const FilterChain& fc);

// Convenience: the averaged moments of the narrow-filter model.
AveragedMoments narrow_moments(const PulseGeometry& g, const FilterChain& fc);

// Finds qle0 such that the squeezing factor s = exp(-2r) hits target_s;
// bisection on [0, 2].
double solve_pump_amplitude(const PulseGeometry& g, double target_s);

// Group-velocity mismatch: the pump profile (lowest-order SHG duration
// tau/sqrt(2)) convolved twice with a unit-area rectangular gate of
// duration tau_g centered at the origin, sampled on a uniform grid and
// fitted with a gaussian.
struct EffectivePump {
    std::vector<double> t;  // fs
    std::vector<double> f;  // effective pump profile, peak of input = 1
    double fitted_tau_p;    // duration of the best-fit gaussian, fs
    double residual;        // relative L2 misfit of the gaussian fit
};

EffectivePump effective_pump(const PulseGeometry& g);

// Direct numerical integration of the model's spatio-temporal integrals,
// used solely to validate the closed forms and series sums above.
//   pm, qm, rm    -> the gaussian moments of order m
//   eta2          -> integral e_h^2 u^2
//   eta_alpha     -> integral e_h^2 u v
//   p_tot         -> eta_c R Omega/4pi^2 integral v^2 phi_s^2
//   gamma_bar     -> sqrt(eta_c R Omega)/2pi integral e_h u v phi_s   (= eta*gamma_bar)
//   delta_bar     -> sqrt(eta_c R Omega)/2pi integral e_h v^2 phi_s   (= beta*delta_bar + alpha*gamma_bar)
enum class PulseIntegral { pm, qm, rm, eta2, eta_alpha, p_tot, gamma_bar, delta_bar };

double quadrature_oracle(const PulseGeometry& g, const FilterChain& fc,
                         PulseIntegral which, int m = 0);

// One-dimensional (temporal-only) reference model: pump and homodyne
// profiles depend on time only and the detection chain has no spatial
// filter. Its gaussian moments have their own closed forms, and the
// model discretizes to a diagonal finite Bogoliubov transform over time
// bins, which exercises the matrix mode-reduction path against the
// series results.
namespace temporal {

double moment_p(const PulseGeometry& g, int m);
double moment_q(const PulseGeometry& g, int m); // m >= 1
double moment_r(const PulseGeometry& g, int m);

struct DiscretizedModel {
    FiniteBogoliubov transform;
    Eigen::VectorXcd psi_h;  // homodyne pulse mode on the grid
    Eigen::VectorXcd phi_d;  // flat (zero-frequency) detection mode
    double dt;               // bin width, fs
    double window;           // total grid span, fs
};

DiscretizedModel discretize(const PulseGeometry& g, int bins, double t_max);

} // namespace temporal

} // namespace pssv

#endif
