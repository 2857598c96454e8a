#ifndef PSSV_CONDITIONING_HPP
#define PSSV_CONDITIONING_HPP

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "pssv/bogoliubov.hpp"
#include "pssv/two_mode.hpp"

// Conditioning a squeezed vacuum on a photon-detection event: projection
// coefficients of the detection operator onto the two effective modes,
// the conditional state, and the resulting non-gaussian Wigner function.

namespace pssv {

struct DetectionCoeffs {
    std::complex<double> gamma; // projection on a0^dag
    std::complex<double> delta; // projection on a1^dag
    double p = 0.0;             // detection probability for this mode, per pulse
    // Set when beta = 0 collapsed the model to a single effective mode and
    // delta was forced to zero.
    bool single_mode = false;
};

struct ConditionalState {
    double xi;    // modal purity, in [0, 1]
    double theta; // mixing angle of effective modes 0 and 1 from |delta|/|gamma|
};

// Raw detection-averaged sums: gg = sum |gamma_j|^2, dd = sum |delta_j|^2,
// gd = sum conj(gamma_j) delta_j, p_tot = sum P_j (all per pulse).
struct AveragedMoments {
    double gg = 0.0;
    double dd = 0.0;
    std::complex<double> gd = 0.0;
    double p_tot = 0.0;
};

// Output Wigner function
//   W(x,p) = (c + 2a x^2/vx^2 + 2b p^2/vp^2 + d xp/(vx vp)) * W_sqz(x,p)
// with W_sqz the gaussian squeezed-vacuum Wigner function of variances
// (vx, vp). Normalization pins c = 1 - a/vx - b/vp.
struct WignerForm {
    double a, b, c, d;
    double vx, vp;
};

struct LossChain {
    double eta_hom; // homodyne detection efficiency, in (0, 1]
    double t;       // sampling beamsplitter transmission, in (0, 1]
};

struct EmpiricalParams {
    double xi;        // fitted modal purity
    double g;         // NDOPA ratio (input value unless g was fitted)
    double fit_error; // RMS section error, percent
    bool g_fitted = false;
};

// --- operations ---------------------------------------------------------

// Projection of the detection mode phi_d onto the effective modes of the
// reduction mr = mode_reduce(b, psi_h). When beta = 0 the single-mode
// flag is set and delta is 0.
DetectionCoeffs detection_coeffs(const FiniteBogoliubov& b,
                                 const Eigen::VectorXcd& psi_h,
                                 const ModeReduction& mr,
                                 const Eigen::VectorXcd& phi_d);

// xi = (|gamma|^2 + |delta|^2)/P, theta = atan2(|delta|, |gamma|).
ConditionalState conditional_state(const DetectionCoeffs& dc);

// Averaged purity and mixing angle from detection-averaged moments.
ConditionalState averaged_state(const AveragedMoments& m);

// Conditional density matrix on the basis {|00>, |10>, |01>}.
Eigen::Matrix3cd density_matrix(const ConditionalState& cs);

// Weighted raw sums over detection modes; weights default to 1 (use
// quadrature weights for continuum mode labels).
AveragedMoments average_moments(std::span<const DetectionCoeffs> modes,
                                std::span<const double> weights = {});

// Coefficients of the detection-averaged output Wigner function.
WignerForm wigner_coeffs(const ModeReduction& mr, const AveragedMoments& m);

// Homodyne inefficiency and the sampling beamsplitter, both as fictitious
// beamsplitters: V -> eta_hom*t*(V-1)+1 and a,b,d scaled by eta_hom*t;
// c is recomputed from the normalization identity.
WignerForm apply_losses(const WignerForm& w, const LossChain& l);

double eval_wigner(const WignerForm& w, double x, double p);

// Gaussian squeezed-vacuum form (a=b=d=0, c=1).
WignerForm squeezed_vacuum_form(const QuadVariances& v);

// One-free-parameter empirical model: the detected photon sits in the
// homodyne mode with probability xi. Degenerate at vacuum variances
// (V_x + V_p = 2), in which case the unconditioned form is returned and
// *degenerate is set when provided.
WignerForm empirical_coeffs(const QuadVariances& v, double xi,
                            bool* degenerate = nullptr);

// RMS deviation between two forms over the sections (x,0) and (0,p),
// x,p in [-4,4] with 161 points each, normalized by max |target| over
// the sections; returned as a percentage.
double section_rms_error(const WignerForm& model, const WignerForm& target);

// Fits the empirical model to a loss-treated target produced by the
// multimode model with source parameters sqz. Golden-section over
// xi in [0,1]; when fit_g is set, g is searched as well and the
// variances are rebuilt from (r, g) with identical loss treatment.
EmpiricalParams fit_empirical(const WignerForm& target, const SqueezeSpec& sqz,
                              const LossChain& losses, bool fit_g);

// Reflectivity-to-transmission ratio of the beamsplitter that makes the
// one-photon superposition angle theta_j reachable from the source angle
// theta_0: rho/tau = (1/tan theta_j - 1/tan theta_0)/cosh r.
double equivalent_bs_ratio(double theta_j, double theta_0, double r);

// Independent numerical route to the conditional Wigner function: the
// two-mode initial Wigner function (vacuum + one photon shared between
// the effective modes) is propagated through the homodyne-output
// transformation and the auxiliary mode is integrated out by adaptive
// 2-D quadrature. Agrees with eval_wigner(wigner_coeffs(...)) for
// consistent inputs.
double oracle_wigner_numeric(const ModeReduction& mr, const ConditionalState& cs,
                             double x, double p, double abs_tol = 1e-8);

// Same, for complex amplitudes (covers the d-coefficient).
double oracle_wigner_numeric(const ModeReduction& mr, const DetectionCoeffs& dc,
                             double x, double p, double abs_tol = 1e-8);

// Numerical checks used by tests and the validation suite.
double wigner_norm_quad(const WignerForm& w, double abs_tol = 1e-8);
double wigner_grid_min(const WignerForm& w, int points_per_axis = 161);

} // namespace pssv

#endif
