#ifndef PSSV_TWO_MODE_HPP
#define PSSV_TWO_MODE_HPP

// Effective two-mode description of a gaussian squeezed-vacuum source.
//
// The homodyne output operator is written eta*a0 + alpha*a0^dag + beta*a1^dag
// with eta >= 1, alpha >= 0, beta >= 0 and eta^2 - alpha^2 - beta^2 = 1.
// The same state is equivalently described by the quadrature variances
// (V_x, V_p) of the squeezed vacuum (vacuum = 1), or by a DOPA squeezing
// parameter r followed by an NDOPA with parameter g*r.

namespace pssv {

struct ModeReduction {
    double eta;
    double alpha;
    double beta;
    // Homodyne-phase rotation (radians) that was applied to make alpha
    // real and nonnegative; 0 for all-real models.
    double phase = 0.0;
};

struct QuadVariances {
    double vx;
    double vp;
};

struct SqueezeSpec {
    double r;             // DOPA squeezing parameter, >= 0
    double g;             // NDOPA ratio; see pure_ndopa below
    double s;             // exp(-2r)
    // r == 0 with beta > 0 leaves g itself undefined (g*r finite, g -> inf).
    // In that degenerate case g stores the NDOPA parameter g*r = asinh(beta).
    bool pure_ndopa = false;
};

// Largest violation of the two-mode constraints (eta^2-alpha^2-beta^2 = 1
// and the sign conditions); used by consumers to reject malformed input.
double modered_residual(const ModeReduction& mr);

// Throws NumericalError when modered_residual exceeds tol.
void require_valid(const ModeReduction& mr, double tol = 1e-10);

// Builds a ModeReduction from (eta, alpha) with beta fixed by the
// commutator constraint; radicands within -1e-10 of zero are clamped,
// larger negatives throw NumericalError.
ModeReduction modered_from_eta_alpha(double eta, double alpha, double phase = 0.0);

// V_x = (eta+alpha)^2 + beta^2, V_p = (eta-alpha)^2 + beta^2.
QuadVariances variances_from_modered(const ModeReduction& mr);

// Inverse map; requires V_x*V_p >= 1 (minimal-uncertainty bound) and
// is the exact round-trip partner of variances_from_modered.
ModeReduction modered_from_variances(const QuadVariances& v);

// (eta, alpha, beta) -> (r, g, s): r = atanh(alpha/eta), g*r = asinh(beta).
SqueezeSpec squeeze_convert(const ModeReduction& mr);

// eta = cosh(r)cosh(gr), alpha = sinh(r)cosh(gr), beta = sinh(gr).
ModeReduction modered_from_squeeze(const SqueezeSpec& sq);

} // namespace pssv

#endif
