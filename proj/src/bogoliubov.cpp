#include "pssv/bogoliubov.hpp"

#include <cmath>
#include <complex>

#include "pssv/errors.hpp"

namespace pssv {

namespace {
using Cplx = std::complex<double>;

void require_square(const FiniteBogoliubov& b) {
    if (b.u.rows() != b.u.cols() || b.v.rows() != b.v.cols() ||
        b.u.rows() != b.v.rows()) {
        throw NumericalError("Bogoliubov coefficient arrays must be square and "
                             "of equal dimension");
    }
}
} // namespace

double check_symplectic(const FiniteBogoliubov& b) {
    require_square(b);
    const auto n = b.modes();
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
    // forward CCR conditions, plus the inverse-transform condition
    // u^dag u - v^T v^* = 1 (equal to u^dag u - v^dag v for real v)
    double res = (b.u * b.u.adjoint() - b.v * b.v.adjoint() - id).cwiseAbs().maxCoeff();
    res = std::max(res, (b.u * b.v.transpose() - b.v * b.u.transpose()).cwiseAbs().maxCoeff());
    res = std::max(res, (b.u.adjoint() * b.u - b.v.transpose() * b.v.conjugate() - id)
                            .cwiseAbs().maxCoeff());
    return res;
}

ModeReduction mode_reduce(const FiniteBogoliubov& b, const Eigen::VectorXcd& psi_h) {
    require_square(b);
    if (psi_h.size() != b.modes()) {
        throw NumericalError("homodyne mode dimension does not match transform");
    }
    if (std::abs(psi_h.norm() - 1.0) > 1e-12) {
        throw NumericalError("homodyne mode must have unit norm");
    }

    // eta a0 = psi^dag u a, so eta^2 = |u^dag psi|^2.
    const Eigen::VectorXcd w = b.u.adjoint() * psi_h;
    const double eta = w.norm();

    // alpha = [a0, a_h,out] = (1/eta) psi^dag u v^T psi^*; its complex
    // phase is absorbed into a homodyne-mode rotation.
    const Eigen::VectorXcd y = b.v.transpose() * psi_h.conjugate();
    const Cplx alpha_raw = w.dot(y) / eta; // w.dot(y) = w^dag y = psi^dag u v^T psi^*
    const double phase = 0.5 * std::arg(alpha_raw);
    const double alpha = std::abs(alpha_raw);

    return modered_from_eta_alpha(eta, alpha, phase);
}

FiniteBogoliubov identity_transform(Eigen::Index n) {
    return {Eigen::MatrixXcd::Identity(n, n), Eigen::MatrixXcd::Zero(n, n)};
}

FiniteBogoliubov single_mode_squeezer(Eigen::Index n, Eigen::Index k, double r) {
    FiniteBogoliubov b = identity_transform(n);
    b.u(k, k) = std::cosh(r);
    b.v(k, k) = std::sinh(r);
    return b;
}

FiniteBogoliubov two_mode_squeezer(Eigen::Index n, Eigen::Index j, Eigen::Index k, double r) {
    FiniteBogoliubov b = identity_transform(n);
    b.u(j, j) = b.u(k, k) = std::cosh(r);
    b.v(j, k) = b.v(k, j) = std::sinh(r);
    return b;
}

FiniteBogoliubov beam_splitter(Eigen::Index n, Eigen::Index j, Eigen::Index k,
                               double theta, double phi) {
    FiniteBogoliubov b = identity_transform(n);
    const Cplx ph = std::exp(Cplx(0.0, phi));
    b.u(j, j) = std::cos(theta);
    b.u(k, k) = std::cos(theta);
    b.u(j, k) = std::sin(theta) * ph;
    b.u(k, j) = -std::sin(theta) * std::conj(ph);
    return b;
}

FiniteBogoliubov phase_shift(Eigen::Index n, Eigen::Index k, double phi) {
    FiniteBogoliubov b = identity_transform(n);
    b.u(k, k) = std::exp(Cplx(0.0, phi));
    return b;
}

FiniteBogoliubov compose(const FiniteBogoliubov& second, const FiniteBogoliubov& first) {
    require_square(second);
    require_square(first);
    if (second.modes() != first.modes()) {
        throw NumericalError("cannot compose transforms of different dimension");
    }
    // a -> u1 a + v1 a^*, then -> u2(.) + v2(.)^*.
    FiniteBogoliubov out;
    out.u = second.u * first.u + second.v * first.v.conjugate();
    out.v = second.u * first.v + second.v * first.u.conjugate();
    return out;
}

} // namespace pssv
