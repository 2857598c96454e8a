#ifndef PSSV_BOGOLIUBOV_HPP
#define PSSV_BOGOLIUBOV_HPP

#include <Eigen/Dense>

#include "pssv/two_mode.hpp"

// Finite-dimensional Bogoliubov transforms a_out = u a + v a^* and the
// mode-reduction procedure that collapses them to an effective two-mode
// description for a given homodyne mode. Dense complex storage; intended
// for oracle-scale mode counts (up to a few thousand).

namespace pssv {

struct FiniteBogoliubov {
    Eigen::MatrixXcd u;
    Eigen::MatrixXcd v;

    Eigen::Index modes() const { return u.rows(); }
};

// Max entrywise violation of the commutator-preservation conditions
//   u u^dag - v v^dag = 1,  u v^T - v u^T = 0,  u^dag u - v^T v^* = 1.
// Zero for exact transforms. Throws NumericalError on shape mismatch.
double check_symplectic(const FiniteBogoliubov& b);

// Reduces the transform to (eta, alpha, beta) for homodyne mode psi_h
// (unit norm). The returned phase is the homodyne-mode rotation that
// makes alpha real and nonnegative.
ModeReduction mode_reduce(const FiniteBogoliubov& b, const Eigen::VectorXcd& psi_h);

// Elementary factors, mostly for tests and validation suites.
FiniteBogoliubov identity_transform(Eigen::Index n);
FiniteBogoliubov single_mode_squeezer(Eigen::Index n, Eigen::Index k, double r);
FiniteBogoliubov two_mode_squeezer(Eigen::Index n, Eigen::Index j, Eigen::Index k, double r);
FiniteBogoliubov beam_splitter(Eigen::Index n, Eigen::Index j, Eigen::Index k,
                               double theta, double phi = 0.0);
FiniteBogoliubov phase_shift(Eigen::Index n, Eigen::Index k, double phi);

// Composition: apply `first`, then `second`.
FiniteBogoliubov compose(const FiniteBogoliubov& second, const FiniteBogoliubov& first);

} // namespace pssv

#endif
