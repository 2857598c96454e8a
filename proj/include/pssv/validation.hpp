#ifndef PSSV_VALIDATION_HPP
#define PSSV_VALIDATION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "pssv/config.hpp"

namespace pssv {

struct CheckResult {
    std::string name;
    double measured;  // residual or worst violation; 0 is perfect
    double tolerance;
    bool pass;
};

// Runs every oracle-vs-closed-form comparison and cross-module invariant:
// symplectic residuals, parameterization round trips, the 2-D Wigner
// quadrature oracle, the Riemann-sum temporal discretization, gaussian
// moment quadratures, the uniform-profile limit, spectral-filter identities
// and the loss model. Failures are collected, not short-circuited.
std::vector<CheckResult> run_validation(const ExperimentConfig& cfg,
                                        std::uint64_t seed);

} // namespace pssv

#endif
