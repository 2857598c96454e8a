#ifndef PSSV_OPTIM_HPP
#define PSSV_OPTIM_HPP

#include <functional>
#include <utility>

namespace pssv::optim {

// Golden-section minimization of a unimodal f on [a, b].
// Returns {argmin, f(argmin)}; x_tol is the absolute parameter tolerance.
std::pair<double, double> golden_minimize(const std::function<double(double)>& f,
                                          double a, double b, double x_tol = 1e-6);

// Bisection root of f on [a, b] (f(a), f(b) of opposite sign). Stops when
// |f| <= f_tol or the bracket shrinks below x_tol. Throws NumericalError
// on a bad bracket.
double bisect_root(const std::function<double(double)>& f, double a, double b,
                   double f_tol = 1e-10, double x_tol = 1e-14);

} // namespace pssv::optim

#endif
