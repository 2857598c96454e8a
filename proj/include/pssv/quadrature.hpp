#ifndef PSSV_QUADRATURE_HPP
#define PSSV_QUADRATURE_HPP

#include <functional>

namespace pssv::quad {

// Adaptive Gauss-Kronrod integration of f over [a, b]. Throws
// NumericalError if the error estimate does not reach abs_tol.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-10);

// Nested 2-D integration over the box [ax,bx] x [ay,by]; the inner (y)
// integral is evaluated adaptively for every outer node.
double integrate_2d(const std::function<double(double, double)>& f,
                    double ax, double bx, double ay, double by,
                    double abs_tol = 1e-8);

} // namespace pssv::quad

#endif
