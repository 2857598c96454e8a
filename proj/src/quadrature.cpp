#include "pssv/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "pssv/errors.hpp"

namespace pssv::quad {

namespace {
using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol) {
    double err = 0.0, l1 = 0.0;
    double val = GK::integrate(f, a, b, 15, 1e-13, &err, &l1);
    // Kronrod estimates sit orders of magnitude above the true error on
    // converged panels; gate only against outright non-convergence.
    if (err > abs_tol && err > 1e-7 * l1) {
        throw NumericalError("quadrature did not converge: error estimate " +
                             std::to_string(err));
    }
    return val;
}

double integrate_2d(const std::function<double(double, double)>& f,
                    double ax, double bx, double ay, double by,
                    double abs_tol) {
    const double inner_tol = abs_tol / (10.0 * (bx - ax));
    auto outer = [&](double x) {
        return integrate([&](double y) { return f(x, y); }, ay, by, inner_tol);
    };
    return integrate(outer, ax, bx, abs_tol);
}

} // namespace pssv::quad
