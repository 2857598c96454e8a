#include "pssv/optim.hpp"

#include <cmath>

#include "pssv/errors.hpp"

namespace pssv::optim {

std::pair<double, double> golden_minimize(const std::function<double(double)>& f,
                                          double a, double b, double x_tol) {
    constexpr double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > x_tol) {
        if (f1 < f2) {
            b = x2;
            x2 = x1; f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2; f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        }
    }
    return f1 < f2 ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

double bisect_root(const std::function<double(double)>& f, double a, double b,
                   double f_tol, double x_tol) {
    double fa = f(a), fb = f(b);
    if (std::abs(fa) <= f_tol) return a;
    if (std::abs(fb) <= f_tol) return b;
    if (std::signbit(fa) == std::signbit(fb)) {
        throw NumericalError("bisection bracket does not straddle a root");
    }
    while (b - a > x_tol) {
        double m = 0.5 * (a + b);
        double fm = f(m);
        if (std::abs(fm) <= f_tol) return m;
        if (std::signbit(fm) == std::signbit(fa)) {
            a = m; fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

} // namespace pssv::optim
