#include "pssv/pulse_model.hpp"

#include <cmath>
#include <iostream>
#include <numbers>

#include "pssv/errors.hpp"
#include "pssv/optim.hpp"
#include "pssv/quadrature.hpp"

namespace pssv {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr int kMaxOrder = 200;

void require_geometry(const PulseGeometry& g) {
    if (g.w <= 0.0 || g.w_p <= 0.0 || g.w_f <= 0.0 || g.tau <= 0.0 ||
        g.tau_p <= 0.0 || g.tau_g < 0.0) {
        throw ConfigError("pulse geometry lengths and durations must be positive");
    }
    if (g.qle0 < 0.0) throw ConfigError("pump strength qle0 must be >= 0");
    if (g.qle0 >= 2.0) throw ConfigError("pump strength qle0 must be < 2");
}

void require_filter(const FilterChain& fc) {
    if (fc.omega <= 0.0) throw ConfigError("slit width Omega must be positive");
    if (fc.r <= 0.0 || fc.r >= 1.0) throw ConfigError("reflectivity R must lie in (0, 1)");
    if (fc.eta_c <= 0.0 || fc.eta_c > 1.0) throw ConfigError("eta_c must lie in (0, 1]");
}
} // namespace

double SeriesTables::sum_bp() const {
    double s = 0.0;
    for (int m = order; m >= 0; --m) s += b[m] * p[m];
    return s;
}
double SeriesTables::sum_cp() const {
    double s = 0.0;
    for (int m = order; m >= 0; --m) s += c[m] * p[m];
    return s;
}
double SeriesTables::sum_dq() const {
    double s = 0.0;
    for (int m = order; m >= 0; --m) s += d[m] * q[m];
    return s;
}
double SeriesTables::sum_cr() const {
    double s = 0.0;
    for (int m = order; m >= 0; --m) s += c[m] * r[m];
    return s;
}
double SeriesTables::sum_dr() const {
    double s = 0.0;
    for (int m = order; m >= 0; --m) s += d[m] * r[m];
    return s;
}

double homodyne_amplitude(const PulseGeometry& g) {
    return 2.0 / (std::pow(kPi, 0.75) * g.w * std::sqrt(g.tau));
}

double fiber_amplitude(const PulseGeometry& g) {
    return std::sqrt(2.0 / kPi) / g.w_f;
}

double moment_p(const PulseGeometry& g, int m) {
    if (g.uniform_profile) return 1.0;
    return 2.0 * std::sqrt(2.0) * g.w_p * g.w_p * g.tau_p /
           ((m * g.w * g.w + 2.0 * g.w_p * g.w_p) *
            std::sqrt(m * g.tau * g.tau + 2.0 * g.tau_p * g.tau_p));
}

double moment_q(const PulseGeometry& g, int m) {
    if (m < 1) throw NumericalError("q-moment needs m >= 1");
    if (g.uniform_profile) return 1.0 / (4.0 * kPi * kPi);
    return std::pow(kPi, -1.5) * g.tau_p * g.w_p * g.w_p /
           (2.0 * std::sqrt(2.0 * m) * (m * g.w_f * g.w_f + 2.0 * g.w_p * g.w_p));
}

double moment_r(const PulseGeometry& g, int m) {
    if (g.uniform_profile) return 1.0 / (2.0 * kPi);
    const double time_part =
        std::pow(kPi, -0.75) /
        (std::sqrt(g.tau) * std::sqrt(1.0 / (g.tau * g.tau) + m / (g.tau_p * g.tau_p)));
    const double space_part =
        1.0 / (g.w * g.w_f *
               (1.0 / (g.w * g.w) + m / (g.w_p * g.w_p) + 1.0 / (g.w_f * g.w_f)));
    return time_part * space_part;
}

SeriesTables series_tables(const PulseGeometry& g, double tol) {
    require_geometry(g);
    const double x = 2.0 * g.qle0; // expansion variable of cosh/sinh(2 ql E_P)

    SeriesTables t;
    auto push = [&](int m, double bm, double cm, double dm) {
        t.b.push_back(bm);
        t.c.push_back(cm);
        t.d.push_back(dm);
        t.p.push_back(moment_p(g, m));
        t.q.push_back(m >= 1 ? moment_q(g, m) : 0.0);
        t.r.push_back(moment_r(g, m));
    };

    push(0, 1.0, 0.0, 0.0);
    double term = 1.0; // x^m / m!
    double sum_bp = t.b[0] * t.p[0];
    double sum_cp = 0.0;
    double sum_dq = 0.0;
    int m = 0;
    while (true) {
        // grow by a cosh/sinh pair so every series gains one term
        for (int k = 0; k < 2; ++k) {
            ++m;
            term *= x / m;
            const double half = 0.5 * term;
            if (m % 2 == 0) {
                push(m, half, 0.0, half);
                sum_bp += half * t.p[m];
                sum_dq += half * t.q[m];
            } else {
                push(m, 0.0, half, 0.0);
                sum_cp += half * t.p[m];
            }
        }
        const bool b_done = std::abs(t.b[m] * t.p[m]) <= tol * std::abs(sum_bp);
        const bool c_done = x == 0.0 ||
                            std::abs(t.c[m - 1] * t.p[m - 1]) <= tol * std::abs(sum_cp);
        const bool d_done = x == 0.0 ||
                            std::abs(t.d[m] * t.q[m]) <= tol * std::abs(sum_dq);
        if (b_done && c_done && d_done) break;
        if (m + 2 > kMaxOrder) {
            throw NumericalError("pump-field series did not converge within order 200");
        }
    }
    t.order = m;
    return t;
}

ModeReduction modered_from_pulse(const PulseGeometry& g) {
    const SeriesTables t = series_tables(g);
    const double eta2 = t.sum_bp();
    const double eta = std::sqrt(eta2);
    const double alpha = t.sum_cp() / eta;
    return modered_from_eta_alpha(eta, alpha);
}

double ptot_narrow(const PulseGeometry& g, const FilterChain& fc) {
    require_filter(fc);
    const SeriesTables t = series_tables(g);
    const double p_tot = fc.eta_c * fc.r * fc.omega * t.sum_dq();
    if (p_tot >= 0.1) {
        std::cerr << "warning: P_tot = " << p_tot
                  << " per pulse; single-photon conditioning assumes P_tot << 1\n";
    }
    return p_tot;
}

NarrowCoeffs narrowfilter_coeffs(const PulseGeometry& g, const FilterChain& fc) {
    require_filter(fc);
    const SeriesTables t = series_tables(g);
    const double eta = std::sqrt(t.sum_bp());
    const double alpha = t.sum_cp() / eta;
    const ModeReduction mr = modered_from_eta_alpha(eta, alpha);
    const double scale = std::sqrt(fc.eta_c * fc.r * fc.omega);

    NarrowCoeffs nc;
    nc.gamma_bar = scale / eta * t.sum_cr();
    if (mr.beta > 0.0) {
        nc.delta_bar = -alpha * nc.gamma_bar / mr.beta + scale / mr.beta * t.sum_dr();
    } else {
        nc.delta_bar = 0.0;
        nc.single_mode = true;
    }
    return nc;
}

AveragedMoments narrow_moments(const PulseGeometry& g, const FilterChain& fc) {
    const NarrowCoeffs nc = narrowfilter_coeffs(g, fc);
    AveragedMoments m;
    m.gg = nc.gamma_bar * nc.gamma_bar;
    m.dd = nc.delta_bar * nc.delta_bar;
    m.gd = nc.gamma_bar * nc.delta_bar;
    m.p_tot = ptot_narrow(g, fc);
    return m;
}

double solve_pump_amplitude(const PulseGeometry& g, double target_s) {
    if (target_s <= 0.0 || target_s > 1.0) {
        throw NumericalError("target squeezing factor must lie in (0, 1]");
    }
    auto mismatch = [&](double q) {
        PulseGeometry trial = g;
        trial.qle0 = q;
        return squeeze_convert(modered_from_pulse(trial)).s - target_s;
    };
    if (mismatch(2.0 - 1e-9) > 0.0) {
        throw NumericalError("target squeezing factor unreachable for qle0 < 2");
    }
    return optim::bisect_root(mismatch, 0.0, 2.0 - 1e-9, 1e-10, 1e-13);
}

namespace {
// Antiderivatives of the unit gaussian pump profile exp(-2t^2/tau0^2):
// one and two integrations, both vanishing at 0.
struct PumpAntiderivatives {
    double tau0;
    double profile(double t) const { return std::exp(-2.0 * t * t / (tau0 * tau0)); }
    double first(double t) const {
        return tau0 * std::sqrt(kPi / 8.0) * std::erf(std::sqrt(2.0) * t / tau0);
    }
    double second(double t) const {
        const double y = std::sqrt(2.0) * t / tau0;
        const double integral_erf =
            y * std::erf(y) + (std::exp(-y * y) - 1.0) / std::sqrt(kPi);
        return tau0 * std::sqrt(kPi / 8.0) * (tau0 / std::sqrt(2.0)) * integral_erf;
    }
};
} // namespace

EffectivePump effective_pump(const PulseGeometry& g) {
    if (g.tau <= 0.0 || g.tau_g < 0.0) {
        throw ConfigError("effective pump needs tau > 0 and tau_g >= 0");
    }
    const PumpAntiderivatives pump{g.tau / std::sqrt(2.0)};
    const double h = 0.5 * g.tau_g;

    auto profile = [&](double t) {
        if (g.tau_g == 0.0) return pump.profile(t);
        // double convolution with the centered unit gate, in closed form;
        // the second difference cancels to roundoff in the far tails
        const double f = (pump.second(t + 2.0 * h) - 2.0 * pump.second(t) +
                          pump.second(t - 2.0 * h)) / (g.tau_g * g.tau_g);
        return std::max(f, 0.0);
    };

    EffectivePump ep;
    const double span = 4.0 * pump.tau0 + 2.0 * g.tau_g;
    constexpr int kSamples = 801;
    ep.t.resize(kSamples);
    ep.f.resize(kSamples);
    for (int i = 0; i < kSamples; ++i) {
        ep.t[i] = -span + 2.0 * span * i / (kSamples - 1);
        ep.f[i] = profile(ep.t[i]);
    }

    // Gaussian fit A exp(-2t^2/tau_f^2): A is linear for fixed tau_f, so a
    // 1-D golden search over tau_f suffices.
    double norm_f = 0.0;
    for (double v : ep.f) norm_f += v * v;
    auto sse = [&](double tau_f) {
        double fg = 0.0, gg = 0.0;
        for (int i = 0; i < kSamples; ++i) {
            const double gi = std::exp(-2.0 * ep.t[i] * ep.t[i] / (tau_f * tau_f));
            fg += ep.f[i] * gi;
            gg += gi * gi;
        }
        const double amp = fg / gg;
        double s = 0.0;
        for (int i = 0; i < kSamples; ++i) {
            const double gi = std::exp(-2.0 * ep.t[i] * ep.t[i] / (tau_f * tau_f));
            s += (ep.f[i] - amp * gi) * (ep.f[i] - amp * gi);
        }
        return s;
    };
    auto [tau_fit, best_sse] =
        optim::golden_minimize(sse, 0.3 * pump.tau0, 3.0 * (pump.tau0 + g.tau_g), 1e-8);
    ep.fitted_tau_p = tau_fit;
    ep.residual = std::sqrt(best_sse / norm_f);
    return ep;
}

namespace {
// Profile factors of the concrete model, all evaluated literally so the
// oracle shares no algebra with the closed-form moments.
struct Profiles {
    const PulseGeometry& g;
    double eh(double rho, double t) const {
        return homodyne_amplitude(g) *
               std::exp(-rho * rho / (g.w * g.w) - 2.0 * t * t / (g.tau * g.tau));
    }
    double ep(double rho, double t) const {
        return std::exp(-rho * rho / (g.w_p * g.w_p) - 2.0 * t * t / (g.tau_p * g.tau_p));
    }
    double phis(double rho) const {
        return fiber_amplitude(g) * std::exp(-rho * rho / (g.w_f * g.w_f));
    }
    double u(double rho, double t) const { return std::cosh(g.qle0 * ep(rho, t)); }
    double v(double rho, double t) const { return std::sinh(g.qle0 * ep(rho, t)); }
};
} // namespace

double quadrature_oracle(const PulseGeometry& g, const FilterChain& fc,
                         PulseIntegral which, int m) {
    require_geometry(g);
    if (g.uniform_profile) {
        throw NumericalError("quadrature oracle applies to the gaussian model only");
    }
    const Profiles pr{g};
    const double rho_max = 8.0 * std::max({g.w, g.w_p, g.w_f});
    const double t_max = 8.0 * std::max(g.tau, g.tau_p);
    const double scale = fc.eta_c * fc.r * fc.omega;

    auto radial = [&](const std::function<double(double)>& f) {
        return 2.0 * kPi *
               quad::integrate([&](double rho) { return rho * f(rho); }, 0.0, rho_max,
                               1e-12);
    };
    auto temporal = [&](const std::function<double(double)>& f) {
        return quad::integrate(f, -t_max, t_max, 1e-12);
    };
    auto volume = [&](const std::function<double(double, double)>& f) {
        return 2.0 * kPi *
               quad::integrate_2d([&](double rho, double t) { return rho * f(rho, t); },
                                  0.0, rho_max, -t_max, t_max, 1e-11);
    };

    switch (which) {
    case PulseIntegral::pm:
        return radial([&](double rho) {
                   return pr.eh(rho, 0) * pr.eh(rho, 0) * std::pow(pr.ep(rho, 0), m);
               }) *
               temporal([&](double t) {
                   return pr.eh(0, t) * pr.eh(0, t) * std::pow(pr.ep(0, t), m);
               }) /
               (pr.eh(0, 0) * pr.eh(0, 0)); // amplitude counted once
    case PulseIntegral::qm:
        if (m < 1) throw NumericalError("q-moment needs m >= 1");
        return radial([&](double rho) {
                   return pr.phis(rho) * pr.phis(rho) * std::pow(pr.ep(rho, 0), m);
               }) *
               temporal([&](double t) { return std::pow(pr.ep(0, t), m); }) /
               (4.0 * kPi * kPi);
    case PulseIntegral::rm:
        return radial([&](double rho) {
                   return pr.phis(rho) * pr.eh(rho, 0) * std::pow(pr.ep(rho, 0), m);
               }) *
               temporal([&](double t) { return pr.eh(0, t) * std::pow(pr.ep(0, t), m); }) /
               (2.0 * kPi * pr.eh(0, 0));
    case PulseIntegral::eta2:
        return volume([&](double rho, double t) {
            const double e = pr.eh(rho, t);
            return e * e * pr.u(rho, t) * pr.u(rho, t);
        });
    case PulseIntegral::eta_alpha:
        return volume([&](double rho, double t) {
            const double e = pr.eh(rho, t);
            return e * e * pr.u(rho, t) * pr.v(rho, t);
        });
    case PulseIntegral::p_tot:
        require_filter(fc);
        return scale / (4.0 * kPi * kPi) * volume([&](double rho, double t) {
                   const double v = pr.v(rho, t);
                   return v * v * pr.phis(rho) * pr.phis(rho);
               });
    case PulseIntegral::gamma_bar:
        require_filter(fc);
        return std::sqrt(scale) / (2.0 * kPi) * volume([&](double rho, double t) {
                   return pr.eh(rho, t) * pr.u(rho, t) * pr.v(rho, t) * pr.phis(rho);
               });
    case PulseIntegral::delta_bar:
        require_filter(fc);
        return std::sqrt(scale) / (2.0 * kPi) * volume([&](double rho, double t) {
                   const double v = pr.v(rho, t);
                   return pr.eh(rho, t) * v * v * pr.phis(rho);
               });
    }
    throw NumericalError("unknown pulse integral");
}

namespace temporal {

double moment_p(const PulseGeometry& g, int m) {
    return std::sqrt(2.0) * g.tau_p /
           std::sqrt(m * g.tau * g.tau + 2.0 * g.tau_p * g.tau_p);
}

double moment_q(const PulseGeometry& g, int m) {
    if (m < 1) throw NumericalError("q-moment needs m >= 1");
    return g.tau_p * std::sqrt(kPi / (2.0 * m)) / (4.0 * kPi * kPi);
}

double moment_r(const PulseGeometry& g, int m) {
    const double sigma = 1.0 / (g.tau * g.tau) + m / (g.tau_p * g.tau_p);
    return std::pow(kPi, 0.25) / (2.0 * kPi * std::sqrt(g.tau * sigma));
}

DiscretizedModel discretize(const PulseGeometry& g, int bins, double t_max) {
    if (bins < 2 || t_max <= 0.0) {
        throw NumericalError("discretization needs bins >= 2 and t_max > 0");
    }
    DiscretizedModel d;
    d.window = 2.0 * t_max;
    d.dt = d.window / bins;
    d.transform.u = Eigen::MatrixXcd::Zero(bins, bins);
    d.transform.v = Eigen::MatrixXcd::Zero(bins, bins);
    d.psi_h.resize(bins);
    d.phi_d.resize(bins);

    const double eh0 = std::sqrt(2.0 / (g.tau * std::sqrt(kPi)));
    for (int j = 0; j < bins; ++j) {
        const double t = -t_max + (j + 0.5) * d.dt; // midpoint grid
        const double ep = std::exp(-2.0 * t * t / (g.tau_p * g.tau_p));
        d.transform.u(j, j) = std::cosh(g.qle0 * ep);
        d.transform.v(j, j) = std::sinh(g.qle0 * ep);
        d.psi_h(j) = eh0 * std::exp(-2.0 * t * t / (g.tau * g.tau)) * std::sqrt(d.dt);
        d.phi_d(j) = std::sqrt(d.dt / d.window);
    }
    d.psi_h /= d.psi_h.norm();
    return d;
}

} // namespace temporal

} // namespace pssv
