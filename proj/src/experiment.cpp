#include "pssv/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "pssv/errors.hpp"
#include "pssv/spectral_filter.hpp"
#include "pssv/version.hpp"

namespace pssv {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void append_config_echo(SweepResult& r, const ExperimentConfig& cfg) {
    std::istringstream echo(config_echo(cfg));
    std::string line;
    while (std::getline(echo, line)) {
        const auto eq = line.find(" = ");
        r.metadata.emplace_back("cfg " + line.substr(0, eq), line.substr(eq + 3));
    }
}

SweepResult make_result(const std::string& name, const ExperimentConfig& cfg) {
    SweepResult r;
    r.name = name;
    r.metadata.emplace_back("version", kVersion);
    r.metadata.emplace_back("timestamp", timestamp_utc());
    append_config_echo(r, cfg);
    return r;
}

void require_finite_rows(const SweepResult& r) {
    constexpr double kWignerFloor = -1.0 / std::numbers::pi - 1e-9;
    for (const auto& row : r.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (!std::isfinite(row[c])) {
                throw NumericalError("sweep produced a non-finite value");
            }
            if (r.columns[c].front() == 'W' && row[c] < kWignerFloor) {
                throw NumericalError("sweep produced a Wigner value below -1/pi");
            }
        }
    }
}

// Resolves the pump strength, reduces, and runs the narrow-filter
// conditioning pipeline for an explicit geometry.
WorkingPoint working_point_for(const PulseGeometry& geom_in, double target_s,
                               double qle0, const FilterChain& fc,
                               const LossChain& losses) {
    WorkingPoint wp;
    wp.geom = geom_in;
    wp.geom.qle0 = qle0 >= 0.0 ? qle0 : solve_pump_amplitude(wp.geom, target_s);
    wp.mr = modered_from_pulse(wp.geom);
    wp.sqz = squeeze_convert(wp.mr);
    wp.moments = narrow_moments(wp.geom, fc);
    wp.pre_loss = wigner_coeffs(wp.mr, wp.moments);
    wp.with_loss = apply_losses(wp.pre_loss, losses);
    const ConditionalState avg = averaged_state(wp.moments);
    wp.xi_bar = avg.xi;
    wp.theta_bar = avg.theta;
    wp.theta_0 = std::atan2(wp.mr.beta, wp.mr.alpha);
    return wp;
}

std::vector<double> sweep_grid(double from, double to, int steps, bool log_spaced) {
    std::vector<double> xs(steps);
    for (int i = 0; i < steps; ++i) {
        const double f = static_cast<double>(i) / (steps - 1);
        xs[i] = log_spaced ? from * std::pow(to / from, f) : from + (to - from) * f;
    }
    return xs;
}

// Applies a config sweep override after checking it names the figure's
// sweep variable.
void apply_sweep_override(const ExperimentConfig& cfg, const std::string& variable,
                          double& from, double& to, int& steps) {
    if (!cfg.sweep.is_set()) return;
    if (cfg.sweep.variable != variable) {
        throw ConfigError("sweep.variable '" + cfg.sweep.variable +
                          "' does not apply here (expected '" + variable + "')");
    }
    from = cfg.sweep.from;
    to = cfg.sweep.to;
    steps = cfg.sweep.steps;
}

const std::vector<std::string> kStateColumns = {
    "W00", "xi_bar", "theta_bar", "theta_0", "V_x", "V_p", "C_bar", "g"};

std::vector<double> state_row(const WorkingPoint& wp) {
    return {eval_wigner(wp.with_loss, 0.0, 0.0),
            wp.xi_bar,
            wp.theta_bar,
            wp.theta_0,
            wp.with_loss.vx,
            wp.with_loss.vp,
            wp.with_loss.c,
            wp.sqz.g};
}

} // namespace

WorkingPoint narrow_working_point(const ExperimentConfig& cfg) {
    validate_config(cfg);
    return working_point_for(cfg.geometry(), cfg.target_s, cfg.qle0,
                             cfg.filter_chain(), cfg.loss_chain());
}

namespace {

SweepResult run_fig5_or_8(const ExperimentConfig& cfg, bool fig8) {
    double from = 0.30, to = 0.95;
    int steps = 40;
    apply_sweep_override(cfg, "s", from, to, steps);
    SweepResult r = make_result(fig8 ? "fig8" : "fig5", cfg);
    r.metadata.emplace_back("variable", "s");
    r.metadata.emplace_back("losses", "applied to W00, V_x, V_p, C_bar");
    r.columns = {"s"};
    r.columns.insert(r.columns.end(), kStateColumns.begin(), kStateColumns.end());
    for (double s : sweep_grid(from, to, steps, false)) {
        WorkingPoint wp = working_point_for(cfg.geometry(), s, -1.0,
                                            cfg.filter_chain(), cfg.loss_chain());
        std::vector<double> row = {s};
        const auto st = state_row(wp);
        row.insert(row.end(), st.begin(), st.end());
        r.rows.push_back(std::move(row));
    }
    return r;
}

SweepResult run_fig6(const ExperimentConfig& cfg) {
    double from = 0.005, to = 0.60;
    int steps = 25;
    apply_sweep_override(cfg, "transmission", from, to, steps);
    SweepResult r = make_result("fig6", cfg);
    r.metadata.emplace_back("variable", "transmission");
    r.metadata.emplace_back("note", "full spectral-slit evaluation at fixed s");
    r.columns = {"transmission"};
    r.columns.insert(r.columns.end(), kStateColumns.begin(), kStateColumns.end());
    r.columns.push_back("s");

    PulseGeometry geom = cfg.geometry();
    geom.qle0 = cfg.qle0 >= 0.0 ? cfg.qle0 : solve_pump_amplitude(geom, cfg.target_s);
    const ModeReduction mr = modered_from_pulse(geom);
    const SqueezeSpec sqz = squeeze_convert(mr);
    const double theta0 = std::atan2(mr.beta, mr.alpha);

    for (double trans : sweep_grid(from, to, steps, true)) {
        const double omega = slit_width_for_transmission(geom, trans);
        const AveragedMoments m = full_moments(geom, cfg.filter_chain(), omega);
        const WignerForm lossy =
            apply_losses(wigner_coeffs(mr, m), cfg.loss_chain());
        const ConditionalState avg = averaged_state(m);
        r.rows.push_back({trans, eval_wigner(lossy, 0.0, 0.0), avg.xi, avg.theta,
                          theta0, lossy.vx, lossy.vp, lossy.c, sqz.g, sqz.s});
    }
    return r;
}

SweepResult run_fig7(const ExperimentConfig& cfg) {
    double from = 0.60, to = 2.0;
    int steps = 29;
    apply_sweep_override(cfg, "wp_over_w", from, to, steps);
    SweepResult r = make_result("fig7", cfg);
    r.metadata.emplace_back("variable", "wp_over_w");
    r.metadata.emplace_back("note", "pump strength re-solved per point to hold s fixed");
    r.columns = {"wp_over_w"};
    r.columns.insert(r.columns.end(), kStateColumns.begin(), kStateColumns.end());
    r.columns.push_back("s");
    for (double ratio : sweep_grid(from, to, steps, false)) {
        PulseGeometry geom = cfg.geometry();
        geom.w_p = ratio * geom.w;
        WorkingPoint wp = working_point_for(geom, cfg.target_s, -1.0,
                                            cfg.filter_chain(), cfg.loss_chain());
        std::vector<double> row = {ratio};
        const auto st = state_row(wp);
        row.insert(row.end(), st.begin(), st.end());
        row.push_back(wp.sqz.s);
        r.rows.push_back(std::move(row));
    }
    return r;
}

SweepResult run_fig9(const ExperimentConfig& cfg) {
    double from = -4.0, to = 4.0;
    int steps = 161;
    apply_sweep_override(cfg, "coord", from, to, steps);
    const WorkingPoint wp = narrow_working_point(cfg);
    const EmpiricalParams fit =
        fit_empirical(wp.with_loss, wp.sqz, cfg.loss_chain(), cfg.fit_g);
    const ModeReduction mr_fit = modered_from_squeeze(
        {wp.sqz.r, fit.g, wp.sqz.s, false});
    const WignerForm emp = apply_losses(
        empirical_coeffs(variances_from_modered(mr_fit), fit.xi), cfg.loss_chain());

    SweepResult r = make_result("fig9", cfg);
    r.metadata.emplace_back("variable", "coord");
    r.metadata.emplace_back("xi_opt", fmt(fit.xi));
    r.metadata.emplace_back("g_opt", fit.g_fitted ? fmt(fit.g) : "not fitted");
    r.metadata.emplace_back("fit_error_percent", fmt(fit.fit_error));
    r.columns = {"coord", "W_x0", "W_0p", "Wemp_x0", "Wemp_0p"};
    for (double x : sweep_grid(from, to, steps, false)) {
        r.rows.push_back({x, eval_wigner(wp.with_loss, x, 0.0),
                          eval_wigner(wp.with_loss, 0.0, x),
                          eval_wigner(emp, x, 0.0), eval_wigner(emp, 0.0, x)});
    }
    return r;
}

} // namespace

SweepResult run_figure(const ExperimentConfig& cfg, Figure which) {
    validate_config(cfg);
    SweepResult r;
    switch (which) {
    case Figure::fig5: r = run_fig5_or_8(cfg, false); break;
    case Figure::fig6: r = run_fig6(cfg); break;
    case Figure::fig7: r = run_fig7(cfg); break;
    case Figure::fig8: r = run_fig5_or_8(cfg, true); break;
    case Figure::fig9: r = run_fig9(cfg); break;
    }
    require_finite_rows(r);
    return r;
}

SweepResult run_fit(const ExperimentConfig& cfg) {
    const WorkingPoint wp = narrow_working_point(cfg);
    const EmpiricalParams fit =
        fit_empirical(wp.with_loss, wp.sqz, cfg.loss_chain(), cfg.fit_g);
    SweepResult r = make_result("fit-empirical", cfg);
    r.metadata.emplace_back("g_fitted", fit.g_fitted ? "true" : "false");
    r.columns = {"xi_opt", "g_opt", "fit_error_percent", "s", "g_model",
                 "xi_bar", "W00"};
    r.rows.push_back({fit.xi, fit.g, fit.fit_error, wp.sqz.s, wp.sqz.g, wp.xi_bar,
                      eval_wigner(wp.with_loss, 0.0, 0.0)});
    require_finite_rows(r);
    return r;
}

std::string to_csv(const SweepResult& r) {
    std::ostringstream out;
    out << "# pssv " << r.name << "\n";
    for (const auto& [k, v] : r.metadata) out << "# " << k << " = " << v << "\n";
    for (std::size_t i = 0; i < r.columns.size(); ++i) {
        out << (i ? "," : "") << r.columns[i];
    }
    out << "\n";
    for (const auto& row : r.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << fmt(row[i]);
        }
        out << "\n";
    }
    return out.str();
}

SweepResult from_csv(std::istream& in) {
    SweepResult r;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.front() == '#') {
            const auto start = line.find_first_not_of("# ");
            if (start == std::string::npos) continue;
            std::string body = line.substr(start);
            if (!have_header && r.name.empty() && body.rfind("pssv ", 0) == 0) {
                r.name = body.substr(5);
                continue;
            }
            const auto eq = body.find(" = ");
            if (eq != std::string::npos) {
                r.metadata.emplace_back(body.substr(0, eq), body.substr(eq + 3));
            }
            continue;
        }
        std::istringstream cells(line);
        std::string cell;
        if (!have_header) {
            while (std::getline(cells, cell, ',')) r.columns.push_back(cell);
            have_header = true;
            continue;
        }
        std::vector<double> row;
        while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() != r.columns.size()) {
            throw ConfigError("CSV row width does not match header");
        }
        r.rows.push_back(std::move(row));
    }
    if (!have_header) throw ConfigError("CSV has no header row");
    return r;
}

} // namespace pssv
