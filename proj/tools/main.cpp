#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pssv/errors.hpp"
#include "pssv/experiment.hpp"
#include "pssv/validation.hpp"
#include "pssv/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitValidation = 3;

struct Options {
    std::string config_path;
    std::string out_path;
    std::string format = "csv";
    std::optional<std::uint64_t> seed;
};

pssv::ExperimentConfig load_config(const Options& opt) {
    pssv::ExperimentConfig cfg;
    if (!opt.config_path.empty()) {
        cfg = pssv::parse_config_file(opt.config_path);
    }
    if (opt.seed) cfg.seed = *opt.seed;
    pssv::validate_config(cfg);
    return cfg;
}

std::string default_out(const pssv::ExperimentConfig& cfg, const std::string& name,
                        const char* ext) {
    return (std::filesystem::path(cfg.out_dir) / (name + ext)).string();
}

void emit(const pssv::SweepResult& r, const pssv::ExperimentConfig& cfg,
          const Options& opt) {
    const bool want_csv = opt.format == "csv" || opt.format == "both";
    const bool want_svg = opt.format == "svg" || opt.format == "both";
    std::string csv_path =
        opt.out_path.empty() ? default_out(cfg, r.name, ".csv") : opt.out_path;
    if (want_csv) {
        std::ofstream out(csv_path);
        if (!out) throw pssv::ConfigError("cannot write '" + csv_path + "'");
        out << pssv::to_csv(r);
        std::cout << "wrote " << csv_path << "\n";
    }
    if (want_svg) {
        std::string svg_path =
            std::filesystem::path(csv_path).replace_extension(".svg").string();
        pssv::write_svg(r, svg_path);
        std::cout << "wrote " << svg_path << "\n";
    }
}

const char* figure_help(pssv::Figure f) {
    switch (f) {
    case pssv::Figure::fig5:
        return "W(0,0) vs squeezing factor s (narrow filter, losses applied).\n"
               "CSV columns: s,W00,xi_bar,theta_bar,theta_0,V_x,V_p,C_bar,g";
    case pssv::Figure::fig6:
        return "W(0,0) vs homodyne slit transmission at fixed s (full slit "
               "evaluation).\nCSV columns: transmission,W00,xi_bar,theta_bar,"
               "theta_0,V_x,V_p,C_bar,g,s";
    case pssv::Figure::fig7:
        return "W(0,0) vs pump/homodyne waist ratio at fixed s.\nCSV columns: "
               "wp_over_w,W00,xi_bar,theta_bar,theta_0,V_x,V_p,C_bar,g,s";
    case pssv::Figure::fig8:
        return "Mixing angles theta_bar and theta_0 vs squeezing factor s.\n"
               "CSV columns: s,W00,xi_bar,theta_bar,theta_0,V_x,V_p,C_bar,g";
    case pssv::Figure::fig9:
        return "Wigner sections along (x,0) and (0,p) with the empirical "
               "best fit.\nCSV columns: coord,W_x0,W_0p,Wemp_x0,Wemp_0p";
    }
    return "";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pssv - conditional photon subtraction from pulsed squeezed "
                 "vacuum: two-mode reduction, Wigner functions, spectral "
                 "filtering and model fits"};
    app.set_version_flag("--version", pssv::kVersion);
    app.require_subcommand(1);

    Options opt;
    app.add_option("--config", opt.config_path, "flat key=value config file");
    app.add_option("--out", opt.out_path, "output path (default <output.dir>/<cmd>.csv)");
    app.add_option("--format", opt.format, "csv | svg | both")
        ->check(CLI::IsMember({"csv", "svg", "both"}));
    std::uint64_t seed_arg = 0;
    auto* seed_opt = app.add_option("--seed", seed_arg, "seed for randomized checks");

    struct FigCmd {
        const char* name;
        pssv::Figure fig;
    };
    const FigCmd figures[] = {{"fig5", pssv::Figure::fig5},
                              {"fig6", pssv::Figure::fig6},
                              {"fig7", pssv::Figure::fig7},
                              {"fig8", pssv::Figure::fig8},
                              {"fig9", pssv::Figure::fig9}};
    for (const auto& f : figures) {
        app.add_subcommand(f.name, figure_help(f.fig))->fallthrough();
    }
    app.add_subcommand("fit-empirical",
                       "Fit the empirical model to the multimode Wigner function.\n"
                       "CSV columns: xi_opt,g_opt,fit_error_percent,s,g_model,xi_bar,W00")
        ->fallthrough();
    app.add_subcommand("validate",
                       "Run every oracle-vs-closed-form comparison and invariant; "
                       "nonzero exit on failure")
        ->fallthrough();
    app.add_subcommand("show-config", "Print the effective configuration")->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e); // prints message; 0 for help/version
        return code == 0 ? kExitOk : kExitConfig;
    }
    if (*seed_opt) opt.seed = seed_arg;

    try {
        const pssv::ExperimentConfig cfg = load_config(opt);
        for (const auto& f : figures) {
            if (app.got_subcommand(f.name)) {
                emit(pssv::run_figure(cfg, f.fig), cfg, opt);
                return kExitOk;
            }
        }
        if (app.got_subcommand("fit-empirical")) {
            const pssv::SweepResult r = pssv::run_fit(cfg);
            emit(r, cfg, opt);
            for (std::size_t i = 0; i < r.columns.size(); ++i) {
                std::cout << r.columns[i] << " = " << r.rows[0][i] << "\n";
            }
            return kExitOk;
        }
        if (app.got_subcommand("validate")) {
            const auto checks = pssv::run_validation(cfg, cfg.seed);
            int failures = 0;
            for (const auto& c : checks) {
                std::cout << (c.pass ? "ok   " : "FAIL ") << c.name
                          << "  (measured " << c.measured << ", tolerance "
                          << c.tolerance << ")\n";
                failures += c.pass ? 0 : 1;
            }
            std::cout << checks.size() - failures << "/" << checks.size()
                      << " checks passed\n";
            return failures == 0 ? kExitOk : kExitValidation;
        }
        if (app.got_subcommand("show-config")) {
            std::cout << pssv::config_echo(cfg);
            return kExitOk;
        }
    } catch (const pssv::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const pssv::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitOk;
}
