#ifndef PSSV_EXPERIMENT_HPP
#define PSSV_EXPERIMENT_HPP

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "pssv/config.hpp"

// Experiment orchestration: parameter sweeps, the empirical-model fit and
// CSV/SVG emission. CSV is the contract; the SVG plots are a convenience.

namespace pssv {

enum class Figure { fig5, fig6, fig7, fig8, fig9 };

struct SweepResult {
    std::string name;                  // subcommand that produced it
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    // Ordered "key = value" pairs emitted as '#' header lines. The
    // timestamp entry is the only non-deterministic content.
    std::vector<std::pair<std::string, std::string>> metadata;
};

// Narrow-filter working point at a given squeezing factor (or explicit
// pump strength when cfg.qle0 >= 0).
struct WorkingPoint {
    PulseGeometry geom;
    ModeReduction mr;
    SqueezeSpec sqz;
    AveragedMoments moments;
    WignerForm pre_loss;
    WignerForm with_loss;
    double xi_bar;
    double theta_bar;
    double theta_0;
};

WorkingPoint narrow_working_point(const ExperimentConfig& cfg);

SweepResult run_figure(const ExperimentConfig& cfg, Figure which);
SweepResult run_fit(const ExperimentConfig& cfg);

std::string to_csv(const SweepResult& r);
SweepResult from_csv(std::istream& in);

void write_svg(const SweepResult& r, const std::string& path);

} // namespace pssv

#endif
