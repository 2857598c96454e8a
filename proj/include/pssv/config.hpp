#ifndef PSSV_CONFIG_HPP
#define PSSV_CONFIG_HPP

#include <cstdint>
#include <iosfwd>
#include <string>

#include "pssv/conditioning.hpp"
#include "pssv/pulse_model.hpp"

namespace pssv {

struct SweepSpec {
    std::string variable; // empty: use the figure's default sweep
    double from = 0.0;
    double to = 0.0;
    int steps = 0;
    bool is_set() const { return !variable.empty(); }
};

// Flat key-value configuration with dotted keys. Unknown keys are errors.
struct ExperimentConfig {
    // geometry
    double w_um = 100.0;       // homodyne waist
    double wp_ratio = 1.2;     // w / w_P
    double wf_ratio = 1.5;     // w / w_f
    bool uniform_profile = false;
    // pulse
    double tau_fs = 150.0;
    std::string taup_preset = "equal"; // equal | shg | fixed
    double taup_fs = 150.0;            // used by the "fixed" preset
    double taug_fs = 120.0;
    // squeezing working point
    double target_s = 0.56;
    double qle0 = -1.0; // >= 0: use directly instead of solving for target_s
    // conditioning filter chain
    double omega_rad_per_fs = 0.02;
    double eta_c = 0.3;
    double sampling_t = 0.90; // sampling beamsplitter transmission, R = 1 - T
    // homodyne losses
    double eta_hom = 0.93;
    // empirical fit
    bool fit_g = false;
    // sweeps and reproducibility
    SweepSpec sweep;
    std::uint64_t seed = 12345;
    std::string out_dir = ".";

    PulseGeometry geometry() const;      // qle0 resolved by the caller
    FilterChain filter_chain() const;
    LossChain loss_chain() const;
};

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_file(const std::string& path);

// Effective configuration as "key = value" lines (stable key order).
std::string config_echo(const ExperimentConfig& cfg);

// Throws ConfigError when any parameter is out of range.
void validate_config(const ExperimentConfig& cfg);

} // namespace pssv

#endif
