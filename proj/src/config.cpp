#include "pssv/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "pssv/errors.hpp"

namespace pssv {

PulseGeometry ExperimentConfig::geometry() const {
    PulseGeometry g;
    g.w = w_um;
    g.w_p = w_um / wp_ratio;
    g.w_f = w_um / wf_ratio;
    g.tau = tau_fs;
    if (taup_preset == "equal") {
        g.tau_p = tau_fs;
    } else if (taup_preset == "shg") {
        g.tau_p = tau_fs / std::sqrt(2.0);
    } else if (taup_preset == "fixed") {
        g.tau_p = taup_fs;
    } else {
        throw ConfigError("pulse.taup_preset must be equal, shg or fixed");
    }
    g.tau_g = taug_fs;
    g.qle0 = qle0 >= 0.0 ? qle0 : 0.0; // resolved from target_s by callers
    g.uniform_profile = uniform_profile;
    return g;
}

FilterChain ExperimentConfig::filter_chain() const {
    return {omega_rad_per_fs, 1.0 - sampling_t, eta_c};
}

LossChain ExperimentConfig::loss_chain() const {
    return {eta_hom, sampling_t};
}

namespace {

struct KeyBinding {
    std::function<void(ExperimentConfig&, const std::string&)> set;
    std::function<std::string(const ExperimentConfig&)> get;
};

double to_double(const std::string& value) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &pos);
    } catch (const std::exception&) {
        throw ConfigError("cannot parse number from '" + value + "'");
    }
    if (pos != value.size()) {
        throw ConfigError("trailing characters in '" + value + "'");
    }
    return v;
}

int to_int(const std::string& value) {
    const double v = to_double(value);
    if (v != std::floor(v)) throw ConfigError("expected an integer");
    return static_cast<int>(v);
}

bool to_bool(const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError("expected a boolean (true/false)");
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

const std::map<std::string, KeyBinding>& bindings() {
    auto num = [](double ExperimentConfig::* f) {
        return KeyBinding{
            [f](ExperimentConfig& c, const std::string& v) { c.*f = to_double(v); },
            [f](const ExperimentConfig& c) { return fmt(c.*f); }};
    };
    auto flag = [](bool ExperimentConfig::* f) {
        return KeyBinding{
            [f](ExperimentConfig& c, const std::string& v) { c.*f = to_bool(v); },
            [f](const ExperimentConfig& c) { return c.*f ? std::string("true") : std::string("false"); }};
    };
    static const std::map<std::string, KeyBinding> map = {
        {"geometry.w_um", num(&ExperimentConfig::w_um)},
        {"geometry.wp_ratio", num(&ExperimentConfig::wp_ratio)},
        {"geometry.wf_ratio", num(&ExperimentConfig::wf_ratio)},
        {"geometry.uniform_profile", flag(&ExperimentConfig::uniform_profile)},
        {"pulse.tau_fs", num(&ExperimentConfig::tau_fs)},
        {"pulse.taup_fs", num(&ExperimentConfig::taup_fs)},
        {"pulse.taup_preset",
         {[](ExperimentConfig& c, const std::string& v) { c.taup_preset = v; },
          [](const ExperimentConfig& c) { return c.taup_preset; }}},
        {"pulse.taug_fs", num(&ExperimentConfig::taug_fs)},
        {"squeeze.s", num(&ExperimentConfig::target_s)},
        {"squeeze.qle0", num(&ExperimentConfig::qle0)},
        {"filter.omega_rad_per_fs", num(&ExperimentConfig::omega_rad_per_fs)},
        {"filter.eta_c", num(&ExperimentConfig::eta_c)},
        {"sampling.T", num(&ExperimentConfig::sampling_t)},
        {"losses.eta_hom", num(&ExperimentConfig::eta_hom)},
        {"fit.enable_g", flag(&ExperimentConfig::fit_g)},
        {"sweep.variable",
         {[](ExperimentConfig& c, const std::string& v) { c.sweep.variable = v; },
          [](const ExperimentConfig& c) { return c.sweep.variable; }}},
        {"sweep.from",
         {[](ExperimentConfig& c, const std::string& v) { c.sweep.from = to_double(v); },
          [](const ExperimentConfig& c) { return fmt(c.sweep.from); }}},
        {"sweep.to",
         {[](ExperimentConfig& c, const std::string& v) { c.sweep.to = to_double(v); },
          [](const ExperimentConfig& c) { return fmt(c.sweep.to); }}},
        {"sweep.steps",
         {[](ExperimentConfig& c, const std::string& v) { c.sweep.steps = to_int(v); },
          [](const ExperimentConfig& c) { return std::to_string(c.sweep.steps); }}},
        {"run.seed",
         {[](ExperimentConfig& c, const std::string& v) {
              c.seed = static_cast<std::uint64_t>(std::stoull(v));
          },
          [](const ExperimentConfig& c) { return std::to_string(c.seed); }}},
        {"output.dir",
         {[](ExperimentConfig& c, const std::string& v) { c.out_dir = v; },
          [](const ExperimentConfig& c) { return c.out_dir; }}},
    };
    return map;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

} // namespace

ExperimentConfig parse_config(std::istream& in) {
    ExperimentConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) +
                              ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = bindings().find(key);
        if (it == bindings().end()) {
            throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" +
                              key + "'");
        }
        try {
            it->second.set(cfg, value);
        } catch (const std::exception& e) {
            throw ConfigError("line " + std::to_string(lineno) + ", key '" + key +
                              "': " + e.what());
        }
    }
    validate_config(cfg);
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in);
}

std::string config_echo(const ExperimentConfig& cfg) {
    std::ostringstream out;
    for (const auto& [key, binding] : bindings()) {
        out << key << " = " << binding.get(cfg) << "\n";
    }
    return out.str();
}

void validate_config(const ExperimentConfig& cfg) {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw ConfigError(std::string(name) + " must be positive and finite");
        }
    };
    positive(cfg.w_um, "geometry.w_um");
    positive(cfg.wp_ratio, "geometry.wp_ratio");
    positive(cfg.wf_ratio, "geometry.wf_ratio");
    positive(cfg.tau_fs, "pulse.tau_fs");
    positive(cfg.taup_fs, "pulse.taup_fs");
    if (cfg.taug_fs < 0.0) throw ConfigError("pulse.taug_fs must be >= 0");
    if (cfg.taup_preset != "equal" && cfg.taup_preset != "shg" &&
        cfg.taup_preset != "fixed") {
        throw ConfigError("pulse.taup_preset must be equal, shg or fixed");
    }
    if (cfg.target_s <= 0.0 || cfg.target_s > 1.0) {
        throw ConfigError("squeeze.s must lie in (0, 1]");
    }
    if (cfg.qle0 >= 2.0) throw ConfigError("squeeze.qle0 must be < 2");
    positive(cfg.omega_rad_per_fs, "filter.omega_rad_per_fs");
    if (cfg.eta_c <= 0.0 || cfg.eta_c > 1.0) {
        throw ConfigError("filter.eta_c must lie in (0, 1]");
    }
    if (cfg.sampling_t <= 0.0 || cfg.sampling_t >= 1.0) {
        throw ConfigError("sampling.T must lie in (0, 1)");
    }
    if (cfg.eta_hom <= 0.0 || cfg.eta_hom > 1.0) {
        throw ConfigError("losses.eta_hom must lie in (0, 1]");
    }
    if (cfg.sweep.is_set()) {
        if (cfg.sweep.steps < 2) throw ConfigError("sweep.steps must be >= 2");
        if (!(cfg.sweep.from < cfg.sweep.to)) {
            throw ConfigError("sweep bounds must satisfy from < to");
        }
    }
}

} // namespace pssv
