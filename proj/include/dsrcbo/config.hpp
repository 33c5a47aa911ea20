#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dsrcbo/scenario.hpp"

namespace dsrcbo {

enum class SweepVariable { NCs, Cw, Sigma, Density };
enum class SweepEngines { Analytic, Simulate, Both };

std::string to_string(SweepVariable v);
std::string to_string(SweepEngines e);

struct SweepSpec {
    SweepVariable variable = SweepVariable::NCs;
    std::vector<double> values; // nonempty, strictly increasing
    SweepEngines engines = SweepEngines::Analytic;
    bool run_proposed = true;
    bool run_flat = true;
    void validate() const;
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct Config {
    Scenario scenario;
    std::optional<SweepSpec> sweep;
};

/// Line-oriented `key = value` file with [scenario] and [sweep] sections.
/// Unknown keys, malformed values and duplicate keys are errors carrying
/// line numbers.
Config parse_config(const std::string& path);

Config parse_config_text(const std::string& text, const std::string& origin = "<string>");

/// Applies one `key=value` override; sweep keys are addressed as
/// `sweep.key=value`. Values are checked immediately, cross-field
/// constraints only by validate_config once all overrides are in.
void apply_override(Config& cfg, const std::string& assignment);

void validate_config(const Config& cfg);

/// Every key with its default and accepted values, as a loadable config.
void print_defaults(std::ostream& os);

} // namespace dsrcbo
