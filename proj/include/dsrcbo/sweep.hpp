#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dsrcbo/config.hpp"

namespace dsrcbo {

struct SweepRow {
    double var = 0.0;
    std::string allocator; // proposed | flat
    std::string engine;    // analytic | sim
    double tau = 0.0, p_b = 0.0, p_exp = 0.0;
    double p_sync = 0.0, p_hn = 0.0, p_col = 0.0;
    double pdr = 0.0, e_nbo = 0.0;
    std::string status = "ok"; // ok | no_converge
    std::vector<double> irt;   // pmf (analytic) or relative frequency (sim)
};

struct SweepResult {
    std::vector<SweepRow> rows; // ordered by (var, allocator, engine)
};

/// Runs one parameter point per sweep value, per requested allocator and
/// engine. Points execute concurrently; row order is deterministic.
SweepResult run_sweep(const Scenario& base, const SweepSpec& spec, int jobs = 1);

/// Header: var,allocator,engine,tau,p_b,p_exp,p_sync,p_hn,p_col,pdr,e_nbo,status
void write_sweep_csv(const SweepResult& result, std::ostream& os);

/// Sidecar: var,allocator,engine,nu,pmf_or_freq
void write_irt_csv(const SweepResult& result, std::ostream& os);

/// Applies one sweep value to a scenario copy.
Scenario scenario_at(const Scenario& base, SweepVariable variable, double value);

} // namespace dsrcbo
