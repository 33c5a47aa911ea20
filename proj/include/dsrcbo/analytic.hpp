#pragma once

#include <map>
#include <utility>
#include <vector>

#include "dsrcbo/collision.hpp"
#include "dsrcbo/scenario.hpp"

namespace dsrcbo {

/// Closed-form metrics for one parameter point.
struct AnalyticReport {
    int n_cs = 0;
    double tau = 0.0;
    double tau_decreasing = 0.0;
    double tau_flat = 0.0;
    double p_b = 0.0;
    double p_exp = 0.0;
    double e_nbo = 0.0;
    double p_sync = 0.0;
    double p_hn = 0.0;
    double p_col = 0.0;
    double pdr = 0.0;
    std::vector<double> irt; // pmf for nu = 1..irt_max_nu (empty if pdr == 0)
    int iterations = 0;
    double residual = 0.0;
    bool converged = true;
    /// Exact P(n_cs > 0) = 1 - exp(-density*pi*r_cs^2); reported alongside
    /// the closed forms, which approximate it by 1.
    double p_ncs_positive = 1.0;
    std::uint64_t scenario_hash = 0;
};

AnalyticReport analyze_point(const Scenario& scenario, int n_cs);

/// Uses the scenario's derived n_cs.
AnalyticReport analyze_point(const Scenario& scenario);

/// Analytic reference for a simulated run: metrics evaluated per measured
/// (n_cs, n_hn) pair and mixed with the observed weights. Under the
/// occupancy busy model the busy probability mixes through the tick
/// occupancy, matching the slot-weighted estimator.
AnalyticReport analyze_mixture(const Scenario& scenario,
                               const std::map<std::pair<int, int>, long>& ncs_nhn_histogram);

} // namespace dsrcbo
