#pragma once

#include <vector>

#include "dsrcbo/params.hpp"
#include "dsrcbo/solver.hpp"

namespace dsrcbo {

struct DeliveryMetrics {
    double p_sync = 0.0;
    double p_hn = 0.0;
    double p_col = 0.0;
    double pdr = 0.0;
};

/// Probability that at least two of the n_cs in-range competitors transmit
/// with the same counter. Transmitter counts follow Binomial(n_cs, tau);
/// counts above CW cannot all hold distinct counters.
double p_sync(int n_cs, int cw, double tau);

/// Number of counters whose l_bcn-slot window does not intersect the tagged
/// window starting at counter c.
int s_no_hn_size(int c, int cw, int l_bcn_slots);

/// Hidden-node collision probability with the annulus population
/// n_hn = 3 * n_cs; the tagged counter is averaged over its allocation
/// mixture.
double p_hn(int n_cs, int cw, double tau, int l_bcn_slots, const BranchMix& mix,
            const MacParams& mac);

/// Same with an explicit hidden population (used when comparing against a
/// measured annulus count).
double p_hn_population(int n_hn, int cw, double tau, int l_bcn_slots, const BranchMix& mix,
                       const MacParams& mac);

/// p_sync(1-p_hn) + p_hn(1-p_sync) + p_sync*p_hn.
double p_col(double p_sync_v, double p_hn_v);

/// tau * (1 - p_col).
double pdr(double tau, double p_col_v);

/// Geometric inter-reception pmf: (1-PDR)^(nu-1) * PDR, nu in periods.
double irt_pmf(int nu, double pdr_value);

/// pmf values for nu = 1..max_nu.
std::vector<double> irt_pmf_vector(int max_nu, double pdr_value);

DeliveryMetrics delivery_metrics(int n_cs, double tau, const BranchMix& mix, const MacParams& mac);

} // namespace dsrcbo
