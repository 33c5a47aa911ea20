#pragma once

#include <vector>

#include "dsrcbo/params.hpp"

namespace dsrcbo {

/// Population weights on the two allocation branches.
struct BranchMix {
    double decreasing = 0.0;
    double flat = 1.0;
};

/// Reduce per-category weights (k = 1..K, summing to 1) to branch weights
/// under the configured division rule.
BranchMix branch_mix_from_categories(const std::vector<double>& category_weights,
                                     const RiskModelParams& risk);

struct FixedPointResult {
    double tau = 0.0;
    double p_b = 0.0;
    int iterations = 0;
    double residual = 0.0;
    bool converged = false;
};

/// 1 - (1 - tau)^n_cs.
double pb_given_tau(double tau, int n_cs);

/// Probability of draining the counter and transmitting within one period,
/// for a node on one allocation branch at busy probability p_b.
double tau_for_branch(AllocBranch branch, double p_b, const MacParams& mac, TauModel model);

/// Mixture over branches.
double tau_given_pb(double p_b, const BranchMix& mix, const MacParams& mac, TauModel model);

/// Busy probability implied by n_cs competitors transmitting with
/// probability tau, under the selected busy model.
double busy_from_tau(double tau, int n_cs, const BranchMix& mix, const MacParams& mac,
                     BusyModel model);

/// Simultaneous solution of tau = tau_given_pb(p_b) and
/// p_b = busy_from_tau(tau). Damped Picard iteration with a bisection
/// fallback on g(tau) = tau - F(tau) when the iteration oscillates.
FixedPointResult solve_fixed_point(int n_cs, const BranchMix& mix, const MacParams& mac,
                                   TauModel tau_model, BusyModel busy_model, double tol,
                                   int max_iter);

/// Expected slots spent in backoff: sum over counters c and stall counts d
/// of P_ini(c) * p_b^d * (c + d), d capped at the expiry depth delta_c.
double expected_backoff_slots(const BranchMix& mix, double p_b, const MacParams& mac);

/// 1 - tau.
double p_exp(double tau);

namespace detail {
double regularized_incomplete_beta(double a, double b, double x);
/// P[number of busy slots <= max_busy] while draining c counters, each slot
/// independently busy with probability p_busy.
double stall_budget_cdf(int c, int max_busy, double p_busy);
} // namespace detail

} // namespace dsrcbo
