#pragma once

#include <map>
#include <vector>

#include "dsrcbo/params.hpp"
#include "dsrcbo/solver.hpp"

namespace dsrcbo::oracle {

/// Exhaustive dynamic program over the budget walk: the probability that an
/// initial counter drains before its total stall count exceeds delta_c.
/// Independent of the incomplete-beta route used by the solver.
double tau_budget_dp(AllocBranch branch, double p_b, const MacParams& mac);

/// First-hitting probability of B_0 for the transition matrix, by power
/// iteration until the transient mass is exhausted.
double tau_chain_absorption(int k, double p_b, const MacParams& mac,
                            const RiskModelParams& risk);

/// Term-by-term double sum for the expected backoff slots.
double expected_backoff_slots_direct(const BranchMix& mix, double p_b, const MacParams& mac);

/// Full enumeration over transmit subsets and counter assignments.
double p_sync_enumeration(int n_cs, int cw, double tau);

/// Full enumeration over the tagged counter, hidden transmit indicators and
/// hidden counters, with slot-interval overlap checks.
double p_hn_enumeration(int n_cs, int cw, double tau, int l_bcn_slots, const BranchMix& mix,
                        const MacParams& mac);

/// Slot-grid count of non-overlapping hidden counters.
int s_no_hn_bruteforce(int c, int cw, int l_bcn_slots);

/// Adaptive Simpson quadrature of the speed-variance density over psi >= 0
/// (via the substitution psi = u^2, which removes the endpoint singularity).
double psi_pdf_integral(double sigma, double tol = 1e-9);

/// Kolmogorov-Smirnov statistic of samples against the analytic CDF.
double ks_statistic_psi(std::vector<double> samples, double sigma);

/// erf to ~1e-18 via long-double series / continued fraction; reference for
/// the std::erf-based closed forms.
double erf_reference(double x);

/// Goodness-of-fit p-value of an inter-reception histogram against
/// Geometric(p); small expected bins merge into the tail.
double chi_square_geometric_pvalue(const std::map<int, long>& histogram, double p,
                                   int max_individual_nu = 10);

/// Sign-change scan of g(tau) = tau - F(tau) over [0,1] on a uniform grid,
/// refined by bisection inside the bracketing cell.
double grid_scan_tau(int n_cs, const BranchMix& mix, const MacParams& mac, TauModel tau_model,
                     BusyModel busy_model, double step = 1e-4);

} // namespace dsrcbo::oracle
