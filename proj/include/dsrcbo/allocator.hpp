#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "dsrcbo/params.hpp"
#include "dsrcbo/rng.hpp"

namespace dsrcbo {

/// P(initial backoff counter = c) for a node in category k. The decreasing
/// branch is the normalized geometric r^(c+1); the flat branch is 1/CW.
double p_ini(int c, int k, const MacParams& mac, const RiskModelParams& risk);

/// Full counter distribution for one branch; sums to 1 exactly up to
/// floating rounding.
std::vector<double> p_ini_row(AllocBranch branch, const MacParams& mac);

/// Mixture distribution over counters for given branch weights.
std::vector<double> p_ini_mixture(double w_decreasing, double w_flat, const MacParams& mac);

/// Inverse-transform draw from p_ini(., k).
int sample_backoff(int k, const MacParams& mac, const RiskModelParams& risk, Rng& rng);

int sample_backoff(AllocBranch branch, const MacParams& mac, Rng& rng);

/// Busy-slot budget before expiry for a node holding counter c:
/// L_bcn - l_bcn - c.
int delta_c(int c, const MacParams& mac);

/// The backoff process as a finite Markov chain: backoff states B_0..B_{CW-1},
/// delay states D_{c,m} (c in [1,CW-1], m in [1,delta_c]) and an absorbing
/// EXP state. Rows are stored sparsely; state order is fixed so dumps are
/// comparable across runs.
class BackoffChain {
  public:
    BackoffChain(int k, double p_b, const MacParams& mac, const RiskModelParams& risk);

    int num_states() const { return num_states_; }
    int cw() const { return cw_; }
    int backoff_index(int c) const;          // B_c
    int delay_index(int c, int m) const;     // D_{c,m}
    int exp_index() const { return num_states_ - 1; }

    const std::vector<std::pair<int, double>>& row(int state) const;
    double row_sum(int state) const;

    /// Dense text form: one row per line, entries space-separated.
    void dump(std::ostream& os) const;

  private:
    int cw_;
    int num_states_;
    std::vector<int> delay_offset_; // index of D_{c,1} per c
    std::vector<int> depth_;        // delta_c per c
    std::vector<std::vector<std::pair<int, double>>> rows_;
};

BackoffChain build_transition_matrix(int k, double p_b, const MacParams& mac,
                                     const RiskModelParams& risk);

} // namespace dsrcbo
