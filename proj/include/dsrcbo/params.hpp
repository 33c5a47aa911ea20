#pragma once

#include <string>

namespace dsrcbo {

/// Which side of the category split gets the decreasing allocation.
/// high_risk_decreasing: categories above the split point draw the
/// geometric-like pattern (the protocol's stated intent). The alias
/// low_risk_decreasing mirrors the printed mass labels instead (the two
/// readings disagree in the source material; both are selectable).
enum class DivisionRule { HighRiskDecreasing, LowRiskDecreasing };

enum class AllocBranch { Decreasing, Flat };

/// How transmission probability within a period is computed from the
/// busy probability.
///   Budget:      per-path total budget of busy slots (delta_c for initial
///                counter c); matches the slot simulator.
///   Chain:       per-level delay depth, the transition-matrix reading.
///   Untruncated: plain nested expansion without expiry truncation.
enum class TauModel { Budget, Chain, Untruncated };

/// How the busy probability seen by a counting-down node is derived from
/// the neighborhood.
///   Occupancy:      start-tick occupancy with packet-length weighting;
///                   mirrors the synchronized slotted protocol.
///   BinomialPeriod: 1-(1-tau)^n_cs with the per-period tau fed directly.
///   BinomialSlot:   same form with tau diluted to a per-slot probability.
enum class BusyModel { Occupancy, BinomialPeriod, BinomialSlot };

struct RiskModelParams {
    double sigma = 5.0;      // std of the speed distribution
    int num_categories = 11; // K
    double step_size = 5.0;  // Q, width of one category band
    double speed_limit = 60.0;
    DivisionRule division_rule = DivisionRule::HighRiskDecreasing;

    void validate() const; // throws std::invalid_argument
};

struct MacParams {
    int cw = 15;               // counters 0..cw-1
    int l_bcn_slots = 8;       // packet airtime in slots
    int big_l_bcn_slots = 750; // beaconing period in slots
    double r_decay = 0.5;      // decay of the decreasing allocation

    void validate() const; // throws std::invalid_argument
};

/// ceil(K/2), the category split point.
int half_point(int num_categories);

AllocBranch branch_for_category(int k, const RiskModelParams& risk);

std::string to_string(DivisionRule r);
std::string to_string(AllocBranch b);
std::string to_string(TauModel m);
std::string to_string(BusyModel m);

} // namespace dsrcbo
