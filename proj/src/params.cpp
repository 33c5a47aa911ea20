#include "dsrcbo/params.hpp"

#include <stdexcept>

namespace dsrcbo {

void RiskModelParams::validate() const {
    if (!(sigma > 0.0))
        throw std::invalid_argument("sigma must be > 0");
    if (num_categories < 2)
        throw std::invalid_argument("K must be >= 2");
    if (!(step_size > 0.0))
        throw std::invalid_argument("Q must be > 0");
}

void MacParams::validate() const {
    if (cw < 1)
        throw std::invalid_argument("cw must be >= 1");
    if (l_bcn_slots < 1)
        throw std::invalid_argument("l_bcn must be >= 1");
    if (big_l_bcn_slots < 1)
        throw std::invalid_argument("L_bcn must be >= 1");
    if (l_bcn_slots + cw > big_l_bcn_slots)
        throw std::invalid_argument("l_bcn + cw must be <= L_bcn so every expiry depth is nonnegative");
    if (!(r_decay > 0.0) || !(r_decay < 1.0))
        throw std::invalid_argument("r_decay must be in (0, 1)");
}

int half_point(int num_categories) { return (num_categories + 1) / 2; }

AllocBranch branch_for_category(int k, const RiskModelParams& risk) {
    const int hp = half_point(risk.num_categories);
    // The middle category of an odd K is covered by neither printed branch;
    // it folds into the flat side under HighRiskDecreasing.
    if (risk.division_rule == DivisionRule::HighRiskDecreasing)
        return k > hp ? AllocBranch::Decreasing : AllocBranch::Flat;
    return k <= hp ? AllocBranch::Decreasing : AllocBranch::Flat;
}

std::string to_string(DivisionRule r) {
    return r == DivisionRule::HighRiskDecreasing ? "high_risk_decreasing" : "low_risk_decreasing";
}
std::string to_string(AllocBranch b) { return b == AllocBranch::Decreasing ? "decreasing" : "flat"; }
std::string to_string(TauModel m) {
    switch (m) {
    case TauModel::Budget: return "budget";
    case TauModel::Chain: return "chain";
    default: return "untruncated";
    }
}
std::string to_string(BusyModel m) {
    switch (m) {
    case BusyModel::Occupancy: return "occupancy";
    case BusyModel::BinomialPeriod: return "binomial_period";
    default: return "binomial_slot";
    }
}

} // namespace dsrcbo
