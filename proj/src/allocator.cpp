#include "dsrcbo/allocator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace dsrcbo {

namespace {

std::vector<double> decreasing_row(const MacParams& mac) {
    // r^(c+1) rescaled to sum to exactly 1; at r = 1/2 this is the printed
    // r^(c+1) / (1 - r^CW).
    const double r = mac.r_decay;
    std::vector<double> row(static_cast<std::size_t>(mac.cw));
    double norm = 0.0;
    double term = r;
    for (int c = 0; c < mac.cw; ++c) {
        row[static_cast<std::size_t>(c)] = term;
        norm += term;
        term *= r;
    }
    for (double& v : row)
        v /= norm;
    return row;
}

} // namespace

double p_ini(int c, int k, const MacParams& mac, const RiskModelParams& risk) {
    mac.validate();
    risk.validate();
    if (c < 0 || c >= mac.cw)
        throw std::invalid_argument("backoff counter out of [0, cw)");
    if (k < 1 || k > risk.num_categories)
        throw std::invalid_argument("risk category out of [1, K]");
    if (branch_for_category(k, risk) == AllocBranch::Flat)
        return 1.0 / mac.cw;
    return decreasing_row(mac)[static_cast<std::size_t>(c)];
}

std::vector<double> p_ini_row(AllocBranch branch, const MacParams& mac) {
    mac.validate();
    if (branch == AllocBranch::Flat)
        return std::vector<double>(static_cast<std::size_t>(mac.cw), 1.0 / mac.cw);
    return decreasing_row(mac);
}

std::vector<double> p_ini_mixture(double w_decreasing, double w_flat, const MacParams& mac) {
    const auto dec = p_ini_row(AllocBranch::Decreasing, mac);
    std::vector<double> mix(static_cast<std::size_t>(mac.cw));
    const double flat = 1.0 / mac.cw;
    for (int c = 0; c < mac.cw; ++c)
        mix[static_cast<std::size_t>(c)] =
            w_decreasing * dec[static_cast<std::size_t>(c)] + w_flat * flat;
    return mix;
}

int sample_backoff(AllocBranch branch, const MacParams& mac, Rng& rng) {
    if (mac.cw == 1)
        return 0;
    if (branch == AllocBranch::Flat)
        return static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(mac.cw)));
    const auto row = p_ini_row(branch, mac);
    const double u = rng.uniform();
    double acc = 0.0;
    for (int c = 0; c < mac.cw; ++c) {
        acc += row[static_cast<std::size_t>(c)];
        if (u < acc)
            return c;
    }
    return mac.cw - 1;
}

int sample_backoff(int k, const MacParams& mac, const RiskModelParams& risk, Rng& rng) {
    mac.validate();
    risk.validate();
    if (k < 1 || k > risk.num_categories)
        throw std::invalid_argument("risk category out of [1, K]");
    return sample_backoff(branch_for_category(k, risk), mac, rng);
}

int delta_c(int c, const MacParams& mac) {
    mac.validate();
    if (c < 0 || c >= mac.cw)
        throw std::invalid_argument("backoff counter out of [0, cw)");
    return mac.big_l_bcn_slots - mac.l_bcn_slots - c;
}

BackoffChain::BackoffChain(int k, double p_b, const MacParams& mac, const RiskModelParams& risk)
    : cw_(mac.cw) {
    mac.validate();
    risk.validate();
    if (!(p_b >= 0.0) || !(p_b <= 1.0))
        throw std::invalid_argument("p_b must be in [0, 1]");

    delay_offset_.assign(static_cast<std::size_t>(cw_), 0);
    depth_.assign(static_cast<std::size_t>(cw_), 0);
    int next = cw_;
    for (int c = 1; c < cw_; ++c) {
        delay_offset_[static_cast<std::size_t>(c)] = next;
        depth_[static_cast<std::size_t>(c)] = delta_c(c, mac);
        next += depth_[static_cast<std::size_t>(c)];
    }
    num_states_ = next + 1; // + EXP
    rows_.resize(static_cast<std::size_t>(num_states_));

    // B_0 re-draws the next period's counter.
    auto& b0 = rows_[0];
    for (int c = 0; c < cw_; ++c)
        b0.emplace_back(c, p_ini(c, k, mac, risk));

    for (int c = 1; c < cw_; ++c) {
        auto& row = rows_[static_cast<std::size_t>(backoff_index(c))];
        row.emplace_back(backoff_index(c - 1), 1.0 - p_b);
        row.emplace_back(delay_index(c, 1), p_b);
        const int depth = depth_[static_cast<std::size_t>(c)];
        for (int m = 1; m <= depth; ++m) {
            auto& drow = rows_[static_cast<std::size_t>(delay_index(c, m))];
            drow.emplace_back(backoff_index(c - 1), 1.0 - p_b);
            drow.emplace_back(m < depth ? delay_index(c, m + 1) : exp_index(), p_b);
        }
    }
    rows_[static_cast<std::size_t>(exp_index())].emplace_back(exp_index(), 1.0);
}

int BackoffChain::backoff_index(int c) const {
    if (c < 0 || c >= cw_)
        throw std::out_of_range("backoff state out of range");
    return c;
}

int BackoffChain::delay_index(int c, int m) const {
    if (c < 1 || c >= cw_ || m < 1 || m > depth_[static_cast<std::size_t>(c)])
        throw std::out_of_range("delay state out of range");
    return delay_offset_[static_cast<std::size_t>(c)] + m - 1;
}

const std::vector<std::pair<int, double>>& BackoffChain::row(int state) const {
    return rows_.at(static_cast<std::size_t>(state));
}

double BackoffChain::row_sum(int state) const {
    double s = 0.0;
    for (const auto& [j, p] : row(state))
        s += p;
    return s;
}

void BackoffChain::dump(std::ostream& os) const {
    std::vector<double> dense(static_cast<std::size_t>(num_states_));
    char buf[32];
    for (int i = 0; i < num_states_; ++i) {
        std::fill(dense.begin(), dense.end(), 0.0);
        for (const auto& [j, p] : rows_[static_cast<std::size_t>(i)])
            dense[static_cast<std::size_t>(j)] += p;
        for (int j = 0; j < num_states_; ++j) {
            std::snprintf(buf, sizeof buf, "%.12g", dense[static_cast<std::size_t>(j)]);
            if (j)
                os << ' ';
            os << buf;
        }
        os << '\n';
    }
}

BackoffChain build_transition_matrix(int k, double p_b, const MacParams& mac,
                                     const RiskModelParams& risk) {
    return BackoffChain(k, p_b, mac, risk);
}

} // namespace dsrcbo
