#include "dsrcbo/collision.hpp"

#include <cmath>
#include <stdexcept>

#include "dsrcbo/allocator.hpp"
#include "dsrcbo/spatial.hpp"

namespace dsrcbo {

namespace {

void check_unit(double v, const char* name) {
    if (!(v >= 0.0) || !(v <= 1.0))
        throw std::invalid_argument(std::string(name) + " must be in [0, 1]");
}

double log_binomial(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

} // namespace

double p_sync(int n_cs, int cw, double tau) {
    if (n_cs < 0)
        throw std::invalid_argument("n_cs must be nonnegative");
    if (cw < 1)
        throw std::invalid_argument("cw must be >= 1");
    check_unit(tau, "tau");
    if (n_cs == 0 || tau == 0.0)
        return 0.0;

    const double log_tau = std::log(tau);
    const bool tau_one = tau >= 1.0;
    const double log_1m = tau_one ? 0.0 : std::log1p(-tau);
    // Prefix log of the all-distinct factor CW! / ((CW-k)! CW^k).
    double log_distinct = 0.0;
    double no_sync = 0.0;
    const int k_max = n_cs < cw ? n_cs : cw;
    for (int k = 0; k <= k_max; ++k) {
        if (k > 0)
            log_distinct += std::log1p(-static_cast<double>(k - 1) / cw);
        if (tau_one && k != n_cs)
            continue;
        if (!tau_one && tau == 0.0 && k != 0)
            continue;
        const double log_term = log_binomial(n_cs, k) + k * log_tau +
                                (n_cs - k) * log_1m + log_distinct;
        no_sync += std::exp(log_term);
    }
    double out = 1.0 - no_sync;
    return out < 0.0 ? 0.0 : (out > 1.0 ? 1.0 : out);
}

int s_no_hn_size(int c, int cw, int l_bcn_slots) {
    if (cw < 1)
        throw std::invalid_argument("cw must be >= 1");
    if (c < 0 || c >= cw)
        throw std::invalid_argument("backoff counter out of [0, cw)");
    if (l_bcn_slots < 1)
        throw std::invalid_argument("l_bcn must be >= 1");
    const int before = c - l_bcn_slots + 1;        // b + l <= c
    const int after = cw - c - l_bcn_slots;        // b >= c + l
    return (before > 0 ? before : 0) + (after > 0 ? after : 0);
}

double p_hn_population(int n_hn, int cw, double tau, int l_bcn_slots, const BranchMix& mix,
                       const MacParams& mac) {
    if (n_hn < 0)
        throw std::invalid_argument("n_hn must be nonnegative");
    check_unit(tau, "tau");
    if (n_hn == 0 || tau == 0.0)
        return 0.0;
    MacParams m = mac;
    m.cw = cw;
    m.l_bcn_slots = l_bcn_slots;
    const auto tagged_pmf = p_ini_mixture(mix.decreasing, mix.flat, m);

    // weights[c] = p_tag(c) * (s(c)/cw)^k, advanced per transmitter count.
    std::vector<double> weights(tagged_pmf);
    std::vector<double> ratio(static_cast<std::size_t>(cw));
    for (int c = 0; c < cw; ++c)
        ratio[static_cast<std::size_t>(c)] =
            static_cast<double>(s_no_hn_size(c, cw, l_bcn_slots)) / cw;

    const double log_tau = std::log(tau);
    const bool tau_one = tau >= 1.0;
    const double log_1m = tau_one ? 0.0 : std::log1p(-tau);
    double no_hn = 0.0;
    const int k_max = n_hn < cw ? n_hn : cw;
    for (int k = 0; k <= k_max; ++k) {
        if (k > 0)
            for (int c = 0; c < cw; ++c)
                weights[static_cast<std::size_t>(c)] *= ratio[static_cast<std::size_t>(c)];
        if (tau_one && k != n_hn)
            continue;
        double window_avg = 0.0;
        for (double w : weights)
            window_avg += w;
        const double log_term = log_binomial(n_hn, k) + k * log_tau + (n_hn - k) * log_1m;
        no_hn += std::exp(log_term) * window_avg;
    }
    double out = 1.0 - no_hn;
    return out < 0.0 ? 0.0 : (out > 1.0 ? 1.0 : out);
}

double p_hn(int n_cs, int cw, double tau, int l_bcn_slots, const BranchMix& mix,
            const MacParams& mac) {
    return p_hn_population(count_hidden_nodes(n_cs), cw, tau, l_bcn_slots, mix, mac);
}

double p_col(double p_sync_v, double p_hn_v) {
    check_unit(p_sync_v, "p_sync");
    check_unit(p_hn_v, "p_hn");
    return p_sync_v * (1.0 - p_hn_v) + p_hn_v * (1.0 - p_sync_v) + p_sync_v * p_hn_v;
}

double pdr(double tau, double p_col_v) {
    check_unit(tau, "tau");
    check_unit(p_col_v, "p_col");
    return tau * (1.0 - p_col_v);
}

double irt_pmf(int nu, double pdr_value) {
    if (nu < 1)
        throw std::invalid_argument("nu must be >= 1");
    if (pdr_value == 0.0)
        throw std::domain_error("irt pmf is degenerate at pdr = 0");
    if (!(pdr_value > 0.0) || !(pdr_value <= 1.0))
        throw std::invalid_argument("pdr must be in (0, 1]");
    return std::pow(1.0 - pdr_value, static_cast<double>(nu - 1)) * pdr_value;
}

std::vector<double> irt_pmf_vector(int max_nu, double pdr_value) {
    if (max_nu < 1)
        throw std::invalid_argument("max_nu must be >= 1");
    std::vector<double> pmf(static_cast<std::size_t>(max_nu));
    for (int nu = 1; nu <= max_nu; ++nu)
        pmf[static_cast<std::size_t>(nu - 1)] = irt_pmf(nu, pdr_value);
    return pmf;
}

DeliveryMetrics delivery_metrics(int n_cs, double tau, const BranchMix& mix,
                                 const MacParams& mac) {
    DeliveryMetrics d;
    d.p_sync = p_sync(n_cs, mac.cw, tau);
    d.p_hn = p_hn(n_cs, mac.cw, tau, mac.l_bcn_slots, mix, mac);
    d.p_col = p_col(d.p_sync, d.p_hn);
    d.pdr = pdr(tau, d.p_col);
    return d;
}

} // namespace dsrcbo
