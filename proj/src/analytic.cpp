#include "dsrcbo/analytic.hpp"

#include <cmath>
#include <limits>

#include "dsrcbo/allocator.hpp"

namespace dsrcbo {

namespace {

double exact_p_ncs_positive(const Scenario& sc) {
    return -std::expm1(-sc.density_per_m2 * M_PI * sc.r_cs_m * sc.r_cs_m);
}

} // namespace

AnalyticReport analyze_point(const Scenario& scenario, int n_cs) {
    scenario.validate();
    const BranchMix mix = scenario.branch_mix();
    const auto fp = solve_fixed_point(n_cs, mix, scenario.mac, scenario.tau_model,
                                      scenario.busy_model, scenario.fp_tol, scenario.fp_max_iter);
    AnalyticReport r;
    r.n_cs = n_cs;
    r.tau = fp.tau;
    r.p_b = fp.p_b;
    r.iterations = fp.iterations;
    r.residual = fp.residual;
    r.converged = fp.converged;
    r.tau_decreasing =
        tau_for_branch(AllocBranch::Decreasing, fp.p_b, scenario.mac, scenario.tau_model);
    r.tau_flat = tau_for_branch(AllocBranch::Flat, fp.p_b, scenario.mac, scenario.tau_model);
    r.p_exp = p_exp(fp.tau);
    r.e_nbo = fp.p_b < 1.0 ? expected_backoff_slots(mix, fp.p_b, scenario.mac)
                           : std::numeric_limits<double>::quiet_NaN();
    // In the diluted busy model the collision exposure is per slot; the
    // other models keep the counter-grid semantics of the slot engine.
    // Delivery still pairs the per-period tau with the collision odds.
    const double tau_exposure = scenario.busy_model == BusyModel::BinomialSlot
                                    ? fp.tau / scenario.mac.big_l_bcn_slots
                                    : fp.tau;
    const auto d = delivery_metrics(n_cs, tau_exposure, mix, scenario.mac);
    r.p_sync = d.p_sync;
    r.p_hn = d.p_hn;
    r.p_col = d.p_col;
    r.pdr = pdr(fp.tau, r.p_col);
    if (r.pdr > 0.0)
        r.irt = irt_pmf_vector(scenario.irt_max_nu, r.pdr);
    r.p_ncs_positive = exact_p_ncs_positive(scenario);
    r.scenario_hash = scenario.hash();
    return r;
}

AnalyticReport analyze_point(const Scenario& scenario) {
    return analyze_point(scenario, scenario.derived_n_cs());
}

AnalyticReport analyze_mixture(const Scenario& scenario,
                               const std::map<std::pair<int, int>, long>& hist) {
    scenario.validate();
    const BranchMix mix = scenario.branch_mix();
    AnalyticReport out;
    out.scenario_hash = scenario.hash();
    long total = 0;
    for (const auto& [key, count] : hist)
        total += count;
    if (total == 0)
        return out;

    const double l = static_cast<double>(scenario.mac.l_bcn_slots);
    std::map<int, std::pair<double, double>> cache; // n_cs -> (tau, p_b)
    double mean_pb = 0.0;
    double mean_q = 0.0; // tick occupancy, occupancy model only
    bool q_finite = true;
    double mean_ncs = 0.0;
    for (const auto& [key, count] : hist) {
        const auto [n_cs, n_hn] = key;
        const double w = static_cast<double>(count) / static_cast<double>(total);
        auto it = cache.find(n_cs);
        if (it == cache.end()) {
            const auto fp =
                solve_fixed_point(n_cs, mix, scenario.mac, scenario.tau_model,
                                  scenario.busy_model, scenario.fp_tol, scenario.fp_max_iter);
            it = cache.emplace(n_cs, std::make_pair(fp.tau, fp.p_b)).first;
            out.converged = out.converged && fp.converged;
            out.iterations += fp.iterations;
        }
        const auto [tau_n, pb_n] = it->second;
        out.tau += w * tau_n;
        mean_pb += w * pb_n;
        mean_ncs += w * n_cs;
        if (pb_n < 1.0)
            mean_q += w * pb_n / (l * (1.0 - pb_n));
        else
            q_finite = false;
        if (pb_n < 1.0)
            out.e_nbo += w * expected_backoff_slots(mix, pb_n, scenario.mac);
        const double tau_exposure = scenario.busy_model == BusyModel::BinomialSlot
                                        ? tau_n / scenario.mac.big_l_bcn_slots
                                        : tau_n;
        const double ps = p_sync(n_cs, scenario.mac.cw, tau_exposure);
        const double ph = p_hn_population(n_hn, scenario.mac.cw, tau_exposure,
                                          scenario.mac.l_bcn_slots, mix, scenario.mac);
        out.p_sync += w * ps;
        out.p_hn += w * ph;
        out.pdr += w * pdr(tau_n, p_col(ps, ph));
    }
    if (scenario.busy_model == BusyModel::Occupancy && q_finite)
        // Slot-weighted pooling: per-point busy fraction l*q/(1+l*q) pools
        // to l*E[q]/(1+l*E[q]) because window length scales with (1+l*q).
        out.p_b = l * mean_q / (1.0 + l * mean_q);
    else
        out.p_b = mean_pb;
    // weighted sums can land an ulp outside [0,1]
    const auto clamp01 = [](double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); };
    out.tau = clamp01(out.tau);
    out.p_b = clamp01(out.p_b);
    out.p_sync = clamp01(out.p_sync);
    out.p_hn = clamp01(out.p_hn);
    out.pdr = clamp01(out.pdr);
    out.p_exp = 1.0 - out.tau;
    out.p_col = p_col(out.p_sync, out.p_hn);
    out.n_cs = static_cast<int>(std::llround(mean_ncs));
    out.p_ncs_positive = exact_p_ncs_positive(scenario);
    return out;
}

} // namespace dsrcbo
