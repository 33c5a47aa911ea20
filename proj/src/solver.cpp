#include "dsrcbo/solver.hpp"

#include <cmath>
#include <stdexcept>

#include "dsrcbo/allocator.hpp"

namespace dsrcbo {

namespace detail {

namespace {
double beta_continued_fraction(double a, double b, double x) {
    // Lentz's algorithm.
    constexpr int kMaxIter = 400;
    constexpr double kEps = 3e-16;
    constexpr double kFpMin = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kFpMin)
        d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin)
            d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin)
            c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin)
            d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin)
            c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps)
            break;
    }
    return h;
}
} // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (x <= 0.0)
        return 0.0;
    if (x >= 1.0)
        return 1.0;
    const double ln_front =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double stall_budget_cdf(int c, int max_busy, double p_busy) {
    if (c <= 0)
        return 1.0;
    if (max_busy < 0)
        return 0.0;
    if (p_busy <= 0.0)
        return 1.0;
    if (p_busy >= 1.0)
        return 0.0;
    // #busy slots before the c-th idle ~ NegBinomial; its CDF is the
    // regularized incomplete beta at the idle probability.
    return regularized_incomplete_beta(static_cast<double>(c), static_cast<double>(max_busy) + 1.0,
                                       1.0 - p_busy);
}

} // namespace detail

BranchMix branch_mix_from_categories(const std::vector<double>& category_weights,
                                     const RiskModelParams& risk) {
    risk.validate();
    if (category_weights.size() != static_cast<std::size_t>(risk.num_categories))
        throw std::invalid_argument("category weights must have K entries");
    double total = 0.0;
    BranchMix mix{0.0, 0.0};
    for (int k = 1; k <= risk.num_categories; ++k) {
        const double w = category_weights[static_cast<std::size_t>(k - 1)];
        if (w < 0.0)
            throw std::invalid_argument("category weights must be nonnegative");
        total += w;
        if (branch_for_category(k, risk) == AllocBranch::Decreasing)
            mix.decreasing += w;
        else
            mix.flat += w;
    }
    if (std::fabs(total - 1.0) > 1e-9)
        throw std::invalid_argument("category weights must sum to 1");
    return mix;
}

double pb_given_tau(double tau, int n_cs) {
    if (!(tau >= 0.0) || !(tau <= 1.0))
        throw std::invalid_argument("tau must be in [0, 1]");
    if (n_cs < 0)
        throw std::invalid_argument("n_cs must be nonnegative");
    if (n_cs == 0 || tau == 0.0)
        return 0.0;
    return -std::expm1(static_cast<double>(n_cs) * std::log1p(-tau));
}

double tau_for_branch(AllocBranch branch, double p_b, const MacParams& mac, TauModel model) {
    mac.validate();
    if (!(p_b >= 0.0) || !(p_b <= 1.0))
        throw std::invalid_argument("p_b must be in [0, 1]");
    const auto row = p_ini_row(branch, mac);
    double tau = row[0]; // counter 0 transmits outright
    switch (model) {
    case TauModel::Untruncated: {
        double pow_idle = 1.0;
        for (int c = 1; c < mac.cw; ++c) {
            pow_idle *= 1.0 - p_b;
            tau += row[static_cast<std::size_t>(c)] * pow_idle;
        }
        break;
    }
    case TauModel::Chain: {
        // Absorption into B_0 of the transition matrix: each level c allows
        // up to delta_c consecutive busy slots before expiry.
        double prefix = 1.0;
        for (int c = 1; c < mac.cw; ++c) {
            prefix *= 1.0 - std::pow(p_b, static_cast<double>(delta_c(c, mac)) + 1.0);
            tau += row[static_cast<std::size_t>(c)] * prefix;
        }
        break;
    }
    case TauModel::Budget: {
        // A path from initial counter c expires once its total stall count
        // exceeds delta_c.
        for (int c = 1; c < mac.cw; ++c)
            tau += row[static_cast<std::size_t>(c)] *
                   detail::stall_budget_cdf(c, delta_c(c, mac), p_b);
        break;
    }
    }
    return tau < 0.0 ? 0.0 : (tau > 1.0 ? 1.0 : tau);
}

double tau_given_pb(double p_b, const BranchMix& mix, const MacParams& mac, TauModel model) {
    double tau = 0.0;
    if (mix.decreasing > 0.0)
        tau += mix.decreasing * tau_for_branch(AllocBranch::Decreasing, p_b, mac, model);
    if (mix.flat > 0.0)
        tau += mix.flat * tau_for_branch(AllocBranch::Flat, p_b, mac, model);
    return tau;
}

double busy_from_tau(double tau, int n_cs, const BranchMix& mix, const MacParams& mac,
                     BusyModel model) {
    mac.validate();
    if (n_cs < 0)
        throw std::invalid_argument("n_cs must be nonnegative");
    if (n_cs == 0)
        return 0.0;
    switch (model) {
    case BusyModel::BinomialPeriod:
        return pb_given_tau(tau, n_cs);
    case BusyModel::BinomialSlot:
        return pb_given_tau(tau / mac.big_l_bcn_slots, n_cs);
    case BusyModel::Occupancy:
        break;
    }
    // Start-tick occupancy: counters decrement on shared idle ticks, and a
    // tick value held by some neighbor is followed by an l_bcn-slot run.
    // Two regimes bound the busy mass a counting-down node observes:
    //  - ordered packing (sub-occupied ticks): one merged run per occupied
    //    tick, l*q, minus the overlap of runs from nearby ticks whose
    //    owners cannot sense each other and so do not defer (for two
    //    uniform points in the sensing disk that happens w.p.
    //    3*sqrt(3)/(4*pi));
    //  - coverage (multiply-occupied ticks): same-tick clusters drift apart
    //    and emit staggered per-node runs, a Poisson coverage process.
    // Blend by the expected tick multiplicity n*p(t).
    const auto p_start = p_ini_mixture(mix.decreasing, mix.flat, mac);
    const double l = static_cast<double>(mac.l_bcn_slots);
    const double kappa = 3.0 * std::sqrt(3.0) / (4.0 * M_PI);
    std::vector<double> q(static_cast<std::size_t>(mac.cw));
    double q_mean = 0.0;
    for (int t = 0; t < mac.cw; ++t) {
        q[static_cast<std::size_t>(t)] = -std::expm1(
            static_cast<double>(n_cs) * std::log1p(-p_start[static_cast<std::size_t>(t)]));
        q_mean += q[static_cast<std::size_t>(t)];
    }
    q_mean /= static_cast<double>(mac.cw);
    const double spacing = 1.0 + l * q_mean; // slots per tick interval

    const auto coverage_busy = [l](double run_mass) {
        // x = (1+x) * (1 - exp(-run_mass/(1+x))), runs scattered over the
        // stretched tick interval.
        double x = run_mass < l ? run_mass : l;
        for (int i = 0; i < 64; ++i)
            x = (1.0 + x) * -std::expm1(-run_mass / (1.0 + x));
        return x;
    };

    double busy_sum = 0.0;
    double slot_sum = 0.0;
    double busy_prefix = 0.0;
    for (int c = 0; c < mac.cw; ++c) {
        busy_sum += p_start[static_cast<std::size_t>(c)] * busy_prefix;
        slot_sum += p_start[static_cast<std::size_t>(c)] * (c + busy_prefix);
        double ordered = l * q[static_cast<std::size_t>(c)];
        for (int d = 1; d <= mac.l_bcn_slots && c + d < mac.cw; ++d) {
            const double reach = l - d * spacing;
            if (reach <= 0.0)
                break;
            ordered -= kappa * q[static_cast<std::size_t>(c)] *
                       q[static_cast<std::size_t>(c + d)] * reach;
        }
        if (ordered < 0.0)
            ordered = 0.0;
        const double multiplicity =
            static_cast<double>(n_cs) * p_start[static_cast<std::size_t>(c)];
        double tick_busy = ordered;
        if (multiplicity > 1.0) {
            const double w = -std::expm1(-(multiplicity - 1.0));
            tick_busy = (1.0 - w) * ordered + w * coverage_busy(l * multiplicity);
        }
        busy_prefix += tick_busy;
    }
    if (slot_sum <= 0.0) {
        const double q0 = q[0];
        return l * q0 / (1.0 + l * q0);
    }
    return busy_sum / slot_sum;
}

FixedPointResult solve_fixed_point(int n_cs, const BranchMix& mix, const MacParams& mac,
                                   TauModel tau_model, BusyModel busy_model, double tol,
                                   int max_iter) {
    mac.validate();
    if (!(tol > 0.0))
        throw std::invalid_argument("tol must be > 0");
    if (max_iter < 1)
        throw std::invalid_argument("max_iter must be >= 1");

    const auto step = [&](double t) { return busy_from_tau(t, n_cs, mix, mac, busy_model); };
    const auto compose = [&](double t) { return tau_given_pb(step(t), mix, mac, tau_model); };

    FixedPointResult res;
    // The busy probability is tau-independent when there are no competitors
    // or under the occupancy model; the solution is then direct.
    if (n_cs == 0 || busy_model == BusyModel::Occupancy) {
        res.p_b = step(0.0);
        res.tau = tau_given_pb(res.p_b, mix, mac, tau_model);
        res.iterations = 1;
        res.residual = 0.0;
        res.converged = true;
        return res;
    }

    double tau = 1.0 / mac.cw;
    double best_tau = tau;
    double best_res = std::fabs(tau - compose(tau));
    int it = 0;
    double prev_window = best_res;
    bool oscillating = false;
    for (; it < max_iter; ++it) {
        const double next = compose(tau);
        const double resid = std::fabs(tau - next);
        if (resid < best_res) {
            best_res = resid;
            best_tau = tau;
        }
        if (resid <= tol)
            break;
        tau += 0.5 * (next - tau);
        if ((it + 1) % 16 == 0) {
            if (best_res > 0.9 * prev_window) {
                oscillating = true;
                ++it;
                break;
            }
            prev_window = best_res;
        }
    }

    if (oscillating || best_res > tol) {
        // g(tau) = tau - compose(tau) is <= 0 at 0 and >= 0 at 1.
        double lo = 0.0, hi = 1.0;
        double g_lo = lo - compose(lo);
        for (int b = 0; b < 200 && it < max_iter; ++b, ++it) {
            const double mid = 0.5 * (lo + hi);
            const double g_mid = mid - compose(mid);
            if (std::fabs(g_mid) < best_res) {
                best_res = std::fabs(g_mid);
                best_tau = mid;
            }
            if (best_res <= tol * 0.5 || hi - lo < tol * 0.25)
                break;
            if ((g_mid <= 0.0) == (g_lo <= 0.0)) {
                lo = mid;
                g_lo = g_mid;
            } else {
                hi = mid;
            }
        }
    }

    res.tau = best_tau;
    res.p_b = step(best_tau);
    res.iterations = it + 1;
    res.residual = std::fabs(best_tau - tau_given_pb(res.p_b, mix, mac, tau_model));
    res.converged = res.residual <= tol;
    return res;
}

double expected_backoff_slots(const BranchMix& mix, double p_b, const MacParams& mac) {
    mac.validate();
    if (!(p_b >= 0.0) || !(p_b < 1.0))
        throw std::invalid_argument("p_b must be in [0, 1)");
    const auto branch_value = [&](AllocBranch branch) {
        const auto row = p_ini_row(branch, mac);
        double total = 0.0;
        for (int c = 0; c < mac.cw; ++c) {
            const double depth = static_cast<double>(delta_c(c, mac));
            double s0 = 1.0, s1 = 0.0;
            if (p_b > 0.0) {
                const double pd1 = std::pow(p_b, depth + 1.0);
                s0 = (1.0 - pd1) / (1.0 - p_b);
                s1 = p_b * (1.0 - (depth + 1.0) * std::pow(p_b, depth) + depth * pd1) /
                     ((1.0 - p_b) * (1.0 - p_b));
            }
            total += row[static_cast<std::size_t>(c)] * (c * s0 + s1);
        }
        return total;
    };
    double out = 0.0;
    if (mix.decreasing > 0.0)
        out += mix.decreasing * branch_value(AllocBranch::Decreasing);
    if (mix.flat > 0.0)
        out += mix.flat * branch_value(AllocBranch::Flat);
    return out;
}

double p_exp(double tau) {
    if (!(tau >= 0.0) || !(tau <= 1.0))
        throw std::invalid_argument("tau must be in [0, 1]");
    return 1.0 - tau;
}

} // namespace dsrcbo
