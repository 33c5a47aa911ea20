#include "dsrcbo/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "dsrcbo/allocator.hpp"
#include "dsrcbo/risk.hpp"

namespace dsrcbo::oracle {

namespace {

double branch_weighted(const BranchMix& mix, double dec_value, double flat_value) {
    return mix.decreasing * dec_value + mix.flat * flat_value;
}

} // namespace

double tau_budget_dp(AllocBranch branch, double p_b, const MacParams& mac) {
    mac.validate();
    const auto row = p_ini_row(branch, mac);
    double tau = row[0];
    for (int c0 = 1; c0 < mac.cw; ++c0) {
        const int budget = delta_c(c0, mac);
        // f[r][d]: reach 0 remaining decrements r with d stalls used so far.
        std::vector<std::vector<double>> f(
            static_cast<std::size_t>(c0 + 1),
            std::vector<double>(static_cast<std::size_t>(budget + 2), 0.0));
        for (int d = 0; d <= budget + 1; ++d)
            f[0][static_cast<std::size_t>(d)] = 1.0;
        for (int r = 1; r <= c0; ++r)
            for (int d = budget; d >= 0; --d)
                f[static_cast<std::size_t>(r)][static_cast<std::size_t>(d)] =
                    (1.0 - p_b) * f[static_cast<std::size_t>(r - 1)][static_cast<std::size_t>(d)] +
                    (d < budget
                         ? p_b * f[static_cast<std::size_t>(r)][static_cast<std::size_t>(d + 1)]
                         : 0.0);
        tau += row[static_cast<std::size_t>(c0)] * f[static_cast<std::size_t>(c0)][0];
    }
    return tau;
}

double tau_chain_absorption(int k, double p_b, const MacParams& mac,
                            const RiskModelParams& risk) {
    const BackoffChain chain(k, p_b, mac, risk);
    const int n = chain.num_states();
    std::vector<double> mass(static_cast<std::size_t>(n), 0.0);
    // Start from the counter draw; B_0 becomes absorbing for first hitting.
    for (const auto& [j, p] : chain.row(0))
        mass[static_cast<std::size_t>(j)] += p;
    double absorbed_b0 = mass[0];
    mass[0] = 0.0;
    double absorbed_exp = mass[static_cast<std::size_t>(chain.exp_index())];
    mass[static_cast<std::size_t>(chain.exp_index())] = 0.0;

    std::vector<double> next(static_cast<std::size_t>(n), 0.0);
    for (int step = 0; step < 16 * mac.big_l_bcn_slots; ++step) {
        double transient = 0.0;
        for (double m : mass)
            transient += m;
        if (transient < 1e-16)
            break;
        std::fill(next.begin(), next.end(), 0.0);
        for (int i = 1; i < n; ++i) {
            const double m = mass[static_cast<std::size_t>(i)];
            if (m == 0.0)
                continue;
            for (const auto& [j, p] : chain.row(i))
                next[static_cast<std::size_t>(j)] += m * p;
        }
        absorbed_b0 += next[0];
        next[0] = 0.0;
        absorbed_exp += next[static_cast<std::size_t>(chain.exp_index())];
        next[static_cast<std::size_t>(chain.exp_index())] = 0.0;
        mass.swap(next);
    }
    (void)absorbed_exp;
    return absorbed_b0;
}

double expected_backoff_slots_direct(const BranchMix& mix, double p_b, const MacParams& mac) {
    mac.validate();
    const auto branch_value = [&](AllocBranch branch) {
        const auto row = p_ini_row(branch, mac);
        double total = 0.0;
        for (int c = 0; c < mac.cw; ++c) {
            const int depth = delta_c(c, mac);
            double powd = 1.0;
            for (int d = 0; d <= depth; ++d) {
                total += row[static_cast<std::size_t>(c)] * powd * (c + d);
                powd *= p_b;
                if (powd == 0.0)
                    break;
            }
        }
        return total;
    };
    return branch_weighted(mix, branch_value(AllocBranch::Decreasing),
                           branch_value(AllocBranch::Flat));
}

double p_sync_enumeration(int n_cs, int cw, double tau) {
    if (n_cs < 0 || cw < 1)
        throw std::invalid_argument("bad enumeration parameters");
    double collision = 0.0;
    for (int mask = 0; mask < (1 << n_cs); ++mask) {
        const int k = __builtin_popcount(static_cast<unsigned>(mask));
        const double w_tx =
            std::pow(tau, k) * std::pow(1.0 - tau, n_cs - k);
        if (w_tx == 0.0)
            continue;
        // enumerate counter tuples of the k transmitters
        std::vector<int> counters(static_cast<std::size_t>(k), 0);
        double p_coll = 0.0;
        const double w_each = std::pow(1.0 / cw, k);
        for (;;) {
            bool dup = false;
            for (std::size_t a = 0; a < counters.size() && !dup; ++a)
                for (std::size_t b = a + 1; b < counters.size() && !dup; ++b)
                    dup = counters[a] == counters[b];
            if (dup)
                p_coll += w_each;
            int pos = k - 1;
            while (pos >= 0 && ++counters[static_cast<std::size_t>(pos)] == cw) {
                counters[static_cast<std::size_t>(pos)] = 0;
                --pos;
            }
            if (pos < 0)
                break;
        }
        if (k == 0)
            p_coll = 0.0;
        collision += w_tx * p_coll;
    }
    return collision;
}

int s_no_hn_bruteforce(int c, int cw, int l_bcn_slots) {
    int count = 0;
    for (int b = 0; b < cw; ++b) {
        const bool overlap = b < c + l_bcn_slots && c < b + l_bcn_slots;
        if (!overlap)
            ++count;
    }
    return count;
}

double p_hn_enumeration(int n_cs, int cw, double tau, int l_bcn_slots, const BranchMix& mix,
                        const MacParams& mac) {
    MacParams m = mac;
    m.cw = cw;
    m.l_bcn_slots = l_bcn_slots;
    const auto tagged_pmf = p_ini_mixture(mix.decreasing, mix.flat, m);
    const int n_hn = 3 * n_cs;
    double p = 0.0;
    for (int c = 0; c < cw; ++c) {
        // recursively enumerate each hidden node: idle, or transmit at b
        std::vector<int> state(static_cast<std::size_t>(n_hn), -1); // -1 idle, else b
        double p_hn_given_c = 0.0;
        const auto weight_of = [&](int s) { return s < 0 ? 1.0 - tau : tau / cw; };
        for (;;) {
            double w = 1.0;
            bool overlap = false;
            int n_tx = 0;
            for (int j = 0; j < n_hn; ++j) {
                const int s = state[static_cast<std::size_t>(j)];
                w *= weight_of(s);
                if (s >= 0) {
                    ++n_tx;
                    if (s < c + l_bcn_slots && c < s + l_bcn_slots)
                        overlap = true;
                }
            }
            // The closed form caps the transmitter count: above CW the term
            // counts as a certain collision.
            if (overlap || n_tx > cw)
                p_hn_given_c += w;
            int pos = n_hn - 1;
            while (pos >= 0 && ++state[static_cast<std::size_t>(pos)] == cw) {
                state[static_cast<std::size_t>(pos)] = -1;
                --pos;
            }
            if (pos < 0)
                break;
        }
        p += tagged_pmf[static_cast<std::size_t>(c)] * p_hn_given_c;
    }
    return p;
}

namespace {

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fb, double fm, double whole, double tol, int depth);

double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fb,
               double* fm_out) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    *fm_out = fm;
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fb, double fm, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    double flm, frm;
    const double left = simpson(f, a, m, fa, fm, &flm);
    const double right = simpson(f, m, b, fm, fb, &frm);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, fm, flm, left, tol / 2.0, depth - 1) +
           adaptive_simpson(f, m, b, fm, fb, frm, right, tol / 2.0, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    const double fa = f(a);
    const double fb = f(b);
    double fm;
    const double whole = simpson(f, a, b, fa, fb, &fm);
    return adaptive_simpson(f, a, b, fa, fb, fm, whole, tol, 40);
}

} // namespace

double psi_pdf_integral(double sigma, double tol) {
    // psi = u^2 turns the psi^(-1/2) endpoint singularity into a smooth
    // integrand 2u * f(u^2).
    const auto integrand = [sigma](double u) { return 2.0 * u * psi_pdf(u * u, sigma); };
    const double lo = 1e-150; // psi_pdf rejects exactly 0
    const double hi = 12.0 * sigma;
    return integrate(integrand, lo, hi, tol);
}

double ks_statistic_psi(std::vector<double> samples, double sigma) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double cdf = psi_cdf(samples[i], sigma);
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        d = std::max(d, std::max(cdf - lo, hi - cdf));
    }
    return d;
}

double erf_reference(double x) {
    const long double xl = x;
    if (x < 0.0)
        return -erf_reference(-x);
    if (xl <= 4.0L) {
        // Taylor series in long double; terms fall below 1e-25 well before
        // the cap for x <= 4.
        const long double two_over_sqrt_pi = 1.1283791670955125738961589031215L;
        long double term = xl;
        long double sum = xl;
        for (int n = 1; n < 200; ++n) {
            term *= -xl * xl / n;
            const long double add = term / (2 * n + 1);
            sum += add;
            if (std::fabs(static_cast<double>(add)) < 1e-25)
                break;
        }
        return static_cast<double>(two_over_sqrt_pi * sum);
    }
    // erfc continued fraction for large x:
    // erfc(x) = exp(-x^2)/sqrt(pi) / (x + K), K = (1/2)/(x + 1/(x + (3/2)/(x + ...))).
    const long double sqrt_pi = 1.7724538509055160272981674833411L;
    long double cf = 0.0L;
    for (int n = 60; n >= 1; --n)
        cf = (n / 2.0L) / (xl + cf);
    const long double erfc = std::exp(-xl * xl) / ((xl + cf) * sqrt_pi);
    return static_cast<double>(1.0L - erfc);
}

namespace {

double gamma_q_upper(double a, double x) {
    // Regularized upper incomplete gamma via series / continued fraction.
    if (x < 0.0 || a <= 0.0)
        throw std::invalid_argument("bad gamma arguments");
    if (x == 0.0)
        return 1.0;
    const double lg = std::lgamma(a);
    if (x < a + 1.0) {
        double term = 1.0 / a;
        double sum = term;
        for (int n = 1; n < 500; ++n) {
            term *= x / (a + n);
            sum += term;
            if (std::fabs(term) < std::fabs(sum) * 1e-16)
                break;
        }
        const double p = sum * std::exp(-x + a * std::log(x) - lg);
        return 1.0 - p;
    }
    double b = x + 1.0 - a;
    double c = 1e300;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < 1e-300)
            d = 1e-300;
        c = b + an / c;
        if (std::fabs(c) < 1e-300)
            c = 1e-300;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16)
            break;
    }
    return std::exp(-x + a * std::log(x) - lg) * h;
}

} // namespace

double chi_square_geometric_pvalue(const std::map<int, long>& histogram, double p,
                                   int max_individual_nu) {
    if (!(p > 0.0) || !(p <= 1.0))
        throw std::invalid_argument("p must be in (0, 1]");
    long n = 0;
    for (const auto& [nu, count] : histogram)
        n += count;
    if (n == 0)
        throw std::invalid_argument("empty histogram");

    std::vector<double> expected;
    std::vector<double> observed;
    double tail_expected = static_cast<double>(n);
    double tail_observed = static_cast<double>(n);
    for (int nu = 1; nu <= max_individual_nu; ++nu) {
        const double e = n * std::pow(1.0 - p, nu - 1) * p;
        long o = 0;
        const auto it = histogram.find(nu);
        if (it != histogram.end())
            o = it->second;
        expected.push_back(e);
        observed.push_back(static_cast<double>(o));
        tail_expected -= e;
        tail_observed -= static_cast<double>(o);
    }
    expected.push_back(std::max(tail_expected, 0.0));
    observed.push_back(std::max(tail_observed, 0.0));

    // Merge thin bins (expected < 5) into the tail, from the right.
    while (expected.size() > 2) {
        const std::size_t last = expected.size() - 1;
        if (expected[last] >= 5.0 && expected[last - 1] >= 5.0)
            break;
        expected[last - 1] += expected[last];
        observed[last - 1] += observed[last];
        expected.pop_back();
        observed.pop_back();
    }
    if (expected.size() < 2)
        return 1.0;
    double chi2 = 0.0;
    for (std::size_t i = 0; i < expected.size(); ++i)
        if (expected[i] > 0.0)
            chi2 += (observed[i] - expected[i]) * (observed[i] - expected[i]) / expected[i];
    const double dof = static_cast<double>(expected.size()) - 2.0; // p was estimated
    if (dof < 1.0)
        return 1.0;
    return gamma_q_upper(dof / 2.0, chi2 / 2.0);
}

double grid_scan_tau(int n_cs, const BranchMix& mix, const MacParams& mac, TauModel tau_model,
                     BusyModel busy_model, double step) {
    const auto g = [&](double t) {
        return t - tau_given_pb(busy_from_tau(t, n_cs, mix, mac, busy_model), mix, mac, tau_model);
    };
    double prev_t = 0.0;
    double prev_g = g(0.0);
    if (prev_g == 0.0)
        return 0.0;
    for (double t = step; t <= 1.0 + step / 2; t += step) {
        const double tt = t > 1.0 ? 1.0 : t;
        const double gt = g(tt);
        if ((gt >= 0.0) != (prev_g >= 0.0)) {
            double lo = prev_t, hi = tt;
            for (int i = 0; i < 80; ++i) {
                const double mid = 0.5 * (lo + hi);
                if ((g(mid) >= 0.0) == (prev_g >= 0.0))
                    lo = mid;
                else
                    hi = mid;
            }
            return 0.5 * (lo + hi);
        }
        prev_t = tt;
        prev_g = gt;
    }
    return prev_t;
}

} // namespace dsrcbo::oracle
