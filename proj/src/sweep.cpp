#include "dsrcbo/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <thread>

#include "dsrcbo/analytic.hpp"
#include "dsrcbo/simulator.hpp"

namespace dsrcbo {

Scenario scenario_at(const Scenario& base, SweepVariable variable, double value) {
    Scenario sc = base;
    switch (variable) {
    case SweepVariable::NCs:
        sc.analytic_n_cs = static_cast<int>(std::llround(value));
        // Keep the field consistent for the simulating engine.
        sc.density_per_m2 = value > 0.0
                                ? value / (M_PI * sc.r_cs_m * sc.r_cs_m)
                                : 1e-12;
        break;
    case SweepVariable::Cw:
        sc.mac.cw = static_cast<int>(std::llround(value));
        break;
    case SweepVariable::Sigma:
        sc.risk.sigma = value;
        sc.std_speed = value;
        break;
    case SweepVariable::Density:
        sc.density_per_m2 = value;
        sc.analytic_n_cs = -1;
        break;
    }
    return sc;
}

namespace {

struct Task {
    double var;
    AllocatorMode mode;
    bool simulate;
};

SweepRow analytic_row(const Scenario& sc, double var) {
    const auto rep = analyze_point(sc);
    SweepRow row;
    row.var = var;
    row.allocator = sc.allocator_mode == AllocatorMode::Proposed ? "proposed" : "flat";
    row.engine = "analytic";
    row.tau = rep.tau;
    row.p_b = rep.p_b;
    row.p_exp = rep.p_exp;
    row.p_sync = rep.p_sync;
    row.p_hn = rep.p_hn;
    row.p_col = rep.p_col;
    row.pdr = rep.pdr;
    row.e_nbo = rep.e_nbo;
    row.status = rep.converged ? "ok" : "no_converge";
    row.irt = rep.irt;
    return row;
}

SweepRow sim_row(const Scenario& sc, double var) {
    const auto rep = run_simulation(sc, 1);
    SweepRow row;
    row.var = var;
    row.allocator = sc.allocator_mode == AllocatorMode::Proposed ? "proposed" : "flat";
    row.engine = "sim";
    row.tau = rep.tau_hat;
    row.p_b = rep.p_b_hat;
    row.p_exp = rep.p_exp_hat;
    // Collision rates are conditional on transmission; the four-way counts
    // classify joint sync+hidden periods as sync, so the hidden marginal
    // adds the joint tally back.
    const double tx = static_cast<double>(rep.counts.suc + rep.counts.sync + rep.counts.hn);
    if (tx > 0.0) {
        row.p_sync = static_cast<double>(rep.counts.sync) / tx;
        row.p_hn = static_cast<double>(rep.counts.hn + rep.joint_sync_hn) / tx;
        row.p_col = static_cast<double>(rep.counts.sync + rep.counts.hn) / tx;
    }
    row.pdr = rep.pdr_hat;
    row.e_nbo = rep.e_nbo_hat;
    long gaps = 0;
    int max_nu = 0;
    for (const auto& [nu, count] : rep.irt_histogram) {
        gaps += count;
        max_nu = nu > max_nu ? nu : max_nu;
    }
    if (gaps > 0) {
        const int cap = max_nu < sc.irt_max_nu ? max_nu : sc.irt_max_nu;
        row.irt.assign(static_cast<std::size_t>(cap), 0.0);
        for (const auto& [nu, count] : rep.irt_histogram)
            if (nu <= cap)
                row.irt[static_cast<std::size_t>(nu - 1)] =
                    static_cast<double>(count) / static_cast<double>(gaps);
    }
    return row;
}

} // namespace

SweepResult run_sweep(const Scenario& base, const SweepSpec& spec, int jobs) {
    base.validate();
    spec.validate();
    std::vector<Task> tasks;
    for (double v : spec.values) {
        std::vector<AllocatorMode> modes;
        if (spec.run_proposed)
            modes.push_back(AllocatorMode::Proposed);
        if (spec.run_flat)
            modes.push_back(AllocatorMode::FlatOnly);
        for (auto m : modes) {
            if (spec.engines != SweepEngines::Simulate)
                tasks.push_back({v, m, false});
            if (spec.engines != SweepEngines::Analytic)
                tasks.push_back({v, m, true});
        }
    }

    std::vector<SweepRow> rows(tasks.size());
    const auto run_task = [&](std::size_t idx) {
        const Task& t = tasks[idx];
        Scenario sc = scenario_at(base, spec.variable, t.var);
        sc.allocator_mode = t.mode;
        rows[idx] = t.simulate ? sim_row(sc, t.var) : analytic_row(sc, t.var);
    };

    if (jobs <= 0) {
        const unsigned hc = std::thread::hardware_concurrency();
        jobs = hc > 0 ? static_cast<int>(hc) : 1;
    }
    if (jobs == 1 || tasks.size() <= 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i)
            run_task(i);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= tasks.size())
                    return;
                run_task(i);
            }
        };
        std::vector<std::thread> pool;
        const std::size_t nthreads =
            std::min<std::size_t>(static_cast<std::size_t>(jobs), tasks.size());
        for (std::size_t i = 0; i < nthreads; ++i)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }

    SweepResult out;
    out.rows = std::move(rows); // task order is already (var, allocator, engine)
    return out;
}

void write_sweep_csv(const SweepResult& result, std::ostream& os) {
    os << "var,allocator,engine,tau,p_b,p_exp,p_sync,p_hn,p_col,pdr,e_nbo,status\n";
    char buf[320];
    for (const auto& r : result.rows) {
        std::snprintf(buf, sizeof buf,
                      "%.10g,%s,%s,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%s", r.var,
                      r.allocator.c_str(), r.engine.c_str(), r.tau, r.p_b, r.p_exp, r.p_sync,
                      r.p_hn, r.p_col, r.pdr, r.e_nbo, r.status.c_str());
        os << buf << '\n';
    }
}

void write_irt_csv(const SweepResult& result, std::ostream& os) {
    os << "var,allocator,engine,nu,pmf_or_freq\n";
    char buf[160];
    for (const auto& r : result.rows)
        for (std::size_t i = 0; i < r.irt.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.10g,%s,%s,%zu,%.10g", r.var, r.allocator.c_str(),
                          r.engine.c_str(), i + 1, r.irt[i]);
            os << buf << '\n';
        }
}

} // namespace dsrcbo
