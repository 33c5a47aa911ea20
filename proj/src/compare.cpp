#include "dsrcbo/compare.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace dsrcbo {

bool DeviationTable::all_pass() const {
    for (const auto& r : rows)
        if (!r.pass)
            return false;
    return true;
}

DeviationTable compare_report(const AnalyticReport& analytic, const SimReport& sim,
                              const CompareTolerances& tol) {
    if (analytic.scenario_hash != sim.scenario_hash)
        throw std::invalid_argument("reports come from different scenarios");
    DeviationTable table;
    const auto add = [&table](const char* name, double a, double s, double t) {
        DeviationRow row;
        row.metric = name;
        row.analytic = a;
        row.simulated = s;
        row.abs_dev = std::fabs(a - s);
        row.tolerance = t;
        row.pass = row.abs_dev <= t;
        table.rows.push_back(row);
    };
    add("tau", analytic.tau, sim.tau_hat, tol.tau);
    add("p_b", analytic.p_b, sim.p_b_hat, tol.p_b);
    add("p_exp", analytic.p_exp, sim.p_exp_hat, tol.tau);
    add("pdr", analytic.pdr, sim.pdr_hat, tol.pdr);
    return table;
}

void write_deviation_table(const DeviationTable& table, std::ostream& os) {
    os << "metric,analytic,simulated,abs_dev,tolerance,status\n";
    char buf[160];
    for (const auto& r : table.rows) {
        std::snprintf(buf, sizeof buf, "%s,%.10g,%.10g,%.10g,%.10g,%s", r.metric.c_str(),
                      r.analytic, r.simulated, r.abs_dev, r.tolerance,
                      r.pass ? "pass" : "fail");
        os << buf << '\n';
    }
}

} // namespace dsrcbo
