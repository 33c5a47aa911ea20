#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dsrcbo/analytic.hpp"
#include "dsrcbo/simulator.hpp"

namespace dsrcbo {

struct DeviationRow {
    std::string metric;
    double analytic = 0.0;
    double simulated = 0.0;
    double abs_dev = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct DeviationTable {
    std::vector<DeviationRow> rows;
    bool all_pass() const;
};

struct CompareTolerances {
    double tau = 0.02;
    double p_b = 0.02;
    double pdr = 0.03;
};

/// Per-metric absolute deviations between the two engines. Throws
/// std::invalid_argument when the reports carry different scenario hashes.
DeviationTable compare_report(const AnalyticReport& analytic, const SimReport& sim,
                              const CompareTolerances& tol = {});

void write_deviation_table(const DeviationTable& table, std::ostream& os);

} // namespace dsrcbo
