#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dsrcbo::accept {

struct Check {
    std::string criterion; // C1..C7
    std::string name;
    double value = 0.0;
    double limit = 0.0; // threshold after scaling
    bool pass = false;
};

struct Report {
    std::vector<Check> checks;
    bool all_pass() const;
};

std::vector<std::string> available_suites();

/// Runs one acceptance suite, printing a pass/fail line per check.
///   quick    - every criterion; cross-engine cells at 2e4 tagged periods
///   full     - same with 5e4 tagged periods and denser trend grids
///   analytic - closed-form criteria only (no Monte Carlo); fast
/// tol_scale multiplies every tolerance; 0 forces deterministic failures
/// (harness self-test). Unknown suite names throw std::invalid_argument
/// listing the choices.
Report run_suite(const std::string& suite, double tol_scale, int jobs, std::ostream& os);

} // namespace dsrcbo::accept
