#include <sstream>

#include "doctest.h"

#include "dsrcbo/accept.hpp"

TEST_CASE("the analytic acceptance suite passes at nominal tolerances") {
    std::ostringstream os;
    const auto report = dsrcbo::accept::run_suite("analytic", 1.0, 1, os);
    if (!report.all_pass())
        MESSAGE(os.str());
    CHECK(report.all_pass());
}

TEST_CASE("zeroed tolerances are caught by the harness") {
    std::ostringstream os;
    const auto report = dsrcbo::accept::run_suite("analytic", 0.0, 1, os);
    CHECK_FALSE(report.all_pass());
}

TEST_CASE("unknown suites list the available ones") {
    std::ostringstream os;
    CHECK_THROWS_WITH_AS(dsrcbo::accept::run_suite("bogus", 1.0, 1, os),
                         doctest::Contains("quick"), std::invalid_argument);
}
