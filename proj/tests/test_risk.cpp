#include <cmath>
#include <stdexcept>

#include "doctest.h"

#include "dsrcbo/oracles.hpp"
#include "dsrcbo/risk.hpp"
#include "dsrcbo/rng.hpp"

using namespace dsrcbo;

TEST_CASE("psi density point values") {
    CHECK(psi_pdf(25.0, 5.0) == doctest::Approx(0.009679).epsilon(1e-4));
    // Psi/sigma^2 is chi-square with one degree of freedom.
    const double x = 25.0 / 25.0;
    const double chi1 = std::pow(x, -0.5) * std::exp(-x / 2.0) /
                        (std::sqrt(2.0) * std::tgamma(0.5));
    CHECK(psi_pdf(25.0, 5.0) == doctest::Approx(chi1 / 25.0).epsilon(1e-12));
    CHECK(psi_pdf(-1.0, 5.0) == 0.0);
    CHECK_THROWS_AS(psi_pdf(0.0, 5.0), std::domain_error);
    CHECK_THROWS_AS(psi_pdf(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("psi density integrates to one") {
    CHECK(oracle::psi_pdf_integral(5.0) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(oracle::psi_pdf_integral(2.5) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("one-sigma mass of psi") {
    CHECK(psi_cdf(25.0, 5.0) == doctest::Approx(std::erf(1.0 / std::sqrt(2.0))).epsilon(1e-14));
    CHECK(psi_cdf(25.0, 5.0) == doctest::Approx(0.6827).epsilon(1e-3));
}

TEST_CASE("sampled psi matches the density (KS)") {
    Rng rng(555);
    std::vector<double> psi(1000000);
    for (auto& v : psi) {
        const double x = rng.normal(60.0, 5.0);
        v = (x - 60.0) * (x - 60.0);
    }
    CHECK(oracle::ks_statistic_psi(psi, 5.0) < 0.005);
}

TEST_CASE("categorization bands") {
    RiskModelParams p; // K=11, Q=5
    CHECK(categorize(12.0, p) == 3);
    CHECK(categorize(0.0, p) == 1);
    CHECK(categorize(1e6, p) == 11);
    SUBCASE("band edges: (k-1)Q < psi <= kQ") {
        CHECK(categorize(5.0, p) == 1);
        CHECK(categorize(5.0 + 1e-9, p) == 2);
        CHECK(categorize(10.0, p) == 2);
    }
    SUBCASE("monotone and surjective over [0, K*Q]") {
        int prev = 1;
        bool seen[12] = {};
        for (double psi = 0.0; psi <= 55.0; psi += 0.01) {
            const int k = categorize(psi, p);
            CHECK(k >= prev);
            prev = k;
            seen[k] = true;
        }
        for (int k = 1; k <= 11; ++k)
            CHECK(seen[k]);
    }
}

TEST_CASE("division-point masses") {
    RiskModelParams p; // sigma=5, K=11, Q=5
    const double expect = std::erf(std::sqrt(30.0) / (5.0 * std::sqrt(2.0)));
    CHECK(p_dec(p) == doctest::Approx(expect).epsilon(1e-15));
    CHECK(p_dec(p) == doctest::Approx(0.72668).epsilon(1e-4));
    CHECK(p_flat(p) == doctest::Approx(0.27332).epsilon(1e-4));
    CHECK(p_dec(p) + p_flat(p) == 1.0);

    SUBCASE("limits") {
        RiskModelParams wide = p;
        wide.sigma = 1e6;
        CHECK(p_dec(wide) < 1e-5);
        RiskModelParams many = p;
        many.num_categories = 1000000;
        CHECK(p_dec(many) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("two categories, band width sigma^2") {
        RiskModelParams two = p;
        two.num_categories = 2;
        two.step_size = 25.0;
        CHECK(p_flat(two) == doctest::Approx(1.0 - std::erf(1.0 / std::sqrt(2.0))).epsilon(1e-12));
        CHECK(p_flat(two) == doctest::Approx(0.3173).epsilon(1e-3));
    }
}

TEST_CASE("division mass matches a Monte Carlo of (X - mu)^2") {
    RiskModelParams p;
    Rng rng(808);
    const int n = 1000000;
    int below = 0;
    const double edge = p.step_size * half_point(p.num_categories);
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal(60.0, 5.0);
        if ((x - 60.0) * (x - 60.0) <= edge)
            ++below;
    }
    CHECK(static_cast<double>(below) / n == doctest::Approx(p_dec(p)).epsilon(0.0015));
}

TEST_CASE("empirical category split matches p_dec") {
    RiskModelParams p;
    Rng rng(909);
    const int n = 1000000;
    int low = 0;
    const int hp = half_point(p.num_categories);
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal(60.0, 5.0);
        if (categorize((x - 60.0) * (x - 60.0), p) <= hp)
            ++low;
    }
    CHECK(std::fabs(static_cast<double>(low) / n - p_dec(p)) < 1e-2);
}

TEST_CASE("branch assignment per division rule") {
    RiskModelParams p; // K=11 -> split at 6
    SUBCASE("high-risk decreasing (default)") {
        CHECK(branch_for_category(7, p) == AllocBranch::Decreasing);
        CHECK(branch_for_category(6, p) == AllocBranch::Flat); // middle folds flat
        CHECK(branch_for_category(1, p) == AllocBranch::Flat);
        const auto m = allocation_masses(p);
        CHECK(m.decreasing == doctest::Approx(p_flat(p)).epsilon(1e-15));
        CHECK(m.decreasing + m.flat == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("printed-label variant") {
        p.division_rule = DivisionRule::LowRiskDecreasing;
        CHECK(branch_for_category(6, p) == AllocBranch::Decreasing);
        CHECK(branch_for_category(7, p) == AllocBranch::Flat);
        const auto m = allocation_masses(p);
        CHECK(m.decreasing == doctest::Approx(p_dec(p)).epsilon(1e-15));
    }
}

TEST_CASE("category masses partition the distribution") {
    RiskModelParams p;
    const auto mass = category_masses(p);
    REQUIRE(mass.size() == 11);
    double sum = 0.0;
    for (double m : mass) {
        CHECK(m >= 0.0);
        sum += m;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("reference erf agrees with std::erf") {
    for (const double x : {0.1, 0.5, 0.7745966692414834, 1.5, 3.0, 4.5}) {
        CHECK(oracle::erf_reference(x) == doctest::Approx(std::erf(x)).epsilon(1e-14));
    }
}
