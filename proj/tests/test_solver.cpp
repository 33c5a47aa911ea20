#include <cmath>
#include <stdexcept>

#include "doctest.h"

#include "dsrcbo/allocator.hpp"
#include "dsrcbo/oracles.hpp"
#include "dsrcbo/solver.hpp"

using namespace dsrcbo;

namespace {
const BranchMix kFlat{0.0, 1.0};
const BranchMix kMixed{0.27332, 0.72668};
}

TEST_CASE("busy probability from the neighborhood") {
    CHECK(pb_given_tau(0.0, 100) == 0.0);
    CHECK(pb_given_tau(0.5, 0) == 0.0);
    CHECK(pb_given_tau(0.01, 100) == doctest::Approx(0.6340).epsilon(1e-3));
    CHECK_THROWS_AS(pb_given_tau(1.5, 10), std::invalid_argument);
    CHECK_THROWS_AS(pb_given_tau(0.5, -1), std::invalid_argument);
}

TEST_CASE("tau limits") {
    MacParams mac;
    for (const auto model : {TauModel::Budget, TauModel::Chain, TauModel::Untruncated}) {
        CHECK(tau_given_pb(0.0, kFlat, mac, model) == doctest::Approx(1.0).epsilon(1e-14));
        // only counter 0 transmits through a fully busy channel
        CHECK(tau_given_pb(1.0, kFlat, mac, model) ==
              doctest::Approx(1.0 / 15.0).epsilon(1e-12));
    }
}

TEST_CASE("budget-model tau equals the exhaustive walk on small instances") {
    for (const int cw : {2, 3, 4}) {
        MacParams mac{cw, 2, 8, 0.5};
        for (const double pb : {0.0, 0.3, 0.7, 1.0})
            for (const auto branch : {AllocBranch::Flat, AllocBranch::Decreasing})
                CHECK(tau_for_branch(branch, pb, mac, TauModel::Budget) ==
                      doctest::Approx(oracle::tau_budget_dp(branch, pb, mac)).epsilon(1e-10));
    }
}

TEST_CASE("budget-model tau on a large instance stays consistent with enumeration") {
    MacParams mac{15, 8, 120, 0.5};
    for (const double pb : {0.2, 0.6})
        CHECK(tau_for_branch(AllocBranch::Flat, pb, mac, TauModel::Budget) ==
              doctest::Approx(oracle::tau_budget_dp(AllocBranch::Flat, pb, mac)).epsilon(1e-10));
}

TEST_CASE("tau is nonincreasing in the busy probability") {
    MacParams mac;
    for (const auto model : {TauModel::Budget, TauModel::Chain, TauModel::Untruncated}) {
        double prev = 2.0;
        for (double pb = 0.0; pb <= 1.0; pb += 0.05) {
            const double t = tau_given_pb(pb, kMixed, mac, model);
            CHECK(t <= prev + 1e-12);
            prev = t;
        }
    }
}

TEST_CASE("the decreasing branch reaches the medium at least as often as flat") {
    for (const int cw : {8, 15, 64}) {
        MacParams mac{cw, 8, 750, 0.5};
        for (const auto model : {TauModel::Budget, TauModel::Chain, TauModel::Untruncated})
            for (double pb = 0.0; pb <= 1.0; pb += 0.1)
                CHECK(tau_for_branch(AllocBranch::Decreasing, pb, mac, model) >=
                      tau_for_branch(AllocBranch::Flat, pb, mac, model) - 1e-12);
    }
}

TEST_CASE("fixed point: no competitors solve in one step") {
    MacParams mac;
    for (const auto busy :
         {BusyModel::BinomialPeriod, BusyModel::BinomialSlot, BusyModel::Occupancy}) {
        const auto r = solve_fixed_point(0, kFlat, mac, TauModel::Budget, busy, 1e-10, 1000);
        CHECK(r.converged);
        CHECK(r.iterations == 1);
        CHECK(r.p_b == 0.0);
        CHECK(r.tau == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("fixed point matches the grid-scan oracle") {
    // the coupled equations solved the way the figures do it
    for (const int cw : {15, 31}) {
        for (const int n : {10, 100, 300}) {
            MacParams mac;
            mac.cw = cw;
            for (const auto pair :
                 {std::pair{TauModel::Untruncated, BusyModel::BinomialSlot},
                  std::pair{TauModel::Budget, BusyModel::BinomialPeriod}}) {
                const auto r =
                    solve_fixed_point(n, kFlat, mac, pair.first, pair.second, 1e-9, 20000);
                CHECK(r.converged);
                CHECK(r.residual <= 1e-9);
                const double scan =
                    oracle::grid_scan_tau(n, kFlat, mac, pair.first, pair.second, 1e-4);
                CHECK(std::fabs(r.tau - scan) <= 2e-9);
            }
        }
    }
}

TEST_CASE("solution tau is nonincreasing in the neighborhood size") {
    MacParams mac;
    for (const auto pair : {std::pair{TauModel::Untruncated, BusyModel::BinomialSlot},
                            std::pair{TauModel::Budget, BusyModel::Occupancy},
                            std::pair{TauModel::Budget, BusyModel::BinomialPeriod}}) {
        double prev = 2.0;
        for (int n = 0; n <= 500; n += 50) {
            const auto r = solve_fixed_point(n, kFlat, mac, pair.first, pair.second, 1e-9, 20000);
            CHECK(r.tau <= prev + 1e-9);
            prev = r.tau;
        }
    }
}

TEST_CASE("an exhausted iteration budget reports the best iterate") {
    MacParams mac;
    mac.cw = 511;
    const auto r =
        solve_fixed_point(300, kFlat, mac, TauModel::Untruncated, BusyModel::BinomialPeriod,
                          1e-12, 2);
    CHECK_FALSE(r.converged);
    CHECK(r.residual > 1e-12);
    CHECK(r.tau >= 0.0);
    CHECK(r.tau <= 1.0);
}

TEST_CASE("expected backoff slots") {
    MacParams mac;
    SUBCASE("no stalls: the mean initial counter") {
        CHECK(expected_backoff_slots(kFlat, 0.0, mac) == doctest::Approx(7.0).epsilon(1e-14));
    }
    SUBCASE("closed form equals direct summation") {
        MacParams small{3, 2, 8, 0.5};
        for (const double pb : {0.3, 0.9})
            for (const auto& mix : {kFlat, BranchMix{0.3, 0.7}})
                CHECK(expected_backoff_slots(mix, pb, small) ==
                      doctest::Approx(oracle::expected_backoff_slots_direct(mix, pb, small))
                          .epsilon(1e-10));
        CHECK(expected_backoff_slots(kFlat, 0.3, mac) ==
              doctest::Approx(oracle::expected_backoff_slots_direct(kFlat, 0.3, mac))
                  .epsilon(1e-10));
    }
    SUBCASE("rejects a saturated channel") {
        CHECK_THROWS_AS(expected_backoff_slots(kFlat, 1.0, mac), std::invalid_argument);
    }
}

TEST_CASE("expiry complement") {
    CHECK(p_exp(1.0) == 0.0);
    CHECK(p_exp(0.0) == 1.0);
    CHECK(p_exp(0.62) == doctest::Approx(0.38).epsilon(1e-14));
    for (double t = 0.0; t <= 1.0; t += 0.1)
        CHECK(p_exp(t) + t == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("category weights reduce to branch weights") {
    RiskModelParams risk;
    std::vector<double> w(11, 0.0);
    w[10] = 0.25; // k=11: decreasing
    w[0] = 0.75;  // k=1: flat
    const auto mix = branch_mix_from_categories(w, risk);
    CHECK(mix.decreasing == doctest::Approx(0.25));
    CHECK(mix.flat == doctest::Approx(0.75));
    std::vector<double> bad(11, 0.0);
    CHECK_THROWS_AS(branch_mix_from_categories(bad, risk), std::invalid_argument);
}
