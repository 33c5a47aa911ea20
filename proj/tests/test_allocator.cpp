#include <cmath>
#include <stdexcept>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "dsrcbo/allocator.hpp"
#include "dsrcbo/oracles.hpp"
#include "dsrcbo/risk.hpp"

using namespace dsrcbo;

namespace {
const RiskModelParams kRisk{}; // K=11, split at 6: k=11 decreasing, k=1 flat
}

TEST_CASE("initial-counter distribution") {
    MacParams mac; // cw=15, r=0.5
    SUBCASE("decreasing branch is the normalized geometric") {
        CHECK(p_ini(0, 11, mac, kRisk) ==
              doctest::Approx(0.5 / (1.0 - std::pow(2.0, -15.0))).epsilon(1e-15));
        CHECK(p_ini(0, 11, mac, kRisk) == doctest::Approx(0.500015).epsilon(1e-5));
    }
    SUBCASE("flat branch is uniform") {
        for (int c = 0; c < mac.cw; ++c)
            CHECK(p_ini(c, 1, mac, kRisk) == doctest::Approx(1.0 / 15.0).epsilon(1e-15));
    }
    SUBCASE("both branches sum to one, any decay") {
        for (const double r : {0.5, 0.3, 0.9}) {
            MacParams m = mac;
            m.r_decay = r;
            for (const auto branch : {AllocBranch::Decreasing, AllocBranch::Flat}) {
                const auto row = p_ini_row(branch, m);
                double sum = 0.0;
                for (double p : row)
                    sum += p;
                CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
            }
        }
    }
    SUBCASE("argument validation") {
        CHECK_THROWS_AS(p_ini(-1, 1, mac, kRisk), std::invalid_argument);
        CHECK_THROWS_AS(p_ini(15, 1, mac, kRisk), std::invalid_argument);
        CHECK_THROWS_AS(p_ini(0, 0, mac, kRisk), std::invalid_argument);
    }
}

TEST_CASE("backoff sampling follows the allocation") {
    MacParams mac;
    Rng rng(4242);
    const int n = 1000000;
    SUBCASE("flat samples are uniform") {
        std::vector<int> hist(15, 0);
        for (int i = 0; i < n; ++i)
            ++hist[static_cast<std::size_t>(sample_backoff(1, mac, kRisk, rng))];
        for (int c = 0; c < 15; ++c)
            CHECK(static_cast<double>(hist[static_cast<std::size_t>(c)]) / n ==
                  doctest::Approx(1.0 / 15.0).epsilon(0.03));
    }
    SUBCASE("decreasing samples favor counter zero") {
        int zeros = 0;
        for (int i = 0; i < n; ++i)
            if (sample_backoff(11, mac, kRisk, rng) == 0)
                ++zeros;
        CHECK(std::fabs(static_cast<double>(zeros) / n - 0.500015) < 0.002);
    }
    SUBCASE("a single counter is forced") {
        MacParams one;
        one.cw = 1;
        one.l_bcn_slots = 2;
        one.big_l_bcn_slots = 8;
        for (int i = 0; i < 100; ++i)
            CHECK(sample_backoff(11, one, kRisk, rng) == 0);
    }
}

TEST_CASE("expiry depth") {
    MacParams mac;
    mac.big_l_bcn_slots = 750;
    mac.l_bcn_slots = 10;
    CHECK(delta_c(0, mac) == 740);
    CHECK(delta_c(5, mac) == 735);
    for (int c = 1; c < mac.cw; ++c)
        CHECK(delta_c(c, mac) == delta_c(c - 1, mac) - 1);
}

TEST_CASE("mac parameter invariants") {
    MacParams bad;
    bad.cw = 750;
    bad.l_bcn_slots = 8;
    bad.big_l_bcn_slots = 750;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    MacParams zero;
    zero.cw = 0;
    CHECK_THROWS_AS(zero.validate(), std::invalid_argument);
}

TEST_CASE("transition matrix is row-stochastic with an absorbing EXP state") {
    for (const double pb : {0.0, 0.3, 1.0}) {
        for (const int k : {1, 11}) {
            const BackoffChain chain(k, pb, MacParams{}, kRisk);
            for (int i = 0; i < chain.num_states(); ++i)
                CHECK(std::fabs(chain.row_sum(i) - 1.0) <= 1e-12);
            const auto& exp_row = chain.row(chain.exp_index());
            REQUIRE(exp_row.size() == 1);
            CHECK(exp_row[0].first == chain.exp_index());
            CHECK(exp_row[0].second == 1.0);
        }
    }
}

TEST_CASE("matrix absorption matches enumeration on a small instance") {
    MacParams mac{3, 2, 8, 0.5};
    for (const int k : {1, 11}) {
        const double via_matrix = oracle::tau_chain_absorption(k, 0.3, mac, kRisk);
        const double closed = tau_for_branch(branch_for_category(k, kRisk), 0.3, mac,
                                             TauModel::Chain);
        CHECK(std::fabs(via_matrix - closed) <= 1e-12);
    }
    SUBCASE("idle channel never expires") {
        CHECK(oracle::tau_chain_absorption(1, 0.0, mac, kRisk) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("chain dump matches the golden file") {
    MacParams mac{3, 2, 8, 0.5};
    std::ostringstream os;
    build_transition_matrix(11, 0.3, mac, kRisk).dump(os);
    std::ifstream golden(std::string(DSRCBO_GOLDEN_DIR) + "/chain_cw3_dec_pb03.txt");
    REQUIRE(golden.good());
    std::stringstream want;
    want << golden.rdbuf();
    CHECK(os.str() == want.str());
}

TEST_CASE("state indexing is dense and ordered") {
    MacParams mac{3, 2, 8, 0.5};
    const BackoffChain chain(1, 0.3, mac, kRisk);
    // B_0,B_1,B_2, D_{1,1..5}, D_{2,1..4}, EXP
    CHECK(chain.backoff_index(0) == 0);
    CHECK(chain.backoff_index(2) == 2);
    CHECK(chain.delay_index(1, 1) == 3);
    CHECK(chain.delay_index(1, 5) == 7);
    CHECK(chain.delay_index(2, 1) == 8);
    CHECK(chain.delay_index(2, 4) == 11);
    CHECK(chain.exp_index() == 12);
    CHECK(chain.num_states() == 13);
    CHECK_THROWS_AS(chain.delay_index(1, 6), std::out_of_range);
}
