#include <cmath>
#include <stdexcept>

#include "doctest.h"

#include "dsrcbo/collision.hpp"
#include "dsrcbo/oracles.hpp"

using namespace dsrcbo;

namespace {
const BranchMix kFlat{0.0, 1.0};
const MacParams kMac{};
}

TEST_CASE("synchronized-collision probability") {
    CHECK(p_sync(1, 15, 0.7) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(p_sync(2, 2, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p_sync(100, 15, 0.0) == 0.0);
    SUBCASE("more transmitters than counters collide for sure") {
        CHECK(p_sync(5, 2, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("matches full enumeration on small instances") {
        for (const int cw : {2, 3, 4})
            for (const int n : {1, 2, 3})
                for (const double tau : {0.3, 0.5, 1.0})
                    CHECK(p_sync(n, cw, tau) ==
                          doctest::Approx(oracle::p_sync_enumeration(n, cw, tau)).epsilon(1e-10));
    }
}

TEST_CASE("non-overlapping counter window") {
    SUBCASE("one-slot packets only exclude the exact counter") {
        for (const int cw : {4, 15, 32})
            for (int c = 0; c < cw; ++c)
                CHECK(s_no_hn_size(c, cw, 1) == cw - 1);
    }
    CHECK(s_no_hn_size(0, 15, 3) == 12);
    CHECK(s_no_hn_size(7, 15, 3) == 10);
    SUBCASE("matches the slot-grid brute force") {
        for (const int cw : {2, 5, 15, 31})
            for (const int l : {1, 2, 3, 8})
                for (int c = 0; c < cw; ++c)
                    CHECK(s_no_hn_size(c, cw, l) == oracle::s_no_hn_bruteforce(c, cw, l));
    }
}

TEST_CASE("hidden-node collision probability") {
    CHECK(p_hn(5, 15, 0.0, 8, kFlat, kMac) == 0.0);
    CHECK(p_hn(0, 15, 0.6, 8, kFlat, kMac) == 0.0);
    SUBCASE("matches full enumeration (flat tagged)") {
        MacParams mac{4, 2, 10, 0.5};
        CHECK(p_hn(1, 4, 0.5, 2, kFlat, mac) ==
              doctest::Approx(oracle::p_hn_enumeration(1, 4, 0.5, 2, kFlat, mac)).epsilon(1e-12));
    }
    SUBCASE("matches full enumeration (mixture tagged)") {
        MacParams mac{4, 2, 10, 0.5};
        const BranchMix mix{0.3, 0.7};
        for (const int n : {1, 2})
            for (const double tau : {0.5, 1.0})
                for (const int l : {1, 2})
                    CHECK(p_hn(n, 4, tau, l, mix, mac) ==
                          doctest::Approx(oracle::p_hn_enumeration(n, 4, tau, l, mix, mac))
                              .epsilon(1e-12));
    }
}

TEST_CASE("collision probabilities grow with exposure") {
    MacParams mac;
    SUBCASE("nondecreasing in tau") {
        for (const int n : {10, 100}) {
            double prev_s = -1.0, prev_h = -1.0;
            for (double tau = 0.0; tau <= 1.0; tau += 0.1) {
                const double s = p_sync(n, 15, tau);
                const double h = p_hn(n, 15, tau, 8, kFlat, mac);
                CHECK(s >= prev_s - 1e-12);
                CHECK(h >= prev_h - 1e-12);
                prev_s = s;
                prev_h = h;
            }
        }
    }
    SUBCASE("nondecreasing in n_cs") {
        double prev_s = -1.0, prev_h = -1.0;
        for (const int n : {0, 10, 50, 100, 200, 400}) {
            const double s = p_sync(n, 31, 0.01);
            const double h = p_hn(n, 31, 0.01, 8, kFlat, mac);
            CHECK(s >= prev_s - 1e-12);
            CHECK(h >= prev_h - 1e-12);
            prev_s = s;
            prev_h = h;
        }
    }
}

TEST_CASE("hidden nodes dominate synchronized collisions") {
    MacParams mac;
    for (const int cw : {15, 31, 511})
        for (const int n : {10, 50, 100, 300, 500})
            for (const double tau : {0.001, 0.01, 0.1})
                CHECK(p_hn(n, cw, tau, 8, kFlat, mac) >= p_sync(n, cw, tau) - 1e-12);
}

TEST_CASE("combined collision probability and delivery") {
    CHECK(p_col(0.0, 0.0) == 0.0);
    CHECK(p_col(1.0, 0.3) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(p_col(0.2, 0.3) == doctest::Approx(0.44).epsilon(1e-15));
    SUBCASE("complement identity") {
        for (double a = 0.0; a <= 1.0; a += 0.25)
            for (double b = 0.0; b <= 1.0; b += 0.25)
                CHECK(std::fabs(p_col(a, b) - (1.0 - (1.0 - a) * (1.0 - b))) <= 1e-12);
    }
    CHECK(pdr(1.0, 0.0) == 1.0);
    CHECK(pdr(0.0, 0.3) == 0.0);
    CHECK(pdr(0.8, 0.44) == doctest::Approx(0.448).epsilon(1e-15));
}

TEST_CASE("inter-reception pmf") {
    CHECK(irt_pmf(1, 0.37) == doctest::Approx(0.37).epsilon(1e-15));
    CHECK(irt_pmf(2, 1.0) == 0.0);
    CHECK_THROWS_AS(irt_pmf(0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(irt_pmf(1, 0.0), std::domain_error);
    SUBCASE("proper pmf") {
        const double p = 0.23;
        double sum = 0.0;
        double tail = 1.0;
        int nu = 1;
        while (tail >= 1e-12) {
            const double term = irt_pmf(nu, p);
            CHECK(term >= 0.0);
            sum += term;
            tail *= 1.0 - p;
            ++nu;
        }
        CHECK(sum + tail == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("delivery metrics compose and bound pdr by tau") {
    MacParams mac;
    const auto d = delivery_metrics(50, 0.4, kFlat, mac);
    CHECK(d.p_col == doctest::Approx(1.0 - (1.0 - d.p_sync) * (1.0 - d.p_hn)).epsilon(1e-12));
    CHECK(d.pdr <= 0.4 + 1e-15);
}
