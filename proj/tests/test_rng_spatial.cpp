#include <cmath>
#include <stdexcept>

#include "doctest.h"

#include "dsrcbo/rng.hpp"
#include "dsrcbo/spatial.hpp"

using namespace dsrcbo;

TEST_CASE("poisson field count matches lambda*D^2 in mean and variance") {
    const Region region{1000.0};
    const double density = 1e-4; // mean 100
    const int seeds = 10000;
    double sum = 0.0, sum2 = 0.0;
    for (int s = 0; s < seeds; ++s) {
        const auto nodes = generate_ppp(region, density, derive_seed(42, s));
        const double n = static_cast<double>(nodes.size());
        sum += n;
        sum2 += n * n;
    }
    const double mean = sum / seeds;
    const double var = sum2 / seeds - mean * mean;
    CHECK(mean == doctest::Approx(100.0).epsilon(0.03));
    CHECK(var == doctest::Approx(100.0).epsilon(0.05));
}

TEST_CASE("empty-field probability matches the poisson pmf at 0") {
    const Region region{1000.0};
    const double density = 0.5 / 1e6; // lambda * D^2 = 0.5
    const int seeds = 40000;
    int empty = 0;
    for (int s = 0; s < seeds; ++s)
        if (generate_ppp(region, density, derive_seed(7, s)).empty())
            ++empty;
    CHECK(static_cast<double>(empty) / seeds ==
          doctest::Approx(std::exp(-0.5)).epsilon(0.015));
}

TEST_CASE("same seed reproduces the same field") {
    const Region region{500.0};
    const auto a = generate_ppp(region, 2e-4, 1234);
    const auto b = generate_ppp(region, 2e-4, 1234);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].x == b[i].x);
        CHECK(a[i].y == b[i].y);
        CHECK(a[i].heading_rad == b[i].heading_rad);
    }
}

TEST_CASE("generated and moved nodes stay inside the region") {
    const Region region{300.0};
    auto nodes = generate_ppp(region, 5e-4, 99);
    RiskModelParams risk;
    nodes = assign_speeds(std::move(nodes), 60.0, 5.0, 60.0, risk, 100);
    for (int step = 0; step < 1000; ++step)
        nodes = step_mobility(std::move(nodes), 0.05, region);
    for (const auto& v : nodes) {
        CHECK(v.x >= 0.0);
        CHECK(v.x <= region.side_length_m);
        CHECK(v.y >= 0.0);
        CHECK(v.y <= region.side_length_m);
    }
}

TEST_CASE("speed marks: mean psi equals the speed variance") {
    std::vector<VehicleNode> nodes(1000000);
    RiskModelParams risk;
    const auto out = assign_speeds(std::move(nodes), 60.0, 5.0, 60.0, risk, 2024);
    double mean = 0.0;
    for (const auto& v : out)
        mean += v.psi;
    mean /= static_cast<double>(out.size());
    CHECK(mean == doctest::Approx(25.0).epsilon(0.01));
}

TEST_CASE("degenerate speed spread gives zero psi") {
    std::vector<VehicleNode> nodes(1000);
    RiskModelParams risk;
    const auto out = assign_speeds(std::move(nodes), 60.0, 1e-9, 60.0, risk, 5);
    for (const auto& v : out)
        CHECK(v.psi < 1e-12);
}

TEST_CASE("psi is the squared deviation from the speed limit") {
    std::vector<VehicleNode> nodes(200);
    RiskModelParams risk;
    const auto out = assign_speeds(std::move(nodes), 70.0, 1e-9, 60.0, risk, 6);
    for (const auto& v : out)
        CHECK(v.psi == doctest::Approx(100.0).epsilon(1e-6));
}

TEST_CASE("marks are independent of position") {
    const Region region{2000.0};
    auto nodes = generate_ppp(region, 0.025, 31); // ~100k nodes
    RiskModelParams risk;
    nodes = assign_speeds(std::move(nodes), 60.0, 5.0, 60.0, risk, 32);
    const auto corr = [&](auto get_coord) {
        double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
        const double n = static_cast<double>(nodes.size());
        for (const auto& v : nodes) {
            const double x = get_coord(v);
            sx += x;
            sy += v.psi;
            sxx += x * x;
            syy += v.psi * v.psi;
            sxy += x * v.psi;
        }
        const double cov = sxy / n - (sx / n) * (sy / n);
        const double vx = sxx / n - (sx / n) * (sx / n);
        const double vy = syy / n - (sy / n) * (sy / n);
        return cov / std::sqrt(vx * vy);
    };
    CHECK(std::fabs(corr([](const VehicleNode& v) { return v.x; })) < 0.02);
    CHECK(std::fabs(corr([](const VehicleNode& v) { return v.y; })) < 0.02);
}

TEST_CASE("carrier-sense neighbor counting") {
    VehicleNode a{0, 100.0, 100.0, 0, 0, 0, 1};
    SUBCASE("a lone node has no neighbors") {
        CHECK(count_carrier_sense_neighbors(a, {a}, 300.0) == 0);
    }
    SUBCASE("the boundary is inclusive") {
        VehicleNode b{1, 400.0, 100.0, 0, 0, 0, 1};
        CHECK(count_carrier_sense_neighbors(a, {a, b}, 300.0) == 1);
        VehicleNode c{2, 400.0 + 1e-6, 100.0, 0, 0, 0, 1};
        CHECK(count_carrier_sense_neighbors(a, {a, c}, 300.0) == 0);
    }
}

TEST_CASE("mean carrier-sense count matches lambda*pi*r_cs^2") {
    const Region region{3000.0};
    const double density = 1e-4;
    const double r_cs = 300.0;
    const double expect = density * M_PI * r_cs * r_cs; // ~28.3
    double total = 0.0;
    long samples = 0;
    for (int s = 0; s < 60; ++s) {
        const auto nodes = generate_ppp(region, density, derive_seed(11, s));
        for (const auto& v : nodes) {
            if (v.x < 2 * r_cs || v.x > 3000 - 2 * r_cs || v.y < 2 * r_cs ||
                v.y > 3000 - 2 * r_cs)
                continue;
            total += count_carrier_sense_neighbors(v, nodes, r_cs);
            ++samples;
        }
    }
    CHECK(total / static_cast<double>(samples) == doctest::Approx(expect).epsilon(0.05));
}

TEST_CASE("hidden-node population triples the carrier-sense count") {
    CHECK(count_hidden_nodes(0) == 0);
    CHECK(count_hidden_nodes(10) == 30);
    CHECK(count_hidden_nodes(167) == 501);
    for (int n = 0; n < 64; ++n)
        CHECK(count_hidden_nodes(n) == 3 * n);
}

TEST_CASE("specular reflection at the boundary") {
    const Region region{1000.0};
    VehicleNode v{0, 999.0, 500.0, 0.0, 2.0, 0, 1};
    SUBCASE("zero speed leaves positions unchanged") {
        VehicleNode still = v;
        still.speed_mps = 0.0;
        const auto out = step_mobility({still}, 1.0, region);
        CHECK(out[0].x == 999.0);
        CHECK(out[0].y == 500.0);
    }
    SUBCASE("a crossing bounces back with the mirrored heading") {
        const auto out = step_mobility({v}, 1.0, region);
        CHECK(out[0].x == doctest::Approx(999.0));
        CHECK(out[0].y == doctest::Approx(500.0));
        CHECK(out[0].heading_rad == doctest::Approx(M_PI));
    }
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(generate_ppp(Region{0.0}, 1e-4, 1), std::invalid_argument);
    CHECK_THROWS_AS(generate_ppp(Region{100.0}, 0.0, 1), std::invalid_argument);
    VehicleNode a{};
    CHECK_THROWS_AS(count_carrier_sense_neighbors(a, {a}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(count_hidden_nodes(-1), std::invalid_argument);
}
