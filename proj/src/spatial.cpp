#include "dsrcbo/spatial.hpp"

#include <cmath>
#include <stdexcept>

#include "dsrcbo/risk.hpp"
#include "dsrcbo/rng.hpp"

namespace dsrcbo {

namespace {
constexpr double kTwoPi = 6.283185307179586;

double sq(double v) { return v * v; }

bool within(const VehicleNode& a, const VehicleNode& b, double r) {
    return sq(a.x - b.x) + sq(a.y - b.y) <= r * r;
}
} // namespace

void Region::validate() const {
    if (!(side_length_m > 0.0))
        throw std::invalid_argument("side_length must be > 0");
}

std::vector<VehicleNode> generate_ppp(const Region& region, double density_per_m2,
                                      std::uint64_t seed) {
    region.validate();
    if (!(density_per_m2 > 0.0))
        throw std::invalid_argument("density must be > 0");
    Rng rng(seed);
    const double d = region.side_length_m;
    const std::uint64_t n = rng.poisson(density_per_m2 * d * d);
    std::vector<VehicleNode> nodes;
    nodes.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        VehicleNode v;
        v.id = static_cast<int>(i);
        v.x = rng.uniform(0.0, d);
        v.y = rng.uniform(0.0, d);
        v.heading_rad = rng.uniform(0.0, kTwoPi);
        nodes.push_back(v);
    }
    return nodes;
}

std::vector<VehicleNode> assign_speeds(std::vector<VehicleNode> nodes, double mean_speed,
                                       double std_speed, double speed_limit,
                                       const RiskModelParams& risk, std::uint64_t seed) {
    if (!(std_speed > 0.0))
        throw std::invalid_argument("std_speed must be > 0");
    risk.validate();
    Rng rng(seed);
    for (auto& v : nodes) {
        double s = rng.normal(mean_speed, std_speed);
        if (s < 0.0)
            s = 0.0; // clamp instead of redraw; negligible for mean >> std
        v.speed_mps = s;
        v.psi = sq(s - speed_limit);
        v.risk_category = categorize(v.psi, risk);
    }
    return nodes;
}

int count_carrier_sense_neighbors(const VehicleNode& tagged, const std::vector<VehicleNode>& nodes,
                                  double r_cs_m) {
    if (!(r_cs_m > 0.0))
        throw std::invalid_argument("r_cs must be > 0");
    int n = 0;
    for (const auto& v : nodes)
        if (v.id != tagged.id && within(tagged, v, r_cs_m))
            ++n;
    return n;
}

int count_hidden_nodes(int n_cs) {
    if (n_cs < 0)
        throw std::invalid_argument("n_cs must be nonnegative");
    return 3 * n_cs;
}

int count_annulus_nodes(const VehicleNode& tagged, const std::vector<VehicleNode>& nodes,
                        double r_cs_m) {
    if (!(r_cs_m > 0.0))
        throw std::invalid_argument("r_cs must be > 0");
    int n = 0;
    for (const auto& v : nodes)
        if (v.id != tagged.id && !within(tagged, v, r_cs_m) && within(tagged, v, 2.0 * r_cs_m))
            ++n;
    return n;
}

Neighborhood measure_neighborhood(const VehicleNode& tagged, const std::vector<VehicleNode>& nodes,
                                  double r_cs_m) {
    Neighborhood nb;
    nb.n_cs = count_carrier_sense_neighbors(tagged, nodes, r_cs_m);
    nb.n_hn = count_hidden_nodes(nb.n_cs);
    return nb;
}

std::vector<VehicleNode> step_mobility(std::vector<VehicleNode> nodes, double dt_s,
                                       const Region& region) {
    if (!(dt_s > 0.0))
        throw std::invalid_argument("dt must be > 0");
    region.validate();
    const double d = region.side_length_m;
    for (auto& v : nodes) {
        double x = v.x + v.speed_mps * dt_s * std::cos(v.heading_rad);
        double y = v.y + v.speed_mps * dt_s * std::sin(v.heading_rad);
        double th = v.heading_rad;
        while (x < 0.0 || x > d) {
            if (x < 0.0)
                x = -x;
            else
                x = 2.0 * d - x;
            th = M_PI - th;
        }
        while (y < 0.0 || y > d) {
            if (y < 0.0)
                y = -y;
            else
                y = 2.0 * d - y;
            th = -th;
        }
        th = std::fmod(th, kTwoPi);
        if (th < 0.0)
            th += kTwoPi;
        v.x = x;
        v.y = y;
        v.heading_rad = th;
    }
    return nodes;
}

} // namespace dsrcbo
