#pragma once

#include <cstdint>
#include <vector>

#include "dsrcbo/params.hpp"

namespace dsrcbo {

struct Region {
    double side_length_m = 1000.0;
    void validate() const; // throws std::invalid_argument
};

struct VehicleNode {
    int id = 0;
    double x = 0.0;
    double y = 0.0;
    double heading_rad = 0.0; // uniform on [0, 2*pi) at generation
    double speed_mps = 0.0;
    double psi = 0.0; // (speed - v_L)^2
    int risk_category = 1;
};

struct Neighborhood {
    int n_cs = 0;
    int n_hn = 0; // 3 * n_cs under the density-scaling rule
};

/// Homogeneous Poisson field over the square: count ~ Poisson(density * D^2),
/// positions i.i.d. uniform. Speeds and marks stay zero until assign_speeds.
std::vector<VehicleNode> generate_ppp(const Region& region, double density_per_m2,
                                      std::uint64_t seed);

/// Draws speeds ~ Normal(mean, std^2) clamped at 0, sets psi = (v - v_L)^2
/// and the risk category. Marks are independent of positions.
std::vector<VehicleNode> assign_speeds(std::vector<VehicleNode> nodes, double mean_speed,
                                       double std_speed, double speed_limit,
                                       const RiskModelParams& risk, std::uint64_t seed);

/// Other nodes with Euclidean distance <= r_cs (boundary inclusive); the
/// tagged node itself is excluded.
int count_carrier_sense_neighbors(const VehicleNode& tagged, const std::vector<VehicleNode>& nodes,
                                  double r_cs_m);

/// Annulus population under equal density: the ring (r_cs, 2*r_cs] has three
/// times the disk area, hence 3 * n_cs.
int count_hidden_nodes(int n_cs);

/// Nodes with distance in (r_cs, 2*r_cs]; the simulator's actual hidden set.
int count_annulus_nodes(const VehicleNode& tagged, const std::vector<VehicleNode>& nodes,
                        double r_cs_m);

Neighborhood measure_neighborhood(const VehicleNode& tagged, const std::vector<VehicleNode>& nodes,
                                  double r_cs_m);

/// Advances every node by speed*dt along its heading with specular bounces
/// at the region boundary; corner crossings reflect in both axes.
std::vector<VehicleNode> step_mobility(std::vector<VehicleNode> nodes, double dt_s,
                                       const Region& region);

} // namespace dsrcbo
