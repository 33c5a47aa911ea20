#pragma once

#include <cstdint>
#include <string>

#include "dsrcbo/params.hpp"
#include "dsrcbo/solver.hpp"
#include "dsrcbo/spatial.hpp"

namespace dsrcbo {

enum class AllocatorMode { Proposed, FlatOnly };
enum class TaggedSelection { Uniform, Central };

std::string to_string(AllocatorMode m);
std::string to_string(TaggedSelection s);

/// Full parameter bundle driving both engines.
struct Scenario {
    Region region{1800.0};
    double density_per_m2 = 1.0e-4;
    double r_cs_m = 300.0;
    MacParams mac{};
    RiskModelParams risk{};
    double mean_speed = 60.0;
    double std_speed = 5.0;

    int num_periods = 200;
    int num_replications = 10;
    std::uint64_t master_seed = 12345;
    AllocatorMode allocator_mode = AllocatorMode::Proposed;
    TaggedSelection tagged_selection = TaggedSelection::Uniform;
    double mobility_dt_s = 0.0; // 0 disables mobility between periods

    TauModel tau_model = TauModel::Budget;
    BusyModel busy_model = BusyModel::Occupancy;
    double fp_tol = 1e-10;
    int fp_max_iter = 20000;
    int irt_max_nu = 30;

    /// Analytic neighborhood size; negative means derive from the field:
    /// round(density * pi * r_cs^2).
    int analytic_n_cs = -1;

    void validate() const;
    int derived_n_cs() const;
    BranchMix branch_mix() const;
    std::uint64_t hash() const; // parameter fingerprint for report pairing
};

} // namespace dsrcbo
