#include "dsrcbo/scenario.hpp"

#include <cmath>
#include <stdexcept>

#include "dsrcbo/risk.hpp"

namespace dsrcbo {

std::string to_string(AllocatorMode m) {
    return m == AllocatorMode::Proposed ? "proposed" : "flat-only";
}
std::string to_string(TaggedSelection s) {
    return s == TaggedSelection::Uniform ? "uniform" : "central";
}

void Scenario::validate() const {
    region.validate();
    if (!(density_per_m2 > 0.0))
        throw std::invalid_argument("density must be > 0");
    if (!(r_cs_m > 0.0))
        throw std::invalid_argument("r_cs must be > 0");
    mac.validate();
    risk.validate();
    if (!(std_speed > 0.0))
        throw std::invalid_argument("std_speed must be > 0");
    if (num_periods < 1)
        throw std::invalid_argument("num_periods must be >= 1");
    if (num_replications < 1)
        throw std::invalid_argument("num_replications must be >= 1");
    if (mobility_dt_s < 0.0)
        throw std::invalid_argument("mobility_dt must be >= 0");
    if (!(fp_tol > 0.0))
        throw std::invalid_argument("tol must be > 0");
    if (fp_max_iter < 1)
        throw std::invalid_argument("max_iter must be >= 1");
    if (irt_max_nu < 1)
        throw std::invalid_argument("irt_max_nu must be >= 1");
}

int Scenario::derived_n_cs() const {
    if (analytic_n_cs >= 0)
        return analytic_n_cs;
    return static_cast<int>(std::llround(density_per_m2 * M_PI * r_cs_m * r_cs_m));
}

BranchMix Scenario::branch_mix() const {
    if (allocator_mode == AllocatorMode::FlatOnly)
        return BranchMix{0.0, 1.0};
    return branch_mix_from_categories(category_masses(risk), risk);
}

std::uint64_t Scenario::hash() const {
    // FNV-1a over the parameter fields that change engine results.
    std::uint64_t h = 1469598103934665603ULL;
    const auto mix_u64 = [&h](std::uint64_t v) {
        h ^= v;
        h *= 1099511628211ULL;
    };
    const auto mix_d = [&](double v) {
        std::uint64_t bits;
        static_assert(sizeof bits == sizeof v);
        __builtin_memcpy(&bits, &v, sizeof bits);
        mix_u64(bits);
    };
    mix_d(region.side_length_m);
    mix_d(density_per_m2);
    mix_d(r_cs_m);
    mix_u64(static_cast<std::uint64_t>(mac.cw));
    mix_u64(static_cast<std::uint64_t>(mac.l_bcn_slots));
    mix_u64(static_cast<std::uint64_t>(mac.big_l_bcn_slots));
    mix_d(mac.r_decay);
    mix_d(risk.sigma);
    mix_u64(static_cast<std::uint64_t>(risk.num_categories));
    mix_d(risk.step_size);
    mix_d(risk.speed_limit);
    mix_u64(static_cast<std::uint64_t>(risk.division_rule));
    mix_d(mean_speed);
    mix_d(std_speed);
    mix_u64(static_cast<std::uint64_t>(allocator_mode));
    mix_d(mobility_dt_s);
    return h;
}

} // namespace dsrcbo
