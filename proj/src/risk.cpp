#include "dsrcbo/risk.hpp"

#include <cmath>
#include <stdexcept>

namespace dsrcbo {

namespace {
constexpr double kSqrt2Pi = 2.5066282746310002;
constexpr double kSqrt2 = 1.4142135623730951;
} // namespace

double psi_pdf(double psi, double sigma) {
    if (!(sigma > 0.0))
        throw std::invalid_argument("sigma must be > 0");
    if (psi < 0.0)
        return 0.0;
    if (psi == 0.0)
        throw std::domain_error("psi_pdf diverges at psi = 0");
    return std::exp(-psi / (2.0 * sigma * sigma)) / (kSqrt2Pi * sigma * std::sqrt(psi));
}

double psi_cdf(double psi, double sigma) {
    if (!(sigma > 0.0))
        throw std::invalid_argument("sigma must be > 0");
    if (psi <= 0.0)
        return 0.0;
    return std::erf(std::sqrt(psi) / (kSqrt2 * sigma));
}

int categorize(double psi, const RiskModelParams& params) {
    params.validate();
    if (psi < 0.0)
        throw std::invalid_argument("psi must be nonnegative");
    if (psi <= 0.0)
        return 1;
    const int k = static_cast<int>(std::ceil(psi / params.step_size));
    if (k < 1)
        return 1;
    return k > params.num_categories ? params.num_categories : k;
}

double p_dec(const RiskModelParams& params) {
    params.validate();
    const double edge = params.step_size * half_point(params.num_categories);
    return std::erf(std::sqrt(edge) / (kSqrt2 * params.sigma));
}

double p_flat(const RiskModelParams& params) { return 1.0 - p_dec(params); }

AllocationMasses allocation_masses(const RiskModelParams& params) {
    const double low_mass = p_dec(params); // mass below the split point
    AllocationMasses m;
    if (params.division_rule == DivisionRule::HighRiskDecreasing) {
        m.decreasing = 1.0 - low_mass;
        m.flat = low_mass;
    } else {
        m.decreasing = low_mass;
        m.flat = 1.0 - low_mass;
    }
    return m;
}

std::vector<double> category_masses(const RiskModelParams& params) {
    params.validate();
    std::vector<double> mass(static_cast<std::size_t>(params.num_categories));
    double below = 0.0;
    for (int k = 1; k <= params.num_categories; ++k) {
        const double upper =
            k == params.num_categories ? 1.0 : psi_cdf(params.step_size * k, params.sigma);
        mass[static_cast<std::size_t>(k - 1)] = upper - below;
        below = upper;
    }
    return mass;
}

} // namespace dsrcbo
