#pragma once

#include <vector>

#include "dsrcbo/params.hpp"

namespace dsrcbo {

/// Density of the squared speed deviation Psi = (X - v_L)^2 for
/// X ~ Normal(v_L, sigma^2). Integrable singularity at 0: evaluating at
/// exactly 0 throws; negative arguments return 0.
double psi_pdf(double psi, double sigma);

/// P(Psi <= psi).
double psi_cdf(double psi, double sigma);

/// Category index k in [1, K]: the band (k-1)*Q < psi <= k*Q, i.e.
/// ceil(psi/Q); psi = 0 maps to 1 and anything above K*Q clamps to K.
int categorize(double psi, const RiskModelParams& params);

/// Psi-mass on [0, Q*ceil(K/2)] as printed: erf(sqrt(Q*ceil(K/2)) / (sqrt(2)*sigma)).
double p_dec(const RiskModelParams& params);

/// Complement of p_dec.
double p_flat(const RiskModelParams& params);

struct AllocationMasses {
    double decreasing = 0.0;
    double flat = 1.0;
};

/// Population fractions on each allocation branch under the configured
/// division rule.
AllocationMasses allocation_masses(const RiskModelParams& params);

/// Psi-mass of each category band k = 1..K; the top band absorbs the tail.
std::vector<double> category_masses(const RiskModelParams& params);

} // namespace dsrcbo
