#include "dsrcbo/rng.hpp"

#include <stdexcept>

namespace dsrcbo {

std::uint64_t Rng::poisson(double mean) {
    if (mean < 0.0)
        throw std::invalid_argument("poisson mean must be nonnegative");
    std::uint64_t total = 0;
    // Knuth's product method per chunk; chunks keep exp(-chunk) well above
    // the double underflow threshold.
    while (mean > 0.0) {
        const double chunk = mean > 500.0 ? 500.0 : mean;
        mean -= chunk;
        const double limit = std::exp(-chunk);
        double prod = uniform();
        while (prod > limit) {
            ++total;
            prod *= uniform();
        }
    }
    return total;
}

} // namespace dsrcbo
