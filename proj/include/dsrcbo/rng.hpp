#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace dsrcbo {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives an independent stream seed from (master, tags). Every consumer
/// owns its stream, so results do not depend on evaluation order.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
    return splitmix64(splitmix64(master ^ splitmix64(a ^ 0x9d2c5680a76b3c1dULL)) ^
                      splitmix64(b ^ 0x6a09e667f3bcc908ULL));
}

/// mt19937_64 with fixed sampling transforms. std:: distributions are
/// implementation-defined and would break byte-identical reruns.
class Rng {
  public:
    /// The raw seed is scrambled so that adjacent seed values give
    /// uncorrelated streams.
    explicit Rng(std::uint64_t seed) : eng_(splitmix64(seed ^ 0xa5a5a5a55a5a5a5aULL)) {}

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n), n >= 1.
    std::uint64_t uniform_index(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = eng_();
        } while (x >= limit);
        return x % n;
    }

    /// Marsaglia polar method; caches the spare value.
    double normal(double mean, double stddev) {
        if (have_spare_) {
            have_spare_ = false;
            return mean + stddev * spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        have_spare_ = true;
        return mean + stddev * u * m;
    }

    /// Exact Poisson draw; large means are split so exp() never underflows.
    std::uint64_t poisson(double mean);

  private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace dsrcbo
