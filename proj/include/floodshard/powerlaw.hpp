// Copyright (c) 2026 The Floodshard developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#ifndef FLOODSHARD_POWERLAW_HPP
#define FLOODSHARD_POWERLAW_HPP

#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <vector>

namespace floodshard {

// y = scale * x^exponent
struct PowerLawSpec {
    double scale = 1.0;
    double exponent = -2.0;
};

// Least-squares line fit in log10-log10 space over the nonzero bins.
// Throws std::invalid_argument with fewer than two usable bins.
PowerLawSpec fit_power_law(const std::map<uint32_t, double>& histogram);

// Discrete sampler with P(X = x) proportional to x^exponent on
// [1, x_max]. Exponent must be negative enough to keep the tail sane;
// we require exponent < 0 and x_max >= 1.
class PowerLawSampler {
public:
    PowerLawSampler(double exponent, uint32_t x_max);

    uint32_t sample(std::mt19937_64& rng) const;
    double pmf(uint32_t x) const;
    uint32_t x_max() const { return static_cast<uint32_t>(cdf_.size()); }

private:
    std::vector<double> cdf_; // cdf_[i] = P(X <= i+1)
};

} // namespace floodshard

#endif // FLOODSHARD_POWERLAW_HPP
