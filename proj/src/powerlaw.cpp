// Copyright (c) 2026 The Floodshard developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#include <floodshard/powerlaw.hpp>

#include <algorithm>
#include <cmath>

namespace floodshard {

PowerLawSpec fit_power_law(const std::map<uint32_t, double>& histogram) {
    // OLS on (log10 x, log10 y) over bins with x >= 1 and y > 0.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    size_t m = 0;
    for (const auto& [x, y] : histogram) {
        if (x == 0 || y <= 0) continue;
        double lx = std::log10(static_cast<double>(x));
        double ly = std::log10(y);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++m;
    }
    if (m < 2) throw std::invalid_argument("power-law fit needs at least two nonzero bins");
    double denom = m * sxx - sx * sx;
    if (denom == 0) throw std::invalid_argument("power-law fit is degenerate (single abscissa)");
    double slope = (m * sxy - sx * sy) / denom;
    double intercept = (sy - slope * sx) / m;
    return PowerLawSpec{std::pow(10.0, intercept), slope};
}

PowerLawSampler::PowerLawSampler(double exponent, uint32_t x_max) {
    if (x_max < 1) throw std::invalid_argument("power-law sampler needs x_max >= 1");
    if (exponent >= 0) throw std::invalid_argument("power-law sampler needs a negative exponent");
    cdf_.resize(x_max);
    double acc = 0;
    for (uint32_t x = 1; x <= x_max; ++x) {
        acc += std::pow(static_cast<double>(x), exponent);
        cdf_[x - 1] = acc;
    }
    for (double& c : cdf_) c /= acc;
    cdf_.back() = 1.0;
}

uint32_t PowerLawSampler::sample(std::mt19937_64& rng) const {
    double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
    return static_cast<uint32_t>(it - cdf_.begin()) + 1;
}

double PowerLawSampler::pmf(uint32_t x) const {
    if (x < 1 || x > cdf_.size()) return 0.0;
    double lo = x == 1 ? 0.0 : cdf_[x - 2];
    return cdf_[x - 1] - lo;
}

} // namespace floodshard
