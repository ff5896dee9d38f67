// Copyright (c) 2026 The Floodshard developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#include <floodshard/network.hpp>

#include <floodshard/sharder.hpp>

#include <json.hpp>

#include <fstream>

namespace floodshard {

const char* region_name(Region r) {
    switch (r) {
        case Region::NorthAmerica: return "north-america";
        case Region::Europe: return "europe";
        case Region::SouthAmerica: return "south-america";
        case Region::AsiaPacific: return "asia-pacific";
        case Region::Japan: return "japan";
        case Region::Australia: return "australia";
    }
    return "unknown";
}

NetworkModel NetworkModel::defaults() {
    // Propagation/bandwidth tables in the shape SimBlock publishes for
    // the six-region Bitcoin topology.
    NetworkModel m;
    m.latency_ms = {{
        {32, 124, 184, 198, 151, 189},
        {124, 11, 227, 237, 252, 294},
        {184, 227, 88, 325, 301, 322},
        {198, 237, 325, 85, 58, 198},
        {151, 252, 301, 58, 12, 126},
        {189, 294, 322, 198, 126, 16},
    }};
    m.bandwidth_bps = {3125000, 3000000, 812500, 1250000, 2187500, 1750000};
    m.region_weight = {0.3316, 0.4998, 0.0090, 0.1177, 0.0224, 0.0195};
    m.validate();
    return m;
}

NetworkModel NetworkModel::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open network config: " + path);
    nlohmann::json j;
    in >> j;

    NetworkModel m;
    const auto& lat = j.at("latency_ms");
    if (lat.size() != kRegionCount) throw ConfigError("latency_ms must have 6 rows");
    for (size_t i = 0; i < kRegionCount; ++i) {
        if (lat[i].size() != kRegionCount) throw ConfigError("latency_ms rows must have 6 entries");
        for (size_t k = 0; k < kRegionCount; ++k) m.latency_ms[i][k] = lat[i][k].get<int64_t>();
    }
    const auto& bw = j.at("bandwidth_bps");
    if (bw.size() != kRegionCount) throw ConfigError("bandwidth_bps must have 6 entries");
    for (size_t i = 0; i < kRegionCount; ++i) m.bandwidth_bps[i] = bw[i].get<int64_t>();
    const auto& w = j.at("region_weight");
    if (w.size() != kRegionCount) throw ConfigError("region_weight must have 6 entries");
    for (size_t i = 0; i < kRegionCount; ++i) m.region_weight[i] = w[i].get<double>();
    m.validate();
    return m;
}

void NetworkModel::validate() const {
    double wsum = 0;
    for (size_t i = 0; i < kRegionCount; ++i) {
        if (bandwidth_bps[i] <= 0) throw ConfigError("bandwidth must be positive");
        if (region_weight[i] < 0) throw ConfigError("region weight must be non-negative");
        wsum += region_weight[i];
        for (size_t k = 0; k < kRegionCount; ++k) {
            if (latency_ms[i][k] < 0) throw ConfigError("latency must be non-negative");
            if (latency_ms[i][k] != latency_ms[k][i])
                throw ConfigError("latency matrix must be symmetric");
        }
    }
    if (wsum <= 0) throw ConfigError("region weights must not all be zero");
}

NodeDirectory::NodeDirectory(const NetworkModel& model, uint32_t node_count, uint64_t rng_seed)
    : model_(model) {
    model_.validate();
    double wsum = 0;
    std::array<double, kRegionCount> cdf{};
    for (size_t i = 0; i < kRegionCount; ++i) {
        wsum += model_.region_weight[i];
        cdf[i] = wsum;
    }
    std::mt19937_64 rng(rng_seed);
    std::uniform_real_distribution<double> u(0.0, wsum);
    regions_.reserve(node_count);
    for (uint32_t i = 0; i < node_count; ++i) {
        double x = u(rng);
        size_t r = 0;
        while (r + 1 < kRegionCount && x > cdf[r]) ++r;
        regions_.push_back(static_cast<Region>(r));
    }
}

Region NodeDirectory::region_of(uint32_t node) const {
    if (node >= regions_.size()) throw std::out_of_range("unknown node id");
    return regions_[node];
}

TimeMs NodeDirectory::message_delay(uint32_t from, uint32_t to, uint64_t size_bytes) const {
    Region a = region_of(from);
    Region b = region_of(to);
    int64_t lat = model_.latency_ms[static_cast<size_t>(a)][static_cast<size_t>(b)];
    int64_t bw = std::min(model_.bandwidth_bps[static_cast<size_t>(a)],
                          model_.bandwidth_bps[static_cast<size_t>(b)]);
    int64_t transfer = static_cast<int64_t>((size_bytes * 1000 + bw - 1) / bw);
    return lat + transfer;
}

} // namespace floodshard
