// Copyright (c) 2026 The Floodshard developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#include <floodshard/metrics.hpp>

#include <filesystem>
#include <fstream>
#include <ostream>

namespace floodshard {

void write_throughput_csv(std::ostream& out, const MetricsReport& r) {
    out << "committed,submitted,rejected,pending,active_seconds,throughput_tps,affected\n";
    out << r.committed << ',' << r.submitted << ',' << r.rejected << ',' << r.pending_at_end
        << ',' << r.active_seconds << ',' << r.throughput_tps << ',' << r.affected_count << '\n';
}

void write_latency_csv(std::ostream& out, const MetricsReport& r) {
    out << "committed,avg_latency_ms\n";
    out << r.committed << ',' << r.avg_latency_ms << '\n';
}

void write_queue_csv(std::ostream& out, const MetricsReport& r, uint32_t shard) {
    out << "time_ms,queue_size\n";
    for (const auto& s : r.queue_series.at(shard)) out << s.at_ms << ',' << s.size << '\n';
}

void write_metrics_files(const std::string& dir, const MetricsReport& r) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream f(dir + "/throughput.csv");
        write_throughput_csv(f, r);
    }
    {
        std::ofstream f(dir + "/latency.csv");
        write_latency_csv(f, r);
    }
    for (uint32_t s = 0; s < r.queue_series.size(); ++s) {
        std::ofstream f(dir + "/queue_" + std::to_string(s) + ".csv");
        write_queue_csv(f, r, s);
    }
}

} // namespace floodshard
