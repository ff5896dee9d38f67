// Copyright (c) 2026 The Floodshard developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#include <floodshard/tan.hpp>

#include <floodshard/rng.hpp>
#include <floodshard/sharder.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace floodshard {

DatasetReader::DatasetReader(std::istream& in) : in_(in) {}

std::optional<TanRecord> DatasetReader::next() {
    std::string line;
    while (std::getline(in_, line)) {
        ++line_no_;
        if (line.empty() || line[0] == '#') continue;

        std::istringstream ss(line);
        TanRecord rec;
        std::string tok;
        if (!(ss >> tok)) continue;

        if (tok == "G") {
            rec.genesis = true;
            if (!(ss >> tok)) throw ParseError("missing txid after genesis marker", line_no_);
        }

        if (!tok.empty() && tok[0] == '@') {
            try {
                rec.timestamp_ms = std::stoll(tok.substr(1));
            } catch (const std::exception&) {
                throw ParseError("bad timestamp token '" + tok + "'", line_no_);
            }
            if (!(ss >> tok)) throw ParseError("missing txid", line_no_);
        }

        try {
            rec.id = Hash256::from_hex(tok);
        } catch (const std::exception&) {
            throw ParseError("bad txid '" + tok + "'", line_no_);
        }

        uint64_t n_in = 0;
        if (!(ss >> n_in)) throw ParseError("missing input count", line_no_);
        bool dangling = false;
        rec.inputs.reserve(n_in);
        for (uint64_t i = 0; i < n_in; ++i) {
            if (!(ss >> tok)) throw ParseError("missing input txid", line_no_);
            Hash256 ref;
            try {
                ref = Hash256::from_hex(tok);
            } catch (const std::exception&) {
                throw ParseError("bad input txid '" + tok + "'", line_no_);
            }
            if (ref == rec.id) throw ParseError("self reference (cycle)", line_no_);
            if (!seen_.count(ref)) dangling = true;
            rec.inputs.push_back(ref);
        }

        if (!(ss >> rec.n_outputs)) throw ParseError("missing output count", line_no_);
        if (ss >> tok) {
            if (tok == "M") rec.malicious = true;
            else if (tok != "L") throw ParseError("unexpected trailing token '" + tok + "'", line_no_);
        }
        if (seen_.count(rec.id)) throw ParseError("duplicate txid", line_no_);

        if (dangling) {
            ++stats_.skipped_dangling;
            continue;
        }
        seen_.insert(rec.id);
        ++stats_.loaded;
        return rec;
    }
    return std::nullopt;
}

std::vector<TanRecord> load_dataset(const std::string& path, LoadStats* stats) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dataset file: " + path);
    DatasetReader reader(in);
    std::vector<TanRecord> out;
    while (auto rec = reader.next()) out.push_back(std::move(*rec));
    if (stats) *stats = reader.stats();
    return out;
}

std::string format_record(const TanRecord& rec) {
    std::ostringstream ss;
    if (rec.genesis) ss << "G ";
    if (rec.timestamp_ms >= 0) ss << '@' << rec.timestamp_ms << ' ';
    ss << rec.id.hex() << ' ' << rec.inputs.size();
    for (const auto& in : rec.inputs) ss << ' ' << in.hex();
    ss << ' ' << rec.n_outputs;
    if (rec.malicious) ss << " M";
    return ss.str();
}

void write_dataset(std::ostream& out, const std::vector<TanRecord>& records) {
    for (const auto& rec : records) out << format_record(rec) << '\n';
}

SynthGenerator::SynthGenerator(const SynthConfig& cfg)
    : cfg_(cfg),
      rng_(cfg.rng_seed),
      degree_sampler_(cfg.degree.exponent, cfg.max_degree),
      inshard_sampler_(cfg.input_shards.exponent,
                       std::max(1u, std::min(cfg.max_degree, cfg.shard_count))),
      pools_(cfg.shard_count) {
    if (cfg.shard_count == 0) throw ConfigError("shard count must be >= 1");
    if (cfg.count == 0) throw ConfigError("workload count must be >= 1");
    seed_target_ = cfg.seed_records > 0
                       ? cfg.seed_records
                       : std::max<uint32_t>(64, 4 * cfg.shard_count);
    // Not more seeds than the workload has room for.
    seed_target_ = static_cast<uint32_t>(std::min<uint64_t>(seed_target_, cfg.count));
}

Hash256 SynthGenerator::fresh_id() {
    Hash256 h;
    for (size_t i = 0; i < 32; i += 8) {
        uint64_t w = rng_();
        for (size_t j = 0; j < 8; ++j) h.bytes[i + j] = static_cast<uint8_t>(w >> (8 * j));
    }
    return h;
}

uint32_t SynthGenerator::pick_nonempty_shard() {
    uint32_t s;
    do {
        s = static_cast<uint32_t>(uniform_below(rng_, cfg_.shard_count));
    } while (pools_[s].empty());
    return s;
}

std::optional<TanRecord> SynthGenerator::next() {
    if (emitted_ >= cfg_.count) return std::nullopt;

    TanRecord rec;
    rec.id = fresh_id();
    // 2..4 outputs: production must outpace the mean in-degree of the
    // default degree law (~2.4) or the spendable pools run dry.
    rec.n_outputs = 2 + static_cast<uint32_t>(uniform_below(rng_, 3));

    bool is_seed = emitted_ < seed_target_;
    if (is_seed) {
        // Pre-existing outputs spread across shards; they bootstrap the
        // spendable pools without consuming block capacity.
        rec.n_outputs = 8;
        rec.genesis = true;
    } else {
        uint32_t degree = degree_sampler_.sample(rng_);
        degree = static_cast<uint32_t>(
            std::min<uint64_t>(degree, available_outputs_ > 0 ? available_outputs_ : 0));
        if (degree == 0) degree = 1; // pools are kept from running dry below

        uint32_t nonempty = 0;
        for (const auto& p : pools_)
            if (!p.empty()) ++nonempty;
        uint32_t want_shards = inshard_sampler_.sample(rng_);
        want_shards = std::min({want_shards, degree, nonempty});
        if (want_shards == 0) want_shards = 1;

        // Distinct shards for the inputs, uniform over nonempty pools.
        std::vector<uint32_t> shards;
        shards.reserve(want_shards);
        while (shards.size() < want_shards) {
            uint32_t s = pick_nonempty_shard();
            if (std::find(shards.begin(), shards.end(), s) == shards.end()) shards.push_back(s);
        }

        // One input per chosen shard first, extras spread uniformly.
        std::vector<uint32_t> take(shards.size(), 1);
        for (uint32_t extra = degree - want_shards; extra > 0; --extra)
            ++take[uniform_below(rng_, shards.size())];

        for (size_t k = 0; k < shards.size(); ++k) {
            auto& pool = pools_[shards[k]];
            size_t retries = 0;
            for (uint32_t j = 0; j < take[k] && !pool.empty();) {
                size_t idx = uniform_below(rng_, pool.size());
                PoolEntry& e = pool[idx];
                // Distinct parents per record keeps one TaN edge per spend.
                if (std::find(rec.inputs.begin(), rec.inputs.end(), e.id) != rec.inputs.end()) {
                    if (++retries > pool.size() + 8) break;
                    continue;
                }
                rec.inputs.push_back(e.id);
                --available_outputs_;
                if (--e.avail == 0) {
                    e = pool.back();
                    pool.pop_back();
                }
                ++j;
            }
        }
    }

    ShardId home = shard_of(rec.id, cfg_.shard_count);
    pools_[home].push_back({rec.id, static_cast<uint16_t>(rec.n_outputs)});
    available_outputs_ += rec.n_outputs;
    ++emitted_;
    return rec;
}

std::vector<TanRecord> synth_generate(const SynthConfig& cfg) {
    SynthGenerator gen(cfg);
    std::vector<TanRecord> out;
    out.reserve(cfg.count);
    while (auto rec = gen.next()) out.push_back(std::move(*rec));
    return out;
}

} // namespace floodshard
