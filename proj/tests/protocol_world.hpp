// Copyright (c) 2026 The Floodshard developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

// Shared harness for protocol tests: a set of validators with emulated
// enclaves, a mined header clock, a demo wallet, and mutating
// transports for the adversarial runs.

#ifndef FLOODSHARD_TESTS_PROTOCOL_WORLD_HPP
#define FLOODSHARD_TESTS_PROTOCOL_WORLD_HPP

#include <floodshard/protocol.hpp>

#include "test_util.hpp"

#include <memory>
#include <random>

namespace protoworld {

using namespace floodshard;

struct World {
    uint32_t shards;
    tee::ProgDescriptor prog;
    protocol::IdealBlockchain chain;
    protocol::IdealCountermeasure oracle;
    std::vector<std::unique_ptr<tee::TeePlatform>> platforms;
    std::vector<std::unique_ptr<protocol::ValidatorHost>> validators;
    std::set<crypto::Key32> registry;
    std::vector<uint64_t> shard_heights;
    uint64_t head_height = 0;
    std::mt19937_64 rng;

    // Wallet of outputs every enclave can resolve.
    std::vector<Outpoint> available;

    World(uint32_t n, const std::vector<bool>& tee_enabled, uint64_t seed = 1,
          uint64_t freshness_delta = 2)
        : shards(n), chain(n), oracle(n), shard_heights(n, 0), rng(seed) {
        prog.shard_count = n;
        for (bool enabled : tee_enabled) {
            platforms.push_back(std::make_unique<tee::TeePlatform>());
            auto v = std::make_unique<protocol::ValidatorHost>(
                "v" + std::to_string(validators.size()), enabled, *platforms.back(), n);
            v->enclave().install(prog);
            if (enabled) registry.insert(platforms.back()->public_key().sign_pk);
            validators.push_back(std::move(v));
        }
        for (auto& v : validators)
            v->bind(&chain, &registry, prog.id(), freshness_delta,
                    [this] { return head_height; });
        fund(256);
    }

    std::vector<protocol::ValidatorHost*> validator_ptrs() {
        std::vector<protocol::ValidatorHost*> out;
        for (auto& v : validators) out.push_back(v.get());
        return out;
    }

    // Mints fresh outputs and tells every enclave and the oracle.
    void fund(size_t count) {
        std::vector<std::pair<Outpoint, ShardId>> created;
        for (size_t i = 0; i < count; ++i) {
            Outpoint op{testutil::random_hash(rng), 0};
            created.push_back({op, shard_of(op.txid, shards)});
            available.push_back(op);
        }
        tee::UtxoDelta delta{created, {}, {}};
        for (auto& v : validators) v->enclave().update_state({}, delta);
        oracle.update_state({}, delta);
    }

    // Advances one shard's chain by a block; every enclave and the
    // oracle observe the new header.
    void mine_block() {
        ShardId s = static_cast<ShardId>(head_height % shards);
        std::vector<tee::HeaderUpdate> headers{{s, ++shard_heights[s]}};
        head_height = std::max(head_height, shard_heights[s]);
        for (auto& v : validators) v->enclave().update_state(headers, {});
        oracle.update_state(headers, {});
    }

    Transaction next_tx(uint32_t inputs = 2) {
        Transaction tx;
        for (uint32_t i = 0; i < inputs && !available.empty(); ++i) {
            size_t k = rng() % available.size();
            tx.inputs.push_back(available[k]);
            available[k] = available.back();
            available.pop_back();
        }
        tx.outputs.push_back({testutil::random_address(rng), 500});
        tx.nonce_bytes.resize(4);
        for (auto& b : tx.nonce_bytes) b = static_cast<uint8_t>(rng());
        return tx;
    }
};

// Transport that can drop request responses or flip bytes in the
// serialized messages, per-validator.
struct AdversarialTransport : protocol::Transport {
    enum class Tamper { None, DropResponse, MutateResponse, MutateProcess, FakeTx };

    std::function<Tamper(protocol::ValidatorHost&)> plan;
    std::mt19937_64 rng{0xbad};
    uint64_t tampered = 0;

    explicit AdversarialTransport(std::function<Tamper(protocol::ValidatorHost&)> p)
        : plan(std::move(p)) {}

    std::optional<protocol::ResponseMsg> request(protocol::ValidatorHost& v,
                                                 const protocol::RequestMsg& msg) override {
        Tamper t = plan(v);
        if (t == Tamper::FakeTx) {
            // Malicious host feeds the enclave a different transaction.
            Transaction fake;
            std::mt19937_64 frng(rng());
            fake.outputs.push_back({testutil::random_address(frng), 1});
            protocol::RequestMsg forged{
                crypto::hybrid_encrypt(v.advertised_pk().enc_pk, serialize(fake))};
            ++tampered;
            return protocol::Transport::request(v, forged);
        }
        auto resp = protocol::Transport::request(v, msg);
        if (!resp) return resp;
        switch (t) {
            case Tamper::DropResponse:
                ++tampered;
                return std::nullopt;
            case Tamper::MutateResponse: {
                auto bytes = resp->to_bytes();
                bytes[rng() % bytes.size()] ^= static_cast<uint8_t>(1 + rng() % 255);
                ++tampered;
                auto parsed = protocol::ResponseMsg::from_bytes(bytes);
                if (!parsed) return std::nullopt;
                return parsed;
            }
            default:
                return resp;
        }
    }

    protocol::Verdict process(protocol::ValidatorHost& v,
                              const protocol::ProcessMsg& msg) override {
        if (plan(v) == Tamper::MutateProcess) {
            auto bytes = msg.to_bytes();
            bytes[rng() % bytes.size()] ^= static_cast<uint8_t>(1 + rng() % 255);
            ++tampered;
            auto parsed = protocol::ProcessMsg::from_bytes(bytes);
            if (!parsed) return protocol::Verdict::Bottom;
            return protocol::Transport::process(v, *parsed);
        }
        return protocol::Transport::process(v, msg);
    }
};

} // namespace protoworld

#endif // FLOODSHARD_TESTS_PROTOCOL_WORLD_HPP
