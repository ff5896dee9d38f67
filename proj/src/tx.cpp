// Copyright (c) 2026 The Floodshard developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#include <floodshard/tx.hpp>

#include <cstring>
#include <limits>

namespace floodshard {

namespace {

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
    out.push_back(static_cast<uint8_t>(v));
    out.push_back(static_cast<uint8_t>(v >> 8));
    out.push_back(static_cast<uint8_t>(v >> 16));
    out.push_back(static_cast<uint8_t>(v >> 24));
}

void put_i64(std::vector<uint8_t>& out, int64_t v) {
    uint64_t u = static_cast<uint64_t>(v);
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<uint8_t>(u >> (8 * i)));
}

class Reader {
public:
    explicit Reader(std::span<const uint8_t> data) : data_(data) {}

    uint32_t u32() {
        need(4);
        uint32_t v = static_cast<uint32_t>(data_[pos_]) |
                     static_cast<uint32_t>(data_[pos_ + 1]) << 8 |
                     static_cast<uint32_t>(data_[pos_ + 2]) << 16 |
                     static_cast<uint32_t>(data_[pos_ + 3]) << 24;
        pos_ += 4;
        return v;
    }

    int64_t i64() {
        need(8);
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(data_[pos_ + i]) << (8 * i);
        pos_ += 8;
        return static_cast<int64_t>(v);
    }

    void raw(uint8_t* dst, size_t n) {
        need(n);
        std::memcpy(dst, data_.data() + pos_, n);
        pos_ += n;
    }

    bool exhausted() const { return pos_ == data_.size(); }

private:
    void need(size_t n) {
        if (data_.size() - pos_ < n) throw MalformedTx("truncated transaction");
    }

    std::span<const uint8_t> data_;
    size_t pos_ = 0;
};

// Sanity bound so a corrupted count field cannot drive allocation.
constexpr uint32_t kMaxListLen = 1u << 24;

} // namespace

std::vector<uint8_t> serialize(const Transaction& tx) {
    std::vector<uint8_t> out;
    out.reserve(8 + tx.inputs.size() * 36 + tx.outputs.size() * 28 + tx.nonce_bytes.size() + 8);
    put_u32(out, static_cast<uint32_t>(tx.inputs.size()));
    for (const auto& in : tx.inputs) {
        out.insert(out.end(), in.txid.bytes.begin(), in.txid.bytes.end());
        put_u32(out, in.index);
    }
    put_u32(out, static_cast<uint32_t>(tx.outputs.size()));
    for (const auto& o : tx.outputs) {
        out.insert(out.end(), o.address.begin(), o.address.end());
        put_i64(out, o.value);
    }
    put_u32(out, static_cast<uint32_t>(tx.nonce_bytes.size()));
    out.insert(out.end(), tx.nonce_bytes.begin(), tx.nonce_bytes.end());
    put_u32(out, tx.size_bytes);
    return out;
}

Transaction deserialize(std::span<const uint8_t> bytes) {
    Reader r(bytes);
    Transaction tx;

    uint32_t n_in = r.u32();
    if (n_in > kMaxListLen) throw MalformedTx("input count out of range");
    tx.inputs.resize(n_in);
    for (auto& in : tx.inputs) {
        r.raw(in.txid.bytes.data(), 32);
        in.index = r.u32();
    }

    uint32_t n_out = r.u32();
    if (n_out > kMaxListLen) throw MalformedTx("output count out of range");
    tx.outputs.resize(n_out);
    for (auto& o : tx.outputs) {
        r.raw(o.address.data(), 20);
        o.value = r.i64();
        if (o.value < 0) throw MalformedTx("negative output value");
    }

    uint32_t n_nonce = r.u32();
    if (n_nonce > kMaxListLen) throw MalformedTx("nonce length out of range");
    tx.nonce_bytes.resize(n_nonce);
    if (n_nonce > 0) r.raw(tx.nonce_bytes.data(), n_nonce);

    tx.size_bytes = r.u32();
    if (!r.exhausted()) throw MalformedTx("trailing bytes after transaction");
    return tx;
}

Hash256 compute_txid(const Transaction& tx) {
    std::vector<uint8_t> bytes = serialize(tx);
    return double_sha256(bytes);
}

} // namespace floodshard
