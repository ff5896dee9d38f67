// Copyright (c) 2026 The Floodshard developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#ifndef FLOODSHARD_CRYPTO_HPP
#define FLOODSHARD_CRYPTO_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace floodshard {
namespace crypto {

class CryptoError : public std::runtime_error {
public:
    explicit CryptoError(const std::string& what) : std::runtime_error(what) {}
};

using Key32 = std::array<uint8_t, 32>;
using Signature = std::array<uint8_t, 64>;

void random_bytes(std::span<uint8_t> out);

// Ed25519 (EU-CMA). Signatures are deterministic for a fixed key and
// message.
struct SigKeyPair {
    Key32 public_key;
    Key32 secret_key;

    static SigKeyPair generate();
};

Signature sign(const Key32& secret_key, std::span<const uint8_t> msg);
bool verify(const Key32& public_key, std::span<const uint8_t> msg, const Signature& sig);

// X25519 key pair for the hybrid encryption of enclave inputs.
struct BoxKeyPair {
    Key32 public_key;
    Key32 secret_key;

    static BoxKeyPair generate();
};

// Ephemeral-key ECIES: X25519 key agreement, SHA-256 KDF, AES-256-GCM
// payload. Output layout: ephemeral pk (32) | nonce (12) | ciphertext |
// tag (16).
std::vector<uint8_t> hybrid_encrypt(const Key32& recipient_pk, std::span<const uint8_t> plaintext);
std::optional<std::vector<uint8_t>> hybrid_decrypt(const BoxKeyPair& recipient,
                                                   std::span<const uint8_t> box);

// AES-256-GCM with associated data. Output: nonce (12) | ciphertext |
// tag (16). Open returns nullopt on any tamper.
std::vector<uint8_t> aead_seal(const Key32& key, std::span<const uint8_t> plaintext,
                               std::span<const uint8_t> aad);
std::optional<std::vector<uint8_t>> aead_open(const Key32& key, std::span<const uint8_t> sealed,
                                              std::span<const uint8_t> aad);

} // namespace crypto
} // namespace floodshard

#endif // FLOODSHARD_CRYPTO_HPP
