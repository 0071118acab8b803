#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "trustnet/rng.hpp"

namespace trustnet {

// Digest algorithm used for commitments. Fixed per run and recorded in the
// trace header; both options produce 32-byte digests.
enum class HashAlg { sha256, sha3_256 };

std::string to_string(HashAlg alg);
HashAlg hash_alg_from_string(const std::string& name);

using Digest = std::array<std::uint8_t, 32>;

inline constexpr std::size_t kMinNonceLen = 16;
inline constexpr std::size_t kNonceLen = 32;

// Hash commitment to a 32-bit value: H(value as 4-byte big-endian || nonce).
struct Commitment {
    Digest digest{};
    HashAlg alg = HashAlg::sha3_256;

    bool operator==(const Commitment&) const = default;
};

struct Opening {
    std::uint32_t value = 0;
    std::vector<std::uint8_t> nonce;

    bool operator==(const Opening&) const = default;
};

// Throws PreconditionError if the nonce is shorter than kMinNonceLen bytes.
Commitment commit(std::uint32_t value, std::span<const std::uint8_t> nonce,
                  HashAlg alg = HashAlg::sha3_256);

// True iff recomputing the commitment from `opening` reproduces `c.digest`.
// An opening that commit() would reject can never verify.
bool verify(const Commitment& c, const Opening& opening);

std::array<std::uint8_t, kNonceLen> random_nonce(Rng& rng);

std::string hex(std::span<const std::uint8_t> bytes);

} // namespace trustnet
