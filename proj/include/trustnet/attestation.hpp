#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "trustnet/election.hpp"
#include "trustnet/rng.hpp"

namespace trustnet {

struct ProgramImage {
    std::vector<std::uint8_t> bytes;
};

// Checksum walk over a program image. The first `len` steps visit a seeded
// permutation of all offsets, the remainder are uniform draws; with
// walk_length = 2 * len every offset is covered at least once, so any
// single-byte tamper lands on the walk.
struct Challenge {
    std::uint64_t seed = 0;
    std::uint32_t walk_length = 0;
};

ProgramImage random_image(std::size_t len, Rng& rng);
ProgramImage tampered(const ProgramImage& img, std::size_t offset,
                      std::uint8_t xor_mask = 0xff);

Challenge make_challenge(const ProgramImage& reference, Rng& rng);

// Digest of the walk. Throws PreconditionError on an empty image or a walk
// shorter than the image.
std::uint64_t compute_response(const ProgramImage& img, const Challenge& ch);

struct AttestOutcome {
    bool positive = false;
    Challenge challenge;
    std::uint64_t expected = 0; // precomputed by the verifier from its reference
    std::uint64_t response = 0; // computed by the attester over its own image
};

// One honest challenge/response exchange: positive iff the attester's
// response over its own image matches the verifier's locally precomputed
// digest over the reference image.
AttestOutcome attest(const ProgramImage& reference, const ProgramImage& attester_image,
                     Rng& rng);

struct AttestationEvent {
    std::uint64_t tick = 0;
    AgentId verifier = 0;
    AgentId attester = 0;
};

// One verification per active agent at a uniform tick inside
// [window_start, window_start + window_ticks); the default attester is drawn
// uniformly from the other active agents. Events come back sorted by
// (tick, verifier).
std::vector<AttestationEvent> schedule_window(std::span<const AgentId> active,
                                              std::uint64_t window_start,
                                              std::uint32_t window_ticks, Rng& rng);

} // namespace trustnet
