#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "trustnet/commitment.hpp"
#include "trustnet/rng.hpp"

namespace trustnet {

// Stable agent index within a scenario. Election rounds additionally assign
// each participant a fresh random 32-bit round id; the sorted order of round
// ids is what the leader index selects into.
using AgentId = std::uint32_t;

// Per-round behavior hooks. Defaults play honestly; tests override them to
// model equivocation (revealing a different value than was committed).
struct ElectionBehavior {
    // Contribution in [0, n). Empty => uniform draw.
    std::function<std::uint32_t(std::uint32_t n, Rng&)> choose;
    // Opening actually broadcast at reveal time. Empty => reveal as committed.
    std::function<Opening(const Opening& committed)> reveal;
};

// Everything one participant broadcasts during a round.
struct RoundEntry {
    AgentId agent = 0;
    std::uint32_t round_id = 0;
    Commitment commitment;
    Opening reveal;
    bool valid = false; // reveal verified against the commitment
};

struct ElectionTranscript {
    std::vector<RoundEntry> entries;        // one per participant, by agent id
    std::vector<std::uint32_t> sorted_ids;  // round ids of valid revealers, ascending
    std::uint32_t k = 0;                    // (sum of valid contributions) mod n_valid
    std::uint32_t leader_round_id = 0;
    AgentId leader = 0;
    std::vector<AgentId> invalid_revealers; // excluded from the sum and from candidacy
    HashAlg alg = HashAlg::sha3_256;
};

// n distinct 32-bit ids. On a collision only the agents holding a duplicated
// id redraw; every holder of a duplicate redraws, so no draw order is
// privileged and the loop terminates even when n is large enough to make
// birthday collisions routine.
std::vector<std::uint32_t> draw_ids(std::uint32_t n, Rng& rng);

// (sum of contributions) mod n. Each contribution must lie in [0, n).
std::uint32_t compute_leader_index(std::span<const std::uint32_t> contributions,
                                   std::uint32_t n);

// k-th smallest entry (0-based) of a strictly ascending id list.
std::uint32_t select_leader(std::span<const std::uint32_t> sorted_ids, std::uint32_t k);

// Recompute the round outcome from the broadcast set alone. Every honest
// agent evaluates this function over identical inputs, so transcripts agree.
// Mutates only the `valid` flags of `entries`; fills the remaining transcript
// fields. Throws ElectionFailed if fewer than two reveals verify.
ElectionTranscript derive_outcome(std::vector<RoundEntry> entries, HashAlg alg);

// One full commit/reveal round over the given participants (at least two).
// `behaviors` may supply per-agent overrides.
ElectionTranscript run_election(std::span<const AgentId> participants, Rng& rng,
                                HashAlg alg = HashAlg::sha3_256,
                                const std::map<AgentId, ElectionBehavior>* behaviors = nullptr);

} // namespace trustnet
