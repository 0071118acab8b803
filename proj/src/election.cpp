#include "trustnet/election.hpp"

#include <algorithm>
#include <unordered_map>

#include "trustnet/errors.hpp"

namespace trustnet {

std::vector<std::uint32_t> draw_ids(std::uint32_t n, Rng& rng)
{
    if (n == 0) {
        throw PreconditionError("draw_ids: n must be positive");
    }
    std::vector<std::uint32_t> ids(n);
    for (auto& id : ids) {
        id = rng.u32();
    }
    // Count occurrences; all holders of a duplicated id redraw together.
    std::unordered_map<std::uint32_t, std::uint32_t> count;
    for (;;) {
        count.clear();
        for (const auto id : ids) {
            ++count[id];
        }
        if (count.size() == ids.size()) {
            return ids;
        }
        for (auto& id : ids) {
            if (count.at(id) > 1) {
                id = rng.u32();
            }
        }
    }
}

std::uint32_t compute_leader_index(std::span<const std::uint32_t> contributions,
                                   std::uint32_t n)
{
    if (n == 0 || contributions.empty()) {
        throw PreconditionError("compute_leader_index: empty round");
    }
    std::uint64_t sum = 0;
    for (const auto c : contributions) {
        if (c >= n) {
            throw PreconditionError("compute_leader_index: contribution out of range");
        }
        sum += c;
    }
    return static_cast<std::uint32_t>(sum % n);
}

std::uint32_t select_leader(std::span<const std::uint32_t> sorted_ids, std::uint32_t k)
{
    if (sorted_ids.empty() || k >= sorted_ids.size()) {
        throw PreconditionError("select_leader: index out of range");
    }
    for (std::size_t i = 1; i < sorted_ids.size(); ++i) {
        if (sorted_ids[i] <= sorted_ids[i - 1]) {
            throw PreconditionError("select_leader: ids not strictly ascending");
        }
    }
    return sorted_ids[k];
}

ElectionTranscript derive_outcome(std::vector<RoundEntry> entries, HashAlg alg)
{
    ElectionTranscript t;
    t.alg = alg;

    // Broadcast arrival order differs between observers; agent ids give the
    // one ordering every observer can reconstruct, so transcripts derived
    // from the same broadcast set agree byte for byte.
    std::sort(entries.begin(), entries.end(),
              [](const RoundEntry& a, const RoundEntry& b) { return a.agent < b.agent; });

    // The contribution range is fixed by the participant count, which is
    // common knowledge, so an out-of-range reveal is as detectable as an
    // equivocated one.
    const auto n = static_cast<std::uint32_t>(entries.size());
    std::vector<std::uint32_t> contributions;
    for (auto& e : entries) {
        e.valid = e.reveal.value < n && verify(e.commitment, e.reveal);
        if (e.valid) {
            contributions.push_back(e.reveal.value);
            t.sorted_ids.push_back(e.round_id);
        } else {
            t.invalid_revealers.push_back(e.agent);
        }
    }
    if (contributions.size() < 2) {
        throw ElectionFailed("fewer than two valid reveals");
    }
    std::sort(t.sorted_ids.begin(), t.sorted_ids.end());

    // Contributions were drawn against the participant-count modulus; after
    // exclusions the modulus shrinks to the valid-revealer count, so reduce
    // the sum directly instead of revalidating each term.
    std::uint64_t sum = 0;
    for (const auto c : contributions) {
        sum += c;
    }
    t.k = static_cast<std::uint32_t>(sum % t.sorted_ids.size());
    t.leader_round_id = select_leader(t.sorted_ids, t.k);
    for (const auto& e : entries) {
        if (e.valid && e.round_id == t.leader_round_id) {
            t.leader = e.agent;
        }
    }
    t.entries = std::move(entries);
    return t;
}

ElectionTranscript run_election(std::span<const AgentId> participants, Rng& rng,
                                HashAlg alg,
                                const std::map<AgentId, ElectionBehavior>* behaviors)
{
    const auto n = static_cast<std::uint32_t>(participants.size());
    if (n < 2) {
        throw PreconditionError("run_election: need at least two participants");
    }

    const auto ids = draw_ids(n, rng);
    std::vector<RoundEntry> entries(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        const ElectionBehavior* b = nullptr;
        if (behaviors != nullptr) {
            if (const auto it = behaviors->find(participants[i]); it != behaviors->end()) {
                b = &it->second;
            }
        }
        Opening committed;
        committed.value =
            (b != nullptr && b->choose) ? b->choose(n, rng) : static_cast<std::uint32_t>(rng.below(n));
        const auto nonce = random_nonce(rng);
        committed.nonce.assign(nonce.begin(), nonce.end());

        auto& e = entries[i];
        e.agent = participants[i];
        e.round_id = ids[i];
        e.commitment = commit(committed.value, committed.nonce, alg);
        // Reveals happen only after every commitment is broadcast, so a
        // dishonest reveal cannot depend on other agents' choices.
        e.reveal = (b != nullptr && b->reveal) ? b->reveal(committed) : committed;
    }
    return derive_outcome(std::move(entries), alg);
}

} // namespace trustnet
