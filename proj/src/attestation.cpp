#include "trustnet/attestation.hpp"

#include <algorithm>
#include <numeric>

#include "trustnet/errors.hpp"

namespace trustnet {

ProgramImage random_image(std::size_t len, Rng& rng)
{
    if (len == 0) {
        throw PreconditionError("random_image: empty image");
    }
    ProgramImage img;
    img.bytes.resize(len);
    rng.fill(img.bytes);
    return img;
}

ProgramImage tampered(const ProgramImage& img, std::size_t offset, std::uint8_t xor_mask)
{
    if (offset >= img.bytes.size()) {
        throw PreconditionError("tampered: offset outside image");
    }
    if (xor_mask == 0) {
        throw PreconditionError("tampered: mask would leave the image unchanged");
    }
    ProgramImage out = img;
    out.bytes[offset] ^= xor_mask;
    return out;
}

Challenge make_challenge(const ProgramImage& reference, Rng& rng)
{
    if (reference.bytes.empty()) {
        throw PreconditionError("make_challenge: empty image");
    }
    Challenge ch;
    ch.seed = rng.u64();
    ch.walk_length = static_cast<std::uint32_t>(2 * reference.bytes.size());
    return ch;
}

std::uint64_t compute_response(const ProgramImage& img, const Challenge& ch)
{
    const std::size_t len = img.bytes.size();
    if (len == 0) {
        throw PreconditionError("compute_response: empty image");
    }
    if (ch.walk_length < len) {
        throw PreconditionError("compute_response: walk shorter than image");
    }

    Rng walk(ch.seed);
    std::vector<std::uint32_t> order(len);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = len - 1; i > 0; --i) {
        std::swap(order[i], order[walk.below(i + 1)]);
    }

    // Chained avalanche digest: every step feeds the previous state, so a
    // changed byte at any visited offset flips the final value.
    std::uint64_t acc = splitmix64(ch.seed ^ 0x5bd1e995u);
    const auto absorb = [&](std::uint32_t offset) {
        acc = splitmix64(acc ^ (static_cast<std::uint64_t>(offset) << 8) ^
                         img.bytes[offset]);
    };
    for (const auto offset : order) {
        absorb(offset);
    }
    for (std::uint32_t step = static_cast<std::uint32_t>(len); step < ch.walk_length;
         ++step) {
        absorb(static_cast<std::uint32_t>(walk.below(len)));
    }
    return acc;
}

AttestOutcome attest(const ProgramImage& reference, const ProgramImage& attester_image,
                     Rng& rng)
{
    AttestOutcome out;
    out.challenge = make_challenge(reference, rng);
    out.expected = compute_response(reference, out.challenge);
    out.response = compute_response(attester_image, out.challenge);
    out.positive = out.expected == out.response;
    return out;
}

std::vector<AttestationEvent> schedule_window(std::span<const AgentId> active,
                                              std::uint64_t window_start,
                                              std::uint32_t window_ticks, Rng& rng)
{
    if (active.size() < 2) {
        throw PreconditionError("schedule_window: need at least two active agents");
    }
    if (window_ticks == 0) {
        throw PreconditionError("schedule_window: empty window");
    }
    std::vector<AttestationEvent> events;
    events.reserve(active.size());
    for (std::size_t i = 0; i < active.size(); ++i) {
        AttestationEvent e;
        e.tick = window_start + rng.below(window_ticks);
        e.verifier = active[i];
        // Uniform over the other agents: draw an index below n-1 and skip self.
        auto pick = rng.below(active.size() - 1);
        if (pick >= i) {
            ++pick;
        }
        e.attester = active[pick];
        events.push_back(e);
    }
    std::sort(events.begin(), events.end(), [](const auto& a, const auto& b) {
        return a.tick != b.tick ? a.tick < b.tick : a.verifier < b.verifier;
    });
    return events;
}

} // namespace trustnet
