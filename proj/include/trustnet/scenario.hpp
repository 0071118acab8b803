#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "trustnet/attestation.hpp"
#include "trustnet/commitment.hpp"
#include "trustnet/election.hpp"
#include "trustnet/grid.hpp"
#include "trustnet/trust.hpp"

namespace trustnet {

// How compromised agents behave once active. Non-cooperative agents act
// alone: random attester choice, negative reports about honest attesters,
// biased measurement data. Cooperative agents shield each other: they pick
// fellow malicious agents as attesters whenever one is alive, report in
// their favor, and invert trust decrements against them in their own
// bookkeeping matrices.
enum class Strategy { non_cooperative, cooperative };
enum class StepKind { fixed, diminishing };

std::string to_string(Strategy s);
std::string to_string(StepKind k);
Strategy strategy_from_string(const std::string& name);
StepKind step_kind_from_string(const std::string& name);

struct ScenarioConfig {
    std::uint32_t n_agents = 0;
    std::vector<AgentId> malicious; // unique, ascending
    Strategy strategy = Strategy::non_cooperative;
    StepKind step_rule = StepKind::fixed;
    std::uint32_t window_ticks = 40;
    // Run length in ticks; one SE sample per tick when a grid is attached.
    // 0 defers to max_ticks together with the stop rule.
    std::uint64_t n_samples = 0;
    std::uint64_t max_ticks = 0;
    std::optional<std::string> grid_path;
    std::uint64_t seed = 1;
    bool random_verifier = false; // uniform verifier per event instead of
                                  // one verification per agent per window
    std::uint64_t malicious_from_tick = 0;
    bool stop_on_identification = false;
    std::uint32_t image_len = 1024;
    HashAlg hash_alg = HashAlg::sha3_256;
    double se_bias = 0.1;
    double meas_sigma = 0.01;
    double process_noise = 1e-6;
    std::uint32_t trust_stride = 0; // snapshot cadence in ticks; 0 = final only
};

// Throws ConfigError on inconsistent settings.
void validate_scenario(const ScenarioConfig& cfg);

struct ElectionRecord {
    std::uint64_t tick = 0;
    std::uint32_t round = 0;
    ElectionTranscript transcript;
};

struct EvictionRecord {
    std::uint64_t tick = 0;
    AgentId agent = 0;
    std::uint32_t votes = 0;
    std::uint32_t n_active_before = 0;
};

struct SeErrorRecord {
    std::uint64_t tick = 0;
    double squared = 0.0;
    double max_abs = 0.0;
};

struct TrustSnapshot {
    std::uint64_t tick = 0;
    std::vector<double> p; // full n x n row-major copy
};

struct ScenarioTrace {
    ScenarioConfig config;
    std::vector<ElectionRecord> elections;
    std::vector<AttestationReport> reports;
    std::vector<EvictionRecord> evictions;
    std::vector<SeErrorRecord> se_errors;
    std::vector<TrustSnapshot> trust_snapshots; // strided plus final
    TrustMatrix final_trust{1};
    std::vector<AgentId> active_at_end;
    AgentId leader_at_end = 0;
    std::uint64_t ticks_run = 0;
    bool nominal_threat = true;

    bool identified = false; // stop rule: at least N/2 honest agents classify
                             // every agent correctly
    std::uint64_t identified_tick = 0;
    std::uint64_t attestations_at_identification = 0;

    // correct: every malicious agent evicted and no honest agent evicted;
    // false_eviction: some honest agent evicted; missed: otherwise.
    std::string outcome;

    double min_honest_trust_over_time = 1.0;
    double max_malicious_trust_over_time = 0.0;
    double min_honest_trust_at_stop = 1.0;
    double max_malicious_trust_at_stop = 0.0;
    bool separation_at_stop = true;
};

// Runs the full protocol: election at tick 0, windowed attestation schedule,
// broadcast reports with trust updates and eviction checks after every
// report, re-election when the leader is evicted, and one estimator sample
// per tick when a grid is attached. Identical (config, seed) pairs replay to
// identical traces. `grid` overrides loading cfg.grid_path.
ScenarioTrace run_scenario(const ScenarioConfig& cfg, const GridCase* grid = nullptr);

struct DetectionMetrics {
    struct PerAgent {
        AgentId agent = 0;
        bool evicted = false;
        std::uint64_t tick = 0;
    };
    std::vector<PerAgent> detections; // one per malicious agent, ascending id
    std::uint32_t malicious_evictions = 0;
    std::uint32_t honest_evictions = 0;
    bool fully_identified = false;
    std::uint64_t attestations_at_identification = 0;
    double min_honest_trust_over_time = 1.0;
    double max_malicious_trust_over_time = 0.0;
    double min_honest_trust_at_stop = 1.0;
    double max_malicious_trust_at_stop = 0.0;
    bool separation_at_stop = true; // vacuously true with no malicious agents
};

DetectionMetrics detection_metrics(const ScenarioTrace& trace);

// Sweep over (n_agents, malicious count) cells. Each run draws its malicious
// roster uniformly from the run seed, so compromised positions vary across
// seeds within a cell.
struct SweepCell {
    std::uint32_t n_agents = 0;
    std::uint32_t m_malicious = 0;
};

struct SweepConfig {
    ScenarioConfig base; // template; n_agents, malicious, seed filled per run
    std::vector<SweepCell> cells;
    std::uint32_t runs_per_cell = 100;
    std::uint64_t seed0 = 1;
};

struct SweepCellResult {
    std::uint32_t n_agents = 0;
    std::uint32_t m_malicious = 0;
    std::uint32_t runs = 0;
    std::uint32_t correct = 0;
    std::uint32_t missed = 0;
    std::uint32_t false_evictions = 0;
    std::uint64_t malicious_evicted = 0;
    std::uint64_t malicious_total = 0;
    std::uint64_t honest_evicted = 0;
    double mean_last_eviction_tick = 0.0; // over runs where every malicious
                                          // agent was evicted
};

struct SweepResult {
    std::vector<SweepCellResult> cells;
};

std::vector<AgentId> pick_malicious_roster(std::uint32_t n_agents, std::uint32_t m,
                                           std::uint64_t seed);

// Runs cells x runs_per_cell independent scenarios (OpenMP across runs;
// jobs <= 0 takes the OpenMP default) and aggregates detection outcomes.
// Result ordering and contents do not depend on the thread count.
SweepResult run_sweep(const SweepConfig& cfg, int jobs = 0);

} // namespace trustnet
