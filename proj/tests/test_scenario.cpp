#include "trustnet/scenario.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "trustnet/configio.hpp"
#include "trustnet/errors.hpp"
#include "trustnet/trace_io.hpp"

namespace trustnet {
namespace {

std::string data_path(const std::string& name)
{
    return std::string(TRUSTNET_DATA_DIR) + "/" + name;
}

ScenarioConfig five_bus_config()
{
    return load_scenario_config(data_path("five_bus_agent3.json"));
}

TEST(RunScenario, ReplaysIdenticallyForTheSameConfigAndSeed)
{
    auto cfg = five_bus_config();
    cfg.n_samples = 150;
    cfg.trust_stride = 40;
    const auto a = trace_json(run_scenario(cfg)).dump();
    const auto b = trace_json(run_scenario(cfg)).dump();
    EXPECT_EQ(a, b);

    cfg.seed = 2;
    const auto c = trace_json(run_scenario(cfg)).dump();
    EXPECT_NE(a, c);
}

TEST(RunScenario, FiveBusAttackEndsInACorrectEviction)
{
    const auto cfg = five_bus_config();
    const auto trace = run_scenario(cfg);

    EXPECT_TRUE(trace.nominal_threat);
    EXPECT_EQ(trace.outcome, "correct");
    ASSERT_EQ(trace.evictions.size(), 1u);
    EXPECT_EQ(trace.evictions[0].agent, 3u);
    EXPECT_GE(trace.evictions[0].votes * 2, trace.evictions[0].n_active_before + 1);

    const std::vector<AgentId> survivors = {0, 1, 2, 4};
    EXPECT_EQ(trace.active_at_end, survivors);
    EXPECT_EQ(trace.ticks_run, 600u);
    EXPECT_EQ(trace.se_errors.size(), 600u);
    for (std::size_t i = 0; i < trace.se_errors.size(); ++i) {
        EXPECT_EQ(trace.se_errors[i].tick, i);
    }

    // Honest opinions of honest agents recover to exactly 1 by the stop.
    EXPECT_EQ(trace.min_honest_trust_at_stop, 1.0);
    EXPECT_LT(trace.max_malicious_trust_at_stop, 1.0);
    EXPECT_TRUE(trace.separation_at_stop);
    EXPECT_TRUE(trace.identified);

    // The eviction vote count is backed by exact zeros in the frozen final
    // matrix: the column stops updating once the agent is out.
    std::uint32_t zeros = 0;
    for (AgentId i = 0; i < 5; ++i) {
        if (i != 3 && trace.final_trust(i, 3) == 0.0) {
            ++zeros;
        }
    }
    EXPECT_GE(zeros, trace.evictions[0].votes);

    ASSERT_GE(trace.elections.size(), 1u);
    EXPECT_EQ(trace.elections[0].tick, 0u);
    EXPECT_TRUE(std::find(survivors.begin(), survivors.end(), trace.leader_at_end) !=
                survivors.end());

    // Reports arrive in tick order and never name the verifier as attester.
    for (std::size_t i = 0; i < trace.reports.size(); ++i) {
        EXPECT_NE(trace.reports[i].verifier, trace.reports[i].attester);
        if (i > 0) {
            EXPECT_GE(trace.reports[i].tick, trace.reports[i - 1].tick);
        }
    }
}

TEST(RunScenario, LeaderEvictionTriggersReelection)
{
    // Make the compromised agent the tick-0 leader deterministically by
    // scanning seeds; the first re-election then follows its eviction.
    auto cfg = five_bus_config();
    cfg.grid_path.reset();
    cfg.n_samples = 0;
    cfg.max_ticks = 5000;
    bool exercised = false;
    for (std::uint64_t seed = 1; seed <= 20 && !exercised; ++seed) {
        cfg.seed = seed;
        const auto trace = run_scenario(cfg);
        if (trace.elections.size() < 2 || trace.evictions.empty()) {
            continue;
        }
        if (trace.elections[0].transcript.leader != 3u) {
            continue;
        }
        EXPECT_EQ(trace.evictions[0].agent, 3u);
        EXPECT_EQ(trace.elections[1].tick, trace.evictions[0].tick);
        // The replacement leader is drawn from the survivors.
        EXPECT_NE(trace.elections[1].transcript.leader, 3u);
        exercised = true;
    }
    EXPECT_TRUE(exercised) << "no seed in 1..20 made agent 3 the first leader";
}

TEST(RunScenario, AllHonestRosterIdentifiesImmediatelyUnderTheStopRule)
{
    ScenarioConfig cfg;
    cfg.n_agents = 5;
    cfg.max_ticks = 10000;
    cfg.stop_on_identification = true;
    cfg.image_len = 64;
    cfg.seed = 4;

    const auto trace = run_scenario(cfg);
    EXPECT_TRUE(trace.identified);
    EXPECT_EQ(trace.identified_tick, 0u);
    EXPECT_EQ(trace.attestations_at_identification, 0u);
    EXPECT_EQ(trace.outcome, "correct");
    EXPECT_LE(trace.ticks_run, static_cast<std::uint64_t>(cfg.window_ticks));
    EXPECT_TRUE(trace.evictions.empty());
    EXPECT_TRUE(trace.separation_at_stop); // vacuous without malicious agents
}

TEST(RunScenario, RandomVerifierModeStillConvergesOnTheAttacker)
{
    ScenarioConfig cfg;
    cfg.n_agents = 6;
    cfg.malicious = {2};
    cfg.random_verifier = true;
    cfg.max_ticks = 200000;
    cfg.stop_on_identification = true;
    cfg.image_len = 64;
    cfg.seed = 9;

    const auto trace = run_scenario(cfg);
    EXPECT_EQ(trace.outcome, "correct");
    EXPECT_FALSE(trace.reports.empty());
    ASSERT_EQ(trace.evictions.size(), 1u);
    EXPECT_EQ(trace.evictions[0].agent, 2u);
}

TEST(RunScenario, CooperativeAttackersAreStillEvicted)
{
    ScenarioConfig cfg;
    cfg.n_agents = 9;
    cfg.malicious = {1, 5};
    cfg.strategy = Strategy::cooperative;
    cfg.max_ticks = 500000;
    cfg.stop_on_identification = true;
    cfg.image_len = 64;
    cfg.seed = 5;

    const auto trace = run_scenario(cfg);
    EXPECT_TRUE(trace.nominal_threat); // 2 * 2 + 2 < 9
    EXPECT_EQ(trace.outcome, "correct");
    for (const auto& ev : trace.evictions) {
        EXPECT_TRUE(ev.agent == 1u || ev.agent == 5u);
    }
    EXPECT_TRUE(trace.separation_at_stop);
}

TEST(RunScenario, DelayedActivationKeepsEarlyReportsPositive)
{
    ScenarioConfig cfg;
    cfg.n_agents = 5;
    cfg.malicious = {3};
    cfg.n_samples = 0;
    cfg.max_ticks = 400;
    cfg.malicious_from_tick = 200;
    cfg.image_len = 64;
    cfg.seed = 7;

    const auto trace = run_scenario(cfg);
    for (const auto& r : trace.reports) {
        if (r.tick < 200) {
            EXPECT_EQ(r.outcome, Outcome::positive) << "tick " << r.tick;
        }
    }
    // Once active, the compromised attester draws negatives from honest
    // verifiers.
    bool negative_after = false;
    for (const auto& r : trace.reports) {
        if (r.tick >= 200 && r.attester == 3 && r.outcome == Outcome::negative) {
            negative_after = true;
        }
    }
    EXPECT_TRUE(negative_after);
}

TEST(RunScenario, TrustStrideControlsSnapshotCadence)
{
    auto cfg = five_bus_config();
    cfg.grid_path.reset();
    cfg.n_samples = 100;
    cfg.trust_stride = 30;
    const auto trace = run_scenario(cfg);

    // Stride snapshots land on ticks 29, 59, 89; the final state lands on
    // the last tick executed.
    ASSERT_EQ(trace.trust_snapshots.size(), 4u);
    EXPECT_EQ(trace.trust_snapshots[0].tick, 29u);
    EXPECT_EQ(trace.trust_snapshots[1].tick, 59u);
    EXPECT_EQ(trace.trust_snapshots[2].tick, 89u);
    EXPECT_EQ(trace.trust_snapshots[3].tick, 99u);
    for (const auto& s : trace.trust_snapshots) {
        EXPECT_EQ(s.p.size(), 25u);
    }
    EXPECT_EQ(trace.trust_snapshots.back().p, trace.final_trust.data());
}

TEST(DetectionMetricsView, MirrorsTheTraceFields)
{
    const auto trace = run_scenario(five_bus_config());
    const auto dm = detection_metrics(trace);

    ASSERT_EQ(dm.detections.size(), 1u);
    EXPECT_EQ(dm.detections[0].agent, 3u);
    EXPECT_TRUE(dm.detections[0].evicted);
    EXPECT_EQ(dm.detections[0].tick, trace.evictions[0].tick);
    EXPECT_EQ(dm.malicious_evictions, 1u);
    EXPECT_EQ(dm.honest_evictions, 0u);
    EXPECT_EQ(dm.fully_identified, trace.identified);
    EXPECT_EQ(dm.min_honest_trust_at_stop, trace.min_honest_trust_at_stop);
    EXPECT_EQ(dm.max_malicious_trust_at_stop, trace.max_malicious_trust_at_stop);
    EXPECT_EQ(dm.separation_at_stop, trace.separation_at_stop);
}

TEST(MaliciousRoster, IsSeededSortedAndInRange)
{
    const auto a = pick_malicious_roster(20, 4, 11);
    const auto b = pick_malicious_roster(20, 4, 11);
    EXPECT_EQ(a, b);
    ASSERT_EQ(a.size(), 4u);
    EXPECT_TRUE(std::is_sorted(a.begin(), a.end()));
    EXPECT_EQ(std::set<AgentId>(a.begin(), a.end()).size(), 4u);
    EXPECT_LT(a.back(), 20u);

    // Positions vary across seeds.
    std::set<std::vector<AgentId>> distinct;
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        distinct.insert(pick_malicious_roster(20, 4, seed));
    }
    EXPECT_GT(distinct.size(), 1u);

    EXPECT_THROW(pick_malicious_roster(5, 5, 1), PreconditionError);
    EXPECT_NO_THROW(pick_malicious_roster(5, 0, 1));
}

TEST(RunSweep, AggregatesAreIndependentOfTheJobCount)
{
    SweepConfig cfg;
    cfg.base.window_ticks = 40;
    cfg.base.max_ticks = 200000;
    cfg.base.stop_on_identification = true;
    cfg.base.image_len = 64;
    cfg.cells = {{5, 1}, {7, 2}};
    cfg.runs_per_cell = 3;
    cfg.seed0 = 1;

    const auto serial = run_sweep(cfg, 1);
    const auto parallel = run_sweep(cfg, 4);
    ASSERT_EQ(serial.cells.size(), 2u);
    ASSERT_EQ(parallel.cells.size(), 2u);
    for (std::size_t c = 0; c < 2; ++c) {
        const auto& s = serial.cells[c];
        const auto& p = parallel.cells[c];
        EXPECT_EQ(s.n_agents, p.n_agents);
        EXPECT_EQ(s.m_malicious, p.m_malicious);
        EXPECT_EQ(s.runs, p.runs);
        EXPECT_EQ(s.correct, p.correct);
        EXPECT_EQ(s.missed, p.missed);
        EXPECT_EQ(s.false_evictions, p.false_evictions);
        EXPECT_EQ(s.malicious_evicted, p.malicious_evicted);
        EXPECT_EQ(s.honest_evicted, p.honest_evicted);
        EXPECT_EQ(s.mean_last_eviction_tick, p.mean_last_eviction_tick);

        EXPECT_EQ(s.runs, 3u);
        EXPECT_EQ(s.correct + s.missed + s.false_evictions, s.runs);
        EXPECT_EQ(s.malicious_total, static_cast<std::uint64_t>(s.m_malicious) * s.runs);
        EXPECT_LE(s.malicious_evicted, s.malicious_total);
    }
}

TEST(RunSweep, RejectsDegenerateConfigs)
{
    SweepConfig cfg;
    cfg.base.max_ticks = 1000;
    cfg.cells = {};
    EXPECT_THROW(run_sweep(cfg, 1), ConfigError);

    cfg.cells = {{5, 1}};
    cfg.runs_per_cell = 0;
    EXPECT_THROW(run_sweep(cfg, 1), ConfigError);

    cfg.runs_per_cell = 1;
    cfg.cells = {{1, 0}};
    EXPECT_THROW(run_sweep(cfg, 1), ConfigError);

    cfg.cells = {{5, 5}};
    EXPECT_THROW(run_sweep(cfg, 1), ConfigError);
}

TEST(RunScenario, GridOverrideSkipsTheConfiguredPath)
{
    auto cfg = five_bus_config();
    cfg.n_samples = 50;
    cfg.grid_path = "/definitely/not/a/real/path.json";
    const auto gc = load_grid_case(data_path("case5.json"));
    const auto trace = run_scenario(cfg, &gc);
    EXPECT_EQ(trace.se_errors.size(), 50u);

    // Without the override the bogus path must fail loudly.
    EXPECT_THROW(run_scenario(cfg), ConfigError);
}

} // namespace
} // namespace trustnet
