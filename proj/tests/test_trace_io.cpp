#include "trustnet/trace_io.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "trustnet/configio.hpp"
#include "trustnet/errors.hpp"

namespace trustnet {
namespace {

std::string data_path(const std::string& name)
{
    return std::string(TRUSTNET_DATA_DIR) + "/" + name;
}

std::filesystem::path temp_dir()
{
    const auto dir =
        std::filesystem::temp_directory_path() / "trustnet_trace_io_test";
    std::filesystem::create_directories(dir);
    return dir;
}

std::string read_file(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    EXPECT_TRUE(in.good()) << p;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string first_line(const std::string& text)
{
    return text.substr(0, text.find('\n'));
}

TEST(FormatDouble, RoundTripsExactValues)
{
    const double values[] = {0.0,   1.0,        0.5,   0.1,  1.0 / 3.0, 200.0,
                             1e300, 1.25e-300, -42.75, 1e-9, 123456789.123};
    for (const double v : values) {
        const std::string s = format_double(v);
        EXPECT_EQ(std::strtod(s.c_str(), nullptr), v) << s;
    }
    // Shortest form, not a fixed precision dump.
    EXPECT_EQ(format_double(0.5), "0.5");
    EXPECT_EQ(format_double(1.0), "1");
    EXPECT_EQ(format_double(0.1), "0.1");
}

TEST(OutcomeNames, MapBothDirections)
{
    EXPECT_EQ(to_string(Outcome::positive), "positive");
    EXPECT_EQ(to_string(Outcome::negative), "negative");
}

TEST(TranscriptText, HasTheCanonicalLineStructure)
{
    Rng rng(5);
    const AgentId agents[] = {0, 1, 2};
    const auto t = run_election(agents, rng, HashAlg::sha256);
    const auto text = transcript_text(t);

    EXPECT_EQ(first_line(text), "alg sha256");
    EXPECT_NE(text.find("\nsorted "), std::string::npos);
    EXPECT_NE(text.find("\nk " + std::to_string(t.k)), std::string::npos);
    EXPECT_NE(text.find("\nleader " + std::to_string(t.leader) + " " +
                        std::to_string(t.leader_round_id)),
              std::string::npos);
    EXPECT_TRUE(text.ends_with("\ninvalid\n")); // no invalid revealers here

    int entry_lines = 0;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.rfind("entry ", 0) == 0) {
            ++entry_lines;
        }
    }
    EXPECT_EQ(entry_lines, 3);
}

TEST(TranscriptJson, CarriesEveryRoundField)
{
    Rng rng(6);
    const AgentId agents[] = {0, 1, 2, 3};
    const auto t = run_election(agents, rng);
    const auto j = transcript_json(t);
    EXPECT_EQ(j["alg"], "sha3-256");
    ASSERT_EQ(j["entries"].size(), 4u);
    for (const auto& e : j["entries"]) {
        EXPECT_TRUE(e.contains("agent"));
        EXPECT_TRUE(e.contains("round_id"));
        EXPECT_EQ(e["commitment"].get<std::string>().size(), 64u);
        EXPECT_TRUE(e.contains("reveal_value"));
        EXPECT_EQ(e["reveal_nonce"].get<std::string>().size(), 64u);
        EXPECT_TRUE(e["valid"].get<bool>());
    }
    EXPECT_EQ(j["k"].get<std::uint32_t>(), t.k);
    EXPECT_EQ(j["leader"].get<AgentId>(), t.leader);
    EXPECT_TRUE(j["invalid_revealers"].empty());
}

ScenarioTrace five_bus_trace()
{
    auto cfg = load_scenario_config(data_path("five_bus_agent3.json"));
    cfg.n_samples = 120; // keep the io test quick
    cfg.trust_stride = 50;
    return run_scenario(cfg);
}

TEST(TraceJson, CarriesConfigAndRecordArrays)
{
    const auto trace = five_bus_trace();
    const auto j = trace_json(trace);

    EXPECT_EQ(j["config"]["n_agents"].get<std::uint32_t>(), 5u);
    EXPECT_EQ(j["ticks_run"].get<std::uint64_t>(), trace.ticks_run);
    EXPECT_EQ(j["outcome"].get<std::string>(), trace.outcome);
    EXPECT_EQ(j["reports"].size(), trace.reports.size());
    EXPECT_EQ(j["se_errors"].size(), trace.se_errors.size());
    EXPECT_EQ(j["elections"].size(), trace.elections.size());
    EXPECT_EQ(j["evictions"].size(), trace.evictions.size());
    EXPECT_EQ(j["final_trust"]["n"].get<std::size_t>(), 5u);
    EXPECT_EQ(j["final_trust"]["p"].size(), 25u);
    EXPECT_EQ(j["trust_snapshots"].size(), trace.trust_snapshots.size());
    EXPECT_GE(trace.trust_snapshots.size(), 2u); // strided plus final
    EXPECT_TRUE(j.contains("separation_at_stop"));
    EXPECT_TRUE(j.contains("min_honest_trust_at_stop"));
}

TEST(TraceFiles, JsonFileParsesBackAndCsvBundleIsComplete)
{
    const auto trace = five_bus_trace();
    const auto dir = temp_dir();

    const auto json_path = dir / "trace.json";
    write_trace_json(trace, json_path.string());
    const auto parsed = nlohmann::json::parse(read_file(json_path));
    EXPECT_EQ(parsed["config"]["seed"].get<std::uint64_t>(), 1u);

    write_trace_csv(trace, (dir / "trace.csv").string());
    const struct {
        const char* suffix;
        const char* header;
        std::size_t rows;
    } expected[] = {
        {"trace_reports.csv", "tick,verifier,attester,outcome", trace.reports.size()},
        {"trace_se.csv", "tick,squared_error,max_abs_error", trace.se_errors.size()},
        {"trace_evictions.csv", "tick,agent,votes,n_active_before",
         trace.evictions.size()},
        {"trace_elections.csv", "tick,round,leader,leader_round_id,k,n_valid,n_invalid,alg",
         trace.elections.size()},
        {"trace_trust.csv", "tick,observer,subject,p",
         trace.trust_snapshots.size() * 25},
    };
    for (const auto& exp : expected) {
        const auto text = read_file(dir / exp.suffix);
        EXPECT_EQ(first_line(text), exp.header) << exp.suffix;
        const auto lines =
            static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
        EXPECT_EQ(lines, exp.rows + 1) << exp.suffix;
    }

    std::filesystem::remove_all(dir);
}

TEST(SweepFiles, JsonAndCsvMatchTheResultRows)
{
    SweepConfig cfg;
    cfg.base.window_ticks = 40;
    cfg.base.max_ticks = 100000;
    cfg.base.stop_on_identification = true;
    cfg.base.image_len = 64;
    cfg.cells = {{5, 1}, {6, 1}};
    cfg.runs_per_cell = 2;
    cfg.seed0 = 1;
    const auto result = run_sweep(cfg, 1);
    ASSERT_EQ(result.cells.size(), 2u);

    const auto j = sweep_json(cfg, result);
    EXPECT_EQ(j["cells"].size(), 2u);
    EXPECT_EQ(j["cells"][0]["runs"].get<std::uint32_t>(), 2u);
    EXPECT_EQ(j["config"]["runs_per_cell"].get<std::uint32_t>(), 2u);

    const auto dir = temp_dir();
    const auto csv_path = dir / "sweep.csv";
    write_sweep_csv(result, csv_path.string());
    const auto text = read_file(csv_path);
    EXPECT_EQ(first_line(text),
              "n_agents,m,runs,correct,missed,false_evictions,malicious_evicted,"
              "malicious_total,honest_evicted,mean_last_eviction_tick");
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);

    const auto json_path = dir / "sweep.json";
    write_sweep_json(cfg, result, json_path.string());
    EXPECT_NO_THROW(nlohmann::json::parse(read_file(json_path)));
    std::filesystem::remove_all(dir);
}

TEST(TraceFiles, UnwritablePathRaisesConfigError)
{
    const auto trace = five_bus_trace();
    EXPECT_THROW(write_trace_json(trace, "/no_such_dir/trace.json"), ConfigError);
}

} // namespace
} // namespace trustnet
