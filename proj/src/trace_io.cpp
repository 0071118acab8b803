#include "trustnet/trace_io.hpp"

#include <charconv>
#include <fstream>
#include <utility>

#include "trustnet/configio.hpp"
#include "trustnet/errors.hpp"

namespace trustnet {

namespace {

std::ofstream open_out(const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot write " + path);
    }
    return out;
}

std::string csv_base(std::string base)
{
    if (base.size() > 4 && base.ends_with(".csv")) {
        base.resize(base.size() - 4);
    }
    return base;
}

} // namespace

std::string format_double(double v)
{
    char buf[40];
    const std::to_chars_result res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string to_string(Outcome o)
{
    return o == Outcome::positive ? "positive" : "negative";
}

std::string transcript_text(const ElectionTranscript& t)
{
    std::string out;
    out += "alg " + to_string(t.alg) + "\n";
    for (const RoundEntry& e : t.entries) {
        out += "entry " + std::to_string(e.agent) + " " + std::to_string(e.round_id) +
               " " + hex(e.commitment.digest) + " " + std::to_string(e.reveal.value) +
               " " + hex(e.reveal.nonce) + " " + (e.valid ? "1" : "0") + "\n";
    }
    out += "sorted";
    for (const std::uint32_t id : t.sorted_ids) {
        out += " " + std::to_string(id);
    }
    out += "\nk " + std::to_string(t.k);
    out += "\nleader " + std::to_string(t.leader) + " " +
           std::to_string(t.leader_round_id);
    out += "\ninvalid";
    for (const AgentId a : t.invalid_revealers) {
        out += " " + std::to_string(a);
    }
    out += "\n";
    return out;
}

nlohmann::ordered_json transcript_json(const ElectionTranscript& t)
{
    nlohmann::ordered_json j;
    j["alg"] = to_string(t.alg);
    nlohmann::ordered_json entries = nlohmann::ordered_json::array();
    for (const RoundEntry& e : t.entries) {
        nlohmann::ordered_json je;
        je["agent"] = e.agent;
        je["round_id"] = e.round_id;
        je["commitment"] = hex(e.commitment.digest);
        je["reveal_value"] = e.reveal.value;
        je["reveal_nonce"] = hex(e.reveal.nonce);
        je["valid"] = e.valid;
        entries.push_back(std::move(je));
    }
    j["entries"] = std::move(entries);
    j["sorted_ids"] = t.sorted_ids;
    j["k"] = t.k;
    j["leader_round_id"] = t.leader_round_id;
    j["leader"] = t.leader;
    j["invalid_revealers"] = t.invalid_revealers;
    return j;
}

nlohmann::ordered_json trace_json(const ScenarioTrace& tr)
{
    nlohmann::ordered_json j;
    j["config"] = scenario_config_json(tr.config);
    j["ticks_run"] = tr.ticks_run;
    j["nominal_threat"] = tr.nominal_threat;
    j["outcome"] = tr.outcome;
    j["identified"] = tr.identified;
    j["identified_tick"] = tr.identified_tick;
    j["attestations_at_identification"] = tr.attestations_at_identification;
    j["leader_at_end"] = tr.leader_at_end;
    j["active_at_end"] = tr.active_at_end;
    j["min_honest_trust_over_time"] = tr.min_honest_trust_over_time;
    j["max_malicious_trust_over_time"] = tr.max_malicious_trust_over_time;
    j["min_honest_trust_at_stop"] = tr.min_honest_trust_at_stop;
    j["max_malicious_trust_at_stop"] = tr.max_malicious_trust_at_stop;
    j["separation_at_stop"] = tr.separation_at_stop;

    nlohmann::ordered_json elections = nlohmann::ordered_json::array();
    for (const ElectionRecord& er : tr.elections) {
        nlohmann::ordered_json je;
        je["tick"] = er.tick;
        je["round"] = er.round;
        je["transcript"] = transcript_json(er.transcript);
        elections.push_back(std::move(je));
    }
    j["elections"] = std::move(elections);

    nlohmann::ordered_json evictions = nlohmann::ordered_json::array();
    for (const EvictionRecord& ev : tr.evictions) {
        evictions.push_back({{"tick", ev.tick},
                             {"agent", ev.agent},
                             {"votes", ev.votes},
                             {"n_active_before", ev.n_active_before}});
    }
    j["evictions"] = std::move(evictions);

    nlohmann::ordered_json reports = nlohmann::ordered_json::array();
    for (const AttestationReport& r : tr.reports) {
        reports.push_back({{"tick", r.tick},
                           {"verifier", r.verifier},
                           {"attester", r.attester},
                           {"outcome", to_string(r.outcome)}});
    }
    j["reports"] = std::move(reports);

    nlohmann::ordered_json se = nlohmann::ordered_json::array();
    for (const SeErrorRecord& s : tr.se_errors) {
        se.push_back({{"tick", s.tick}, {"squared", s.squared}, {"max_abs", s.max_abs}});
    }
    j["se_errors"] = std::move(se);

    j["final_trust"] = {{"n", tr.final_trust.size()}, {"p", tr.final_trust.data()}};

    nlohmann::ordered_json snaps = nlohmann::ordered_json::array();
    for (const TrustSnapshot& s : tr.trust_snapshots) {
        snaps.push_back({{"tick", s.tick}, {"p", s.p}});
    }
    j["trust_snapshots"] = std::move(snaps);
    return j;
}

void write_trace_json(const ScenarioTrace& trace, const std::string& path)
{
    std::ofstream out = open_out(path);
    out << trace_json(trace).dump(2) << '\n';
}

void write_trace_csv(const ScenarioTrace& trace, const std::string& base_path)
{
    const std::string base = csv_base(base_path);
    {
        std::ofstream out = open_out(base + "_reports.csv");
        out << "tick,verifier,attester,outcome\n";
        for (const AttestationReport& r : trace.reports) {
            out << r.tick << ',' << r.verifier << ',' << r.attester << ','
                << to_string(r.outcome) << '\n';
        }
    }
    {
        std::ofstream out = open_out(base + "_se.csv");
        out << "tick,squared_error,max_abs_error\n";
        for (const SeErrorRecord& s : trace.se_errors) {
            out << s.tick << ',' << format_double(s.squared) << ','
                << format_double(s.max_abs) << '\n';
        }
    }
    {
        std::ofstream out = open_out(base + "_evictions.csv");
        out << "tick,agent,votes,n_active_before\n";
        for (const EvictionRecord& ev : trace.evictions) {
            out << ev.tick << ',' << ev.agent << ',' << ev.votes << ','
                << ev.n_active_before << '\n';
        }
    }
    {
        std::ofstream out = open_out(base + "_elections.csv");
        out << "tick,round,leader,leader_round_id,k,n_valid,n_invalid,alg\n";
        for (const ElectionRecord& er : trace.elections) {
            out << er.tick << ',' << er.round << ',' << er.transcript.leader << ','
                << er.transcript.leader_round_id << ',' << er.transcript.k << ','
                << er.transcript.sorted_ids.size() << ','
                << er.transcript.invalid_revealers.size() << ','
                << to_string(er.transcript.alg) << '\n';
        }
    }
    {
        std::ofstream out = open_out(base + "_trust.csv");
        out << "tick,observer,subject,p\n";
        const std::size_t n = trace.final_trust.size();
        for (const TrustSnapshot& s : trace.trust_snapshots) {
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t k = 0; k < n; ++k) {
                    out << s.tick << ',' << i << ',' << k << ','
                        << format_double(s.p[i * n + k]) << '\n';
                }
            }
        }
    }
}

nlohmann::ordered_json sweep_json(const SweepConfig& cfg, const SweepResult& result)
{
    nlohmann::ordered_json j;
    j["config"] = sweep_config_json(cfg);
    nlohmann::ordered_json cells = nlohmann::ordered_json::array();
    for (const SweepCellResult& c : result.cells) {
        nlohmann::ordered_json jc;
        jc["n_agents"] = c.n_agents;
        jc["m"] = c.m_malicious;
        jc["runs"] = c.runs;
        jc["correct"] = c.correct;
        jc["missed"] = c.missed;
        jc["false_evictions"] = c.false_evictions;
        jc["malicious_evicted"] = c.malicious_evicted;
        jc["malicious_total"] = c.malicious_total;
        jc["honest_evicted"] = c.honest_evicted;
        jc["mean_last_eviction_tick"] = c.mean_last_eviction_tick;
        cells.push_back(std::move(jc));
    }
    j["cells"] = std::move(cells);
    return j;
}

void write_sweep_json(const SweepConfig& cfg, const SweepResult& result,
                      const std::string& path)
{
    std::ofstream out = open_out(path);
    out << sweep_json(cfg, result).dump(2) << '\n';
}

void write_sweep_csv(const SweepResult& result, const std::string& path)
{
    std::ofstream out = open_out(path);
    out << "n_agents,m,runs,correct,missed,false_evictions,malicious_evicted,"
           "malicious_total,honest_evicted,mean_last_eviction_tick\n";
    for (const SweepCellResult& c : result.cells) {
        out << c.n_agents << ',' << c.m_malicious << ',' << c.runs << ',' << c.correct
            << ',' << c.missed << ',' << c.false_evictions << ',' << c.malicious_evicted
            << ',' << c.malicious_total << ',' << c.honest_evicted << ','
            << format_double(c.mean_last_eviction_tick) << '\n';
    }
}

} // namespace trustnet
