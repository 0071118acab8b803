#pragma once

#include <string>

#include <json.hpp>

#include "trustnet/scenario.hpp"

namespace trustnet {

// Shortest decimal form that round-trips the exact double.
std::string format_double(double v);

std::string to_string(Outcome o);

// Canonical line-oriented form of a round transcript; byte-for-byte equal
// between any two observers who derived the outcome from the same broadcast
// set.
std::string transcript_text(const ElectionTranscript& t);
nlohmann::ordered_json transcript_json(const ElectionTranscript& t);

nlohmann::ordered_json trace_json(const ScenarioTrace& trace);
void write_trace_json(const ScenarioTrace& trace, const std::string& path);

// CSV bundle next to `base_path` (a trailing ".csv" is stripped):
// <base>_reports.csv, <base>_se.csv, <base>_evictions.csv,
// <base>_elections.csv and <base>_trust.csv.
void write_trace_csv(const ScenarioTrace& trace, const std::string& base_path);

nlohmann::ordered_json sweep_json(const SweepConfig& cfg, const SweepResult& result);
void write_sweep_json(const SweepConfig& cfg, const SweepResult& result,
                      const std::string& path);
void write_sweep_csv(const SweepResult& result, const std::string& path);

} // namespace trustnet
