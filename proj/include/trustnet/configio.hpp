#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "trustnet/scenario.hpp"

namespace trustnet {

// Dynamics analysis request: which field or iterate to evaluate, and from
// which starting profile.
enum class DynMode { drift, integrate, stochastic, mean_check };

std::string to_string(DynMode m);
DynMode dyn_mode_from_string(const std::string& name);

struct DynamicsConfig {
    std::uint32_t n_agents = 0;
    std::vector<AgentId> malicious;
    DynMode mode = DynMode::integrate;
    std::string start = "ones"; // ones | p_star | q
    double dt = 0.01;
    double horizon = 200.0;
    std::uint32_t sample_stride = 0;
    std::uint64_t steps = 20000; // stochastic iterate count
    bool diminishing = true;
    double fixed_step = 0.0;
    bool stop_at_fixed_point = false; // stochastic early stop on absorption
    std::uint64_t samples = 100000; // mean_check Monte-Carlo draws
    double step = 1e-6;             // mean_check probe step
    double tol = 1e-6;              // settlement classification tolerance
    std::uint64_t seed = 1;
};

void validate_dynamics(const DynamicsConfig& cfg);

// Parsers are strict: unknown keys are rejected so a typo in a config file
// fails loudly instead of silently taking a default. A relative grid path
// resolves against the directory of the config file it appears in.
ScenarioConfig scenario_config_from_json(const nlohmann::json& j,
                                         const std::string& base_dir = "");
ScenarioConfig load_scenario_config(const std::string& path);
nlohmann::ordered_json scenario_config_json(const ScenarioConfig& cfg);

SweepConfig sweep_config_from_json(const nlohmann::json& j,
                                   const std::string& base_dir = "");
SweepConfig load_sweep_config(const std::string& path);
nlohmann::ordered_json sweep_config_json(const SweepConfig& cfg);

DynamicsConfig dynamics_config_from_json(const nlohmann::json& j);
DynamicsConfig load_dynamics_config(const std::string& path);
nlohmann::ordered_json dynamics_config_json(const DynamicsConfig& cfg);

// File-kind dispatch by distinctive keys: "cells" marks a sweep, "mode" a
// dynamics request, "n_bus" a grid case; anything else parses as a scenario.
enum class ConfigKind { scenario, sweep, dynamics, grid };
ConfigKind detect_config_kind(const nlohmann::json& j);

nlohmann::json load_json_file(const std::string& path);

} // namespace trustnet
