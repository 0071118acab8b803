#include "trustnet/configio.hpp"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <utility>

#include "trustnet/errors.hpp"

namespace trustnet {

namespace {

// Strict object walker: every key must be consumed by a get_* call or the
// final finish() throws. Integer reads range-check before narrowing.
class ObjectReader {
public:
    ObjectReader(const nlohmann::json& j, std::string what)
        : j_(j), what_(std::move(what))
    {
        if (!j_.is_object()) {
            throw ConfigError(what_ + ": expected a JSON object");
        }
    }

    bool has(const char* key) const { return j_.contains(key); }

    bool get_u64(const char* key, std::uint64_t& out)
    {
        const nlohmann::json* v = claim(key);
        if (!v) {
            return false;
        }
        if (!v->is_number_integer() ||
            (!v->is_number_unsigned() && v->get<std::int64_t>() < 0)) {
            throw ConfigError(what_ + ": '" + key + "' must be a nonnegative integer");
        }
        out = v->get<std::uint64_t>();
        return true;
    }

    bool get_u32(const char* key, std::uint32_t& out)
    {
        std::uint64_t wide = 0;
        if (!get_u64(key, wide)) {
            return false;
        }
        if (wide > std::numeric_limits<std::uint32_t>::max()) {
            throw ConfigError(what_ + ": '" + key + "' is out of range");
        }
        out = static_cast<std::uint32_t>(wide);
        return true;
    }

    bool get_f64(const char* key, double& out)
    {
        const nlohmann::json* v = claim(key);
        if (!v) {
            return false;
        }
        if (!v->is_number()) {
            throw ConfigError(what_ + ": '" + key + "' must be a number");
        }
        out = v->get<double>();
        return true;
    }

    bool get_bool(const char* key, bool& out)
    {
        const nlohmann::json* v = claim(key);
        if (!v) {
            return false;
        }
        if (!v->is_boolean()) {
            throw ConfigError(what_ + ": '" + key + "' must be a boolean");
        }
        out = v->get<bool>();
        return true;
    }

    bool get_str(const char* key, std::string& out)
    {
        const nlohmann::json* v = claim(key);
        if (!v) {
            return false;
        }
        if (!v->is_string()) {
            throw ConfigError(what_ + ": '" + key + "' must be a string");
        }
        out = v->get<std::string>();
        return true;
    }

    bool get_ids(const char* key, std::vector<AgentId>& out)
    {
        const nlohmann::json* v = claim(key);
        if (!v) {
            return false;
        }
        if (!v->is_array()) {
            throw ConfigError(what_ + ": '" + key + "' must be an array");
        }
        out.clear();
        for (const nlohmann::json& e : *v) {
            if (!e.is_number_integer() || (!e.is_number_unsigned() && e.get<std::int64_t>() < 0)) {
                throw ConfigError(what_ + ": '" + key +
                                  "' entries must be nonnegative integers");
            }
            const std::uint64_t wide = e.get<std::uint64_t>();
            if (wide > std::numeric_limits<AgentId>::max()) {
                throw ConfigError(what_ + ": '" + key + "' entry is out of range");
            }
            out.push_back(static_cast<AgentId>(wide));
        }
        return true;
    }

    const nlohmann::json* claim(const char* key)
    {
        auto it = j_.find(key);
        if (it == j_.end()) {
            return nullptr;
        }
        seen_.insert(key);
        return &*it;
    }

    void finish() const
    {
        for (const auto& item : j_.items()) {
            if (!seen_.count(item.key())) {
                throw ConfigError(what_ + ": unknown key '" + item.key() + "'");
            }
        }
    }

private:
    const nlohmann::json& j_;
    std::string what_;
    std::set<std::string> seen_;
};

std::string resolve_path(const std::string& value, const std::string& base_dir)
{
    namespace fs = std::filesystem;
    fs::path p(value);
    if (p.is_relative() && !base_dir.empty()) {
        p = fs::path(base_dir) / p;
    }
    return p.lexically_normal().string();
}

} // namespace

std::string to_string(DynMode m)
{
    switch (m) {
    case DynMode::drift:
        return "drift";
    case DynMode::integrate:
        return "integrate";
    case DynMode::stochastic:
        return "stochastic";
    case DynMode::mean_check:
        return "mean_check";
    }
    return "integrate";
}

DynMode dyn_mode_from_string(const std::string& name)
{
    if (name == "drift") {
        return DynMode::drift;
    }
    if (name == "integrate") {
        return DynMode::integrate;
    }
    if (name == "stochastic") {
        return DynMode::stochastic;
    }
    if (name == "mean_check") {
        return DynMode::mean_check;
    }
    throw ConfigError("unknown dynamics mode: " + name);
}

void validate_dynamics(const DynamicsConfig& cfg)
{
    if (cfg.n_agents < 2) {
        throw ConfigError("dynamics needs at least two agents");
    }
    if (!std::is_sorted(cfg.malicious.begin(), cfg.malicious.end()) ||
        std::adjacent_find(cfg.malicious.begin(), cfg.malicious.end()) !=
            cfg.malicious.end()) {
        throw ConfigError("malicious agent list must be ascending and unique");
    }
    if (!cfg.malicious.empty() && cfg.malicious.back() >= cfg.n_agents) {
        throw ConfigError("malicious agent id out of range");
    }
    if (cfg.malicious.size() >= cfg.n_agents) {
        throw ConfigError("at least one agent must stay honest");
    }
    if (cfg.start != "ones" && cfg.start != "p_star" && cfg.start != "q" &&
        cfg.start != "interior") {
        throw ConfigError("start must be one of ones, p_star, q, interior");
    }
    if (!(cfg.dt > 0.0) || cfg.dt >= 1.0) {
        throw ConfigError("dt must lie in (0, 1)");
    }
    if (cfg.horizon < 0.0) {
        throw ConfigError("horizon must be nonnegative");
    }
    if (cfg.mode == DynMode::stochastic && !cfg.diminishing &&
        !(cfg.fixed_step > 0.0)) {
        throw ConfigError("fixed-step iterates need fixed_step > 0");
    }
    if (cfg.stop_at_fixed_point && cfg.mode != DynMode::stochastic) {
        throw ConfigError("stop_at_fixed_point applies to stochastic mode only");
    }
    if (cfg.mode == DynMode::mean_check) {
        if (cfg.samples == 0) {
            throw ConfigError("mean_check needs samples > 0");
        }
        if (!(cfg.step > 0.0) || cfg.step >= 1.0) {
            throw ConfigError("mean_check step must lie in (0, 1)");
        }
    }
    if (!(cfg.tol > 0.0)) {
        throw ConfigError("tol must be positive");
    }
}

ScenarioConfig scenario_config_from_json(const nlohmann::json& j,
                                         const std::string& base_dir)
{
    ObjectReader r(j, "scenario config");
    ScenarioConfig cfg;
    r.get_u32("n_agents", cfg.n_agents);
    r.get_ids("malicious", cfg.malicious);
    std::string word;
    if (r.get_str("strategy", word)) {
        cfg.strategy = strategy_from_string(word);
    }
    if (r.get_str("step_rule", word)) {
        cfg.step_rule = step_kind_from_string(word);
    }
    r.get_u32("window_ticks", cfg.window_ticks);
    r.get_u64("n_samples", cfg.n_samples);
    r.get_u64("max_ticks", cfg.max_ticks);
    if (r.get_str("grid", word) && !word.empty()) {
        cfg.grid_path = resolve_path(word, base_dir);
    }
    r.get_u64("seed", cfg.seed);
    r.get_bool("random_verifier", cfg.random_verifier);
    r.get_u64("malicious_from_tick", cfg.malicious_from_tick);
    r.get_bool("stop_on_identification", cfg.stop_on_identification);
    r.get_u32("image_len", cfg.image_len);
    if (r.get_str("hash_alg", word)) {
        cfg.hash_alg = hash_alg_from_string(word);
    }
    r.get_f64("se_bias", cfg.se_bias);
    r.get_f64("meas_sigma", cfg.meas_sigma);
    r.get_f64("process_noise", cfg.process_noise);
    r.get_u32("trust_stride", cfg.trust_stride);
    r.finish();
    return cfg;
}

nlohmann::ordered_json scenario_config_json(const ScenarioConfig& cfg)
{
    nlohmann::ordered_json j;
    j["n_agents"] = cfg.n_agents;
    j["malicious"] = cfg.malicious;
    j["strategy"] = to_string(cfg.strategy);
    j["step_rule"] = to_string(cfg.step_rule);
    j["window_ticks"] = cfg.window_ticks;
    j["n_samples"] = cfg.n_samples;
    j["max_ticks"] = cfg.max_ticks;
    if (cfg.grid_path) {
        j["grid"] = *cfg.grid_path;
    }
    j["seed"] = cfg.seed;
    j["random_verifier"] = cfg.random_verifier;
    j["malicious_from_tick"] = cfg.malicious_from_tick;
    j["stop_on_identification"] = cfg.stop_on_identification;
    j["image_len"] = cfg.image_len;
    j["hash_alg"] = to_string(cfg.hash_alg);
    j["se_bias"] = cfg.se_bias;
    j["meas_sigma"] = cfg.meas_sigma;
    j["process_noise"] = cfg.process_noise;
    j["trust_stride"] = cfg.trust_stride;
    return j;
}

SweepConfig sweep_config_from_json(const nlohmann::json& j, const std::string& base_dir)
{
    ObjectReader r(j, "sweep config");
    SweepConfig sc;
    if (const nlohmann::json* base = r.claim("base")) {
        sc.base = scenario_config_from_json(*base, base_dir);
    }
    const nlohmann::json* cells = r.claim("cells");
    if (!cells) {
        throw ConfigError("sweep config: missing 'cells'");
    }
    if (!cells->is_array() || cells->empty()) {
        throw ConfigError("sweep config: 'cells' must be a nonempty array");
    }
    for (const nlohmann::json& c : *cells) {
        ObjectReader cr(c, "sweep cell");
        SweepCell cell;
        if (!cr.get_u32("n_agents", cell.n_agents)) {
            throw ConfigError("sweep cell: missing 'n_agents'");
        }
        if (!cr.get_u32("m", cell.m_malicious)) {
            throw ConfigError("sweep cell: missing 'm'");
        }
        cr.finish();
        sc.cells.push_back(cell);
    }
    r.get_u32("runs_per_cell", sc.runs_per_cell);
    r.get_u64("seed0", sc.seed0);
    r.finish();
    return sc;
}

nlohmann::ordered_json sweep_config_json(const SweepConfig& sc)
{
    nlohmann::ordered_json j;
    j["base"] = scenario_config_json(sc.base);
    nlohmann::ordered_json cells = nlohmann::ordered_json::array();
    for (const SweepCell& c : sc.cells) {
        cells.push_back({{"n_agents", c.n_agents}, {"m", c.m_malicious}});
    }
    j["cells"] = std::move(cells);
    j["runs_per_cell"] = sc.runs_per_cell;
    j["seed0"] = sc.seed0;
    return j;
}

DynamicsConfig dynamics_config_from_json(const nlohmann::json& j)
{
    ObjectReader r(j, "dynamics config");
    DynamicsConfig cfg;
    if (!r.get_u32("n_agents", cfg.n_agents)) {
        throw ConfigError("dynamics config: missing 'n_agents'");
    }
    const bool explicit_list = r.get_ids("malicious", cfg.malicious);
    std::uint32_t m = 0;
    if (r.get_u32("m", m)) {
        if (explicit_list) {
            throw ConfigError("dynamics config: give either 'malicious' or 'm'");
        }
        // shorthand: the first m agents are the compromised ones
        cfg.malicious.resize(m);
        for (std::uint32_t a = 0; a < m; ++a) {
            cfg.malicious[a] = a;
        }
    }
    std::string word;
    if (r.get_str("mode", word)) {
        cfg.mode = dyn_mode_from_string(word);
    }
    r.get_str("start", cfg.start);
    r.get_f64("dt", cfg.dt);
    r.get_f64("horizon", cfg.horizon);
    r.get_u32("sample_stride", cfg.sample_stride);
    r.get_u64("steps", cfg.steps);
    r.get_bool("diminishing", cfg.diminishing);
    r.get_f64("fixed_step", cfg.fixed_step);
    r.get_bool("stop_at_fixed_point", cfg.stop_at_fixed_point);
    r.get_u64("samples", cfg.samples);
    r.get_f64("step", cfg.step);
    r.get_f64("tol", cfg.tol);
    r.get_u64("seed", cfg.seed);
    r.finish();
    validate_dynamics(cfg);
    return cfg;
}

nlohmann::ordered_json dynamics_config_json(const DynamicsConfig& cfg)
{
    nlohmann::ordered_json j;
    j["n_agents"] = cfg.n_agents;
    j["malicious"] = cfg.malicious;
    j["mode"] = to_string(cfg.mode);
    j["start"] = cfg.start;
    j["dt"] = cfg.dt;
    j["horizon"] = cfg.horizon;
    j["sample_stride"] = cfg.sample_stride;
    j["steps"] = cfg.steps;
    j["diminishing"] = cfg.diminishing;
    j["fixed_step"] = cfg.fixed_step;
    j["stop_at_fixed_point"] = cfg.stop_at_fixed_point;
    j["samples"] = cfg.samples;
    j["step"] = cfg.step;
    j["tol"] = cfg.tol;
    j["seed"] = cfg.seed;
    return j;
}

ConfigKind detect_config_kind(const nlohmann::json& j)
{
    if (!j.is_object()) {
        throw ConfigError("config root must be a JSON object");
    }
    if (j.contains("cells")) {
        return ConfigKind::sweep;
    }
    if (j.contains("mode")) {
        return ConfigKind::dynamics;
    }
    if (j.contains("n_bus")) {
        return ConfigKind::grid;
    }
    return ConfigKind::scenario;
}

nlohmann::json load_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open " + path);
    }
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

ScenarioConfig load_scenario_config(const std::string& path)
{
    const std::string dir = std::filesystem::path(path).parent_path().string();
    return scenario_config_from_json(load_json_file(path), dir);
}

SweepConfig load_sweep_config(const std::string& path)
{
    const std::string dir = std::filesystem::path(path).parent_path().string();
    return sweep_config_from_json(load_json_file(path), dir);
}

DynamicsConfig load_dynamics_config(const std::string& path)
{
    return dynamics_config_from_json(load_json_file(path));
}

} // namespace trustnet
