#include "trustnet/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "trustnet/configio.hpp"
#include "trustnet/dynamics.hpp"
#include "trustnet/errors.hpp"
#include "trustnet/grid.hpp"
#include "trustnet/scenario.hpp"
#include "trustnet/trace_io.hpp"

namespace trustnet {

namespace {

void check_format(const std::string& format)
{
    if (format != "json" && format != "csv") {
        throw ConfigError("format must be json or csv");
    }
}

std::ofstream open_out(const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot write " + path);
    }
    return out;
}

std::string to_string(dynamics::Settlement s)
{
    switch (s) {
    case dynamics::Settlement::correct_identification:
        return "correct_identification";
    case dynamics::Settlement::inverted:
        return "inverted";
    case dynamics::Settlement::other:
        return "other";
    }
    return "other";
}

dynamics::TrustState start_state(const DynamicsConfig& cfg,
                                 const dynamics::HonestyLabeling& lab)
{
    if (cfg.start == "p_star") {
        return dynamics::p_star(lab);
    }
    if (cfg.start == "q") {
        return dynamics::q_state(lab);
    }
    if (cfg.start == "interior") {
        return dynamics::interior_profile(lab);
    }
    return dynamics::all_ones(lab);
}

} // namespace

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed,
            const std::string& out_path, const std::string& format)
{
    check_format(format);
    ScenarioConfig cfg = load_scenario_config(config_path);
    if (seed) {
        cfg.seed = *seed;
    }
    const ScenarioTrace trace = run_scenario(cfg);
    if (!out_path.empty()) {
        if (format == "json") {
            write_trace_json(trace, out_path);
        } else {
            write_trace_csv(trace, out_path);
        }
    }
    std::cout << "agents " << cfg.n_agents << " malicious " << cfg.malicious.size()
              << " strategy " << to_string(cfg.strategy) << " seed " << cfg.seed
              << "\n";
    std::cout << "ticks " << trace.ticks_run << " reports " << trace.reports.size()
              << " elections " << trace.elections.size() << " evictions "
              << trace.evictions.size() << "\n";
    std::cout << "outcome " << trace.outcome << " identified "
              << (trace.identified ? 1 : 0) << " identified_tick "
              << trace.identified_tick << "\n";
    std::cout << "min_honest_at_stop " << format_double(trace.min_honest_trust_at_stop)
              << " max_malicious_at_stop "
              << format_double(trace.max_malicious_trust_at_stop) << "\n";
    return 0;
}

int cmd_sweep(const std::string& config_path, int jobs, const std::string& out_path,
              const std::string& format)
{
    check_format(format);
    const SweepConfig cfg = load_sweep_config(config_path);
    const SweepResult result = run_sweep(cfg, jobs);
    if (!out_path.empty()) {
        if (format == "json") {
            write_sweep_json(cfg, result, out_path);
        } else {
            write_sweep_csv(result, out_path);
        }
    }
    for (const SweepCellResult& c : result.cells) {
        std::cout << "n " << c.n_agents << " m " << c.m_malicious << " runs " << c.runs
                  << " correct " << c.correct << " missed " << c.missed
                  << " false_evictions " << c.false_evictions << " malicious_evicted "
                  << c.malicious_evicted << "/" << c.malicious_total
                  << " honest_evicted " << c.honest_evicted << "\n";
    }
    return 0;
}

int cmd_dynamics(const std::string& config_path, std::optional<std::uint64_t> seed,
                 const std::string& out_path, const std::string& format)
{
    check_format(format);
    DynamicsConfig cfg = load_dynamics_config(config_path);
    if (seed) {
        cfg.seed = *seed;
    }
    const dynamics::HonestyLabeling lab =
        dynamics::HonestyLabeling::from_malicious(cfg.n_agents, cfg.malicious);
    const dynamics::TrustState start = start_state(cfg, lab);

    nlohmann::ordered_json j = dynamics_config_json(cfg);
    std::string csv;

    switch (cfg.mode) {
    case DynMode::drift: {
        const std::vector<double> field = dynamics::drift(start, lab);
        double max_abs = 0.0;
        for (const double v : field) {
            max_abs = std::max(max_abs, std::abs(v));
        }
        j["max_abs_drift"] = max_abs;
        csv = "max_abs_drift," + format_double(max_abs) + "\n";
        std::cout << "max_abs_drift " << format_double(max_abs) << "\n";
        break;
    }
    case DynMode::integrate: {
        const dynamics::Trajectory traj = dynamics::integrate(
            start, lab, {cfg.dt, cfg.horizon, cfg.sample_stride});
        nlohmann::ordered_json series = nlohmann::ordered_json::array();
        csv = "t,dist_p_star,dist_q\n";
        for (std::size_t s = 0; s < traj.states.size(); ++s) {
            const dynamics::SettlementReport rep =
                dynamics::classify_settlement(traj.states[s], lab, cfg.tol);
            series.push_back({{"t", traj.times[s]},
                              {"dist_p_star", rep.dist_p_star},
                              {"dist_q", rep.dist_q}});
            csv += format_double(traj.times[s]) + "," +
                   format_double(rep.dist_p_star) + "," + format_double(rep.dist_q) +
                   "\n";
        }
        const dynamics::SettlementReport last =
            dynamics::classify_settlement(traj.states.back(), lab, cfg.tol);
        j["settlement"] = to_string(last.kind);
        j["dist_p_star"] = last.dist_p_star;
        j["dist_q"] = last.dist_q;
        j["series"] = std::move(series);
        std::cout << "settlement " << to_string(last.kind) << " dist_p_star "
                  << format_double(last.dist_p_star) << " dist_q "
                  << format_double(last.dist_q) << "\n";
        break;
    }
    case DynMode::stochastic: {
        Rng rng(cfg.seed);
        const dynamics::TrustState final_state = dynamics::run_stochastic(
            lab, start,
            {cfg.steps, cfg.diminishing, cfg.fixed_step, cfg.stop_at_fixed_point},
            rng);
        const dynamics::SettlementReport rep =
            dynamics::classify_settlement(final_state, lab, cfg.tol);
        j["settlement"] = to_string(rep.kind);
        j["dist_p_star"] = rep.dist_p_star;
        j["dist_q"] = rep.dist_q;
        csv = "settlement," + to_string(rep.kind) + "\ndist_p_star," +
              format_double(rep.dist_p_star) + "\ndist_q," + format_double(rep.dist_q) +
              "\n";
        std::cout << "settlement " << to_string(rep.kind) << " dist_p_star "
                  << format_double(rep.dist_p_star) << " dist_q "
                  << format_double(rep.dist_q) << "\n";
        break;
    }
    case DynMode::mean_check: {
        Rng rng(cfg.seed);
        const dynamics::MeanDriftCheck rep =
            dynamics::mean_drift_check(start, lab, cfg.samples, cfg.step, rng);
        j["samples"] = cfg.samples;
        j["max_z"] = rep.max_z;
        j["max_abs_dev"] = rep.max_abs_dev;
        csv = "samples," + std::to_string(cfg.samples) + "\nmax_z," +
              format_double(rep.max_z) + "\nmax_abs_dev," +
              format_double(rep.max_abs_dev) + "\n";
        std::cout << "max_z " << format_double(rep.max_z) << " max_abs_dev "
                  << format_double(rep.max_abs_dev) << "\n";
        break;
    }
    }

    if (!out_path.empty()) {
        std::ofstream out = open_out(out_path);
        if (format == "json") {
            out << j.dump(2) << '\n';
        } else {
            out << csv;
        }
    }
    return 0;
}

int cmd_validate(const std::string& config_path)
{
    const nlohmann::json j = load_json_file(config_path);
    const std::string dir = std::filesystem::path(config_path).parent_path().string();
    switch (detect_config_kind(j)) {
    case ConfigKind::scenario: {
        const ScenarioConfig cfg = scenario_config_from_json(j, dir);
        validate_scenario(cfg);
        if (cfg.grid_path) {
            const GridCase gc = load_grid_case(*cfg.grid_path);
            validate_grid_case(gc);
        }
        std::cout << "ok scenario\n";
        break;
    }
    case ConfigKind::sweep: {
        const SweepConfig cfg = sweep_config_from_json(j, dir);
        for (const SweepCell& cell : cfg.cells) {
            if (cell.n_agents < 2 || cell.m_malicious >= cell.n_agents) {
                throw ConfigError("sweep cell must keep an honest majority possible");
            }
        }
        if (cfg.base.grid_path) {
            const GridCase gc = load_grid_case(*cfg.base.grid_path);
            validate_grid_case(gc);
        }
        std::cout << "ok sweep\n";
        break;
    }
    case ConfigKind::dynamics: {
        dynamics_config_from_json(j);
        std::cout << "ok dynamics\n";
        break;
    }
    case ConfigKind::grid: {
        const GridCase gc = load_grid_case(config_path);
        validate_grid_case(gc);
        std::cout << "ok grid\n";
        break;
    }
    }
    return 0;
}

} // namespace trustnet
