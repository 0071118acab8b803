#include "trustnet/grid.hpp"

#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "trustnet/errors.hpp"

namespace trustnet {

namespace {

using nlohmann::json;

std::complex<double> branch_admittance(const json& jb, const char* re_key,
                                       const char* im_key)
{
    return {jb.value(re_key, 0.0), jb.value(im_key, 0.0)};
}

} // namespace

GridCase load_grid_case(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open grid case: " + path);
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("grid case " + path + ": " + e.what());
    }

    GridCase gc;
    try {
        gc.n_bus = j.at("n_bus").get<std::uint32_t>();
        for (const auto& jb : j.at("branches")) {
            Branch b;
            // Bus numbering in the file is 1-based, as in common case formats.
            b.from = jb.at("from").get<std::uint32_t>() - 1;
            b.to = jb.at("to").get<std::uint32_t>() - 1;
            b.y_series = branch_admittance(jb, "g", "b");
            b.y_shunt = {0.0, jb.value("bsh", 0.0)};
            gc.branches.push_back(b);
        }
        gc.bus_agents.resize(gc.n_bus);
        const auto& agents = j.at("bus_agents");
        if (agents.size() != gc.n_bus) {
            throw ConfigError("bus_agents must list one agent per bus");
        }
        for (std::uint32_t b = 0; b < gc.n_bus; ++b) {
            gc.bus_agents[b] = agents.at(b).get<AgentId>();
        }
        const auto& ts = j.at("true_state");
        for (const auto& jv : ts.at("base")) {
            gc.true_state.base.emplace_back(jv.at("re").get<double>(),
                                            jv.at("im").get<double>());
        }
        gc.true_state.sigma = ts.value("sigma", 0.0);
    } catch (const json::exception& e) {
        throw ConfigError("grid case " + path + ": " + e.what());
    }
    validate_grid_case(gc);
    return gc;
}

void validate_grid_case(const GridCase& gc)
{
    if (gc.n_bus == 0) {
        throw ConfigError("grid case: no buses");
    }
    for (const auto& b : gc.branches) {
        if (b.from >= gc.n_bus || b.to >= gc.n_bus) {
            throw ConfigError("grid case: branch endpoint out of range");
        }
        if (b.from == b.to) {
            throw ConfigError("grid case: branch connects a bus to itself");
        }
    }
    if (gc.bus_agents.size() != gc.n_bus) {
        throw ConfigError("grid case: bus_agents must cover every bus");
    }
    if (gc.true_state.base.size() != gc.n_bus) {
        throw ConfigError("grid case: true-state base must cover every bus");
    }
    if (gc.true_state.sigma < 0.0) {
        throw ConfigError("grid case: negative true-state sigma");
    }
}

Eigen::MatrixXcd build_admittance(const GridCase& gc)
{
    Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(gc.n_bus, gc.n_bus);
    for (const auto& b : gc.branches) {
        const auto half_shunt = b.y_shunt * 0.5;
        y(b.from, b.from) += b.y_series + half_shunt;
        y(b.to, b.to) += b.y_series + half_shunt;
        y(b.from, b.to) -= b.y_series;
        y(b.to, b.from) -= b.y_series;
    }
    return y;
}

namespace {

// Two rows (Re, Im) expressing the complex coefficient c on bus `bus` added
// into a measurement block starting at `row`.
void stamp_complex(Eigen::MatrixXd& h, Eigen::Index row, std::uint32_t bus,
                   std::complex<double> c)
{
    h(row, 2 * bus) += c.real();
    h(row, 2 * bus + 1) -= c.imag();
    h(row + 1, 2 * bus) += c.imag();
    h(row + 1, 2 * bus + 1) += c.real();
}

} // namespace

MeasurementPlan build_measurement_plan(const GridCase& gc,
                                       std::span<const AgentId> reporting)
{
    validate_grid_case(gc);
    const std::set<AgentId> report_set(reporting.begin(), reporting.end());

    // Pass one: count rows. Each monitored bus contributes a voltage pair
    // plus a current pair per incident branch.
    Eigen::Index rows = 0;
    for (std::uint32_t bus = 0; bus < gc.n_bus; ++bus) {
        if (!report_set.contains(gc.bus_agents[bus])) {
            continue;
        }
        rows += 2;
        for (const auto& b : gc.branches) {
            if (b.from == bus || b.to == bus) {
                rows += 2;
            }
        }
    }

    MeasurementPlan plan;
    plan.H = Eigen::MatrixXd::Zero(rows, 2 * gc.n_bus);
    plan.row_agent.resize(rows);
    plan.row_is_voltage.assign(rows, 0);

    Eigen::Index row = 0;
    for (std::uint32_t bus = 0; bus < gc.n_bus; ++bus) {
        const AgentId agent = gc.bus_agents[bus];
        if (!report_set.contains(agent)) {
            continue;
        }
        plan.H(row, 2 * bus) = 1.0;
        plan.H(row + 1, 2 * bus + 1) = 1.0;
        plan.row_agent[row] = agent;
        plan.row_agent[row + 1] = agent;
        plan.row_is_voltage[row] = 1;
        plan.row_is_voltage[row + 1] = 1;
        row += 2;
        for (const auto& b : gc.branches) {
            if (b.from != bus && b.to != bus) {
                continue;
            }
            const std::uint32_t far = b.from == bus ? b.to : b.from;
            // Current leaving `bus` into the branch:
            // I = (y_series + y_shunt/2) V_bus - y_series V_far.
            stamp_complex(plan.H, row, bus, b.y_series + b.y_shunt * 0.5);
            stamp_complex(plan.H, row, far, -b.y_series);
            plan.row_agent[row] = agent;
            plan.row_agent[row + 1] = agent;
            row += 2;
        }
    }
    return plan;
}

Eigen::MatrixXd build_measurement_matrix(const GridCase& gc,
                                         std::span<const AgentId> reporting)
{
    return build_measurement_plan(gc, reporting).H;
}

Eigen::VectorXd true_state_vector(const GridCase& gc, Rng& rng)
{
    Eigen::VectorXd x(2 * gc.n_bus);
    for (std::uint32_t bus = 0; bus < gc.n_bus; ++bus) {
        x(2 * bus) = gc.true_state.base[bus].real() + gc.true_state.sigma * rng.normal();
        x(2 * bus + 1) =
            gc.true_state.base[bus].imag() + gc.true_state.sigma * rng.normal();
    }
    return x;
}

} // namespace trustnet
