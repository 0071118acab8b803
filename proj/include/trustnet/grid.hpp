#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "trustnet/election.hpp"

namespace trustnet {

// Pi-model line: series admittance plus total shunt charging, half of which
// is stamped at each end.
struct Branch {
    std::uint32_t from = 0; // 0-based bus indices
    std::uint32_t to = 0;
    std::complex<double> y_series;
    std::complex<double> y_shunt;
};

struct TrueStateSpec {
    std::vector<std::complex<double>> base; // per-bus base voltage phasor
    double sigma = 0.0;                     // per-sample wobble around the base
};

// Network description plus the measurement assignment: bus b is monitored by
// agent bus_agents[b], which reports that bus's voltage phasor and the
// current phasor of every branch incident to it.
struct GridCase {
    std::uint32_t n_bus = 0;
    std::vector<Branch> branches;
    std::vector<AgentId> bus_agents;
    TrueStateSpec true_state;
};

// Parses the JSON case format (see data/README note in the repo README).
// Throws ConfigError on schema or consistency problems.
GridCase load_grid_case(const std::string& path);
void validate_grid_case(const GridCase& gc);

// Complex nodal admittance matrix; symmetric by construction.
Eigen::MatrixXcd build_admittance(const GridCase& gc);

// Real measurement matrix over the state [Re V_0, Im V_0, ..., Re V_n-1,
// Im V_n-1]. Rows appear per reporting agent in the given order: the
// monitored bus's (Re, Im) voltage selectors, then (Re, Im) current rows per
// incident branch in case order.
struct MeasurementPlan {
    Eigen::MatrixXd H;
    std::vector<AgentId> row_agent;
    std::vector<std::uint8_t> row_is_voltage; // bias injection targets
};

MeasurementPlan build_measurement_plan(const GridCase& gc,
                                       std::span<const AgentId> reporting);

Eigen::MatrixXd build_measurement_matrix(const GridCase& gc,
                                         std::span<const AgentId> reporting);

// True state vector for one sample: base voltages plus sigma-scaled Gaussian
// wobble on every rectangular component.
Eigen::VectorXd true_state_vector(const GridCase& gc, Rng& rng);

} // namespace trustnet
