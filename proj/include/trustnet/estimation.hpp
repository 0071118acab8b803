#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "trustnet/grid.hpp"

namespace trustnet {

struct KalmanState {
    Eigen::VectorXd x;
    Eigen::MatrixXd P;
};

// Flat-start filter state: 1 + j0 at every bus, diagonal covariance p0.
KalmanState make_initial_state(std::uint32_t n_bus, double p0 = 1e-2);

// One predict/update cycle with identity transition, process noise q * I and
// diagonal measurement covariance r_diag. Rows are folded in sequentially
// (scalar gains), which for diagonal R equals the batch gain
// P H^T (H P H^T + R)^-1 without forming or inverting the innovation matrix.
// Throws NumericalFailure on a non-positive innovation variance or a
// non-finite update, and PreconditionError on dimension mismatches.
void kalman_step(KalmanState& ks, const Eigen::VectorXd& z, const Eigen::MatrixXd& H,
                 const Eigen::VectorXd& r_diag, double q);

double squared_error(const Eigen::VectorXd& x_est, const Eigen::VectorXd& x_true);
double max_abs_error(const Eigen::VectorXd& x_est, const Eigen::VectorXd& x_true);

struct SeSample {
    double squared = 0.0;
    double max_abs = 0.0;
};

struct SeOptions {
    double meas_sigma = 0.01;            // per-row measurement noise
    double q = 1e-6;                     // process noise
    std::vector<AgentId> biased_agents;  // inject bias on their voltage rows
    double bias = 0.1;
    std::uint64_t bias_from_sample = 0;
};

struct SeRunResult {
    std::vector<SeSample> errors;
    KalmanState final_state;
};

// Fixed reporting set, one filter step per sample against freshly drawn true
// states. Biased agents overwrite their voltage rows with truth + bias.
SeRunResult run_se(const GridCase& gc, std::span<const AgentId> trusted,
                   std::uint32_t n_samples, KalmanState ks, Rng& rng,
                   const SeOptions& opts = {});

} // namespace trustnet
