#include "trustnet/estimation.hpp"

#include <cmath>

#include "trustnet/errors.hpp"

namespace trustnet {

KalmanState make_initial_state(std::uint32_t n_bus, double p0)
{
    KalmanState ks;
    ks.x = Eigen::VectorXd::Zero(2 * n_bus);
    for (std::uint32_t b = 0; b < n_bus; ++b) {
        ks.x(2 * b) = 1.0;
    }
    ks.P = p0 * Eigen::MatrixXd::Identity(2 * n_bus, 2 * n_bus);
    return ks;
}

void kalman_step(KalmanState& ks, const Eigen::VectorXd& z, const Eigen::MatrixXd& H,
                 const Eigen::VectorXd& r_diag, double q)
{
    const Eigen::Index n = ks.x.size();
    if (ks.P.rows() != n || ks.P.cols() != n || H.cols() != n || z.size() != H.rows() ||
        r_diag.size() != H.rows()) {
        throw PreconditionError("kalman_step: dimension mismatch");
    }

    // Predict under an identity transition.
    ks.P.diagonal().array() += q;

    for (Eigen::Index i = 0; i < H.rows(); ++i) {
        const auto h = H.row(i);
        const Eigen::VectorXd ph = ks.P * h.transpose();
        const double s = h.dot(ph) + r_diag(i);
        if (!(s > 0.0) || !std::isfinite(s)) {
            throw NumericalFailure("kalman_step: singular innovation variance");
        }
        const Eigen::VectorXd gain = ph / s;
        ks.x += gain * (z(i) - h.dot(ks.x));
        // Joseph update (I - g h) P (I - g h)^T + r g g^T through its rank-one
        // structure. The plain downdate P - g ph^T can leave P indefinite
        // when the prior dwarfs the measurement variance; this form cannot.
        const Eigen::MatrixXd m = ks.P - gain * ph.transpose();
        const Eigen::VectorXd mh = m * h.transpose();
        ks.P = m - mh * gain.transpose() +
               r_diag(i) * gain * gain.transpose();
    }
    // The rank-one updates drift off symmetry; fold it back.
    ks.P = 0.5 * (ks.P + ks.P.transpose()).eval();

    if (!ks.x.allFinite() || !ks.P.allFinite()) {
        throw NumericalFailure("kalman_step: non-finite update");
    }
}

double squared_error(const Eigen::VectorXd& x_est, const Eigen::VectorXd& x_true)
{
    if (x_est.size() != x_true.size()) {
        throw PreconditionError("squared_error: dimension mismatch");
    }
    return (x_est - x_true).squaredNorm();
}

double max_abs_error(const Eigen::VectorXd& x_est, const Eigen::VectorXd& x_true)
{
    if (x_est.size() != x_true.size()) {
        throw PreconditionError("max_abs_error: dimension mismatch");
    }
    return (x_est - x_true).cwiseAbs().maxCoeff();
}

SeRunResult run_se(const GridCase& gc, std::span<const AgentId> trusted,
                   std::uint32_t n_samples, KalmanState ks, Rng& rng,
                   const SeOptions& opts)
{
    const auto plan = build_measurement_plan(gc, trusted);
    if (plan.H.rows() == 0) {
        throw PreconditionError("run_se: no measurements from the trusted set");
    }
    const Eigen::VectorXd r_diag = Eigen::VectorXd::Constant(
        plan.H.rows(), opts.meas_sigma * opts.meas_sigma);

    SeRunResult out;
    out.errors.reserve(n_samples);
    for (std::uint32_t t = 0; t < n_samples; ++t) {
        const Eigen::VectorXd x_true = true_state_vector(gc, rng);
        Eigen::VectorXd z = plan.H * x_true;
        for (Eigen::Index i = 0; i < z.size(); ++i) {
            z(i) += opts.meas_sigma * rng.normal();
        }
        if (t >= opts.bias_from_sample) {
            for (const auto agent : opts.biased_agents) {
                for (Eigen::Index i = 0; i < z.size(); ++i) {
                    if (plan.row_agent[i] == agent && plan.row_is_voltage[i] != 0) {
                        z(i) += opts.bias;
                    }
                }
            }
        }
        kalman_step(ks, z, plan.H, r_diag, opts.q);
        out.errors.push_back({squared_error(ks.x, x_true), max_abs_error(ks.x, x_true)});
    }
    out.final_state = std::move(ks);
    return out;
}

} // namespace trustnet
