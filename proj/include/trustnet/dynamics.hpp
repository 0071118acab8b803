#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "trustnet/election.hpp"
#include "trustnet/rng.hpp"

namespace trustnet::dynamics {

// +1 honest / -1 malicious labels over n agents. At least one agent must be
// honest: the tracked state is the trust held by honest observers.
class HonestyLabeling {
public:
    static HonestyLabeling from_malicious(std::uint32_t n,
                                          std::span<const AgentId> malicious);

    std::uint32_t n() const { return n_; }
    bool honest(AgentId j) const { return honest_[j] != 0; }
    int e(AgentId j) const { return honest_[j] != 0 ? 1 : -1; }
    const std::vector<AgentId>& honest_agents() const { return honest_list_; }
    std::uint32_t n_honest() const
    {
        return static_cast<std::uint32_t>(honest_list_.size());
    }
    std::uint32_t n_malicious() const { return n_ - n_honest(); }

    // Honest observers keep trust in themselves pinned at 1, so the protocol
    // only ever reaches the desired or inverted profile when the malicious
    // count stays strictly below N/2 - 1.
    bool nominal_threat() const { return 2ull * n_malicious() + 2 < n_; }

private:
    std::uint32_t n_ = 0;
    std::vector<char> honest_;
    std::vector<AgentId> honest_list_;
};

// Trust held by honest observers: row r is the opinion vector of the r-th
// honest agent (ascending agent order), length n. Entries live in [0, 1] and
// each observer's own column is pinned at 1.
struct TrustState {
    std::uint32_t n_honest = 0;
    std::uint32_t n = 0;
    std::vector<double> p; // row-major, n_honest x n

    double at(std::uint32_t row, std::uint32_t col) const { return p[row * n + col]; }
    double& at(std::uint32_t row, std::uint32_t col) { return p[row * n + col]; }
};

TrustState all_ones(const HonestyLabeling& lab);
// Desired fixed point: indicator of the honest set on off-diagonal columns.
TrustState p_star(const HonestyLabeling& lab);
// Inverted fixed point: indicator of the malicious set off the diagonal,
// diagonal kept at 1 (the iterate never moves an observer's self-trust).
TrustState q_state(const HonestyLabeling& lab);
// Deterministic profile with every off-diagonal entry in [0.2, 0.8]: strictly
// inside the cube, where no single update can reach a bound.
TrustState interior_profile(const HonestyLabeling& lab);

struct PartialSums {
    double ph = 0.0; // trust mass held in honest agents other than i, j
    double pm = 0.0; // trust mass held in malicious agents other than i, j
};

// i must be honest. Sums row i of the state over H \ {i, j} and M \ {i, j}.
PartialSums partial_sums(const TrustState& s, const HonestyLabeling& lab, AgentId i,
                         AgentId j);

// Projected mean drift of the idealized attestation process, one entry per
// (honest observer, subject). Interior entries carry
// e_j (ph - pm) / (N (N-1)); entries at the unit bounds keep only the inward
// component; diagonal entries are 0 (self-trust is pinned).
//
// drift_reference is the entry-by-entry definition kept for testing;
// drift computes the same field through per-row prefix sums and OpenMP.
std::vector<double> drift_reference(const TrustState& s, const HonestyLabeling& lab);
std::vector<double> drift(const TrustState& s, const HonestyLabeling& lab);

struct IntegrateOptions {
    double dt = 0.01;
    double horizon = 200.0;
    std::uint32_t sample_stride = 0; // 0: pick ~100 samples automatically
};

struct Trajectory {
    std::vector<double> times;
    std::vector<TrustState> states; // sampled, includes t=0 and the endpoint
};

// Forward Euler on the interior field with projection onto [0,1] after every
// step; the projection realizes the boundary branches of the drift. Rejects
// dt <= 0, dt >= 1 and horizon < 0.
Trajectory integrate(const TrustState& start, const HonestyLabeling& lab,
                     const IntegrateOptions& opts = {});

enum class Settlement { correct_identification, inverted, other };

struct SettlementReport {
    Settlement kind = Settlement::other;
    double dist_p_star = 0.0; // max-abs off-diagonal distance
    double dist_q = 0.0;
};

SettlementReport classify_settlement(const TrustState& final_state,
                                     const HonestyLabeling& lab, double tol);

struct MeanDriftCheck {
    std::vector<double> estimate; // Monte-Carlo projected increment / step
    std::vector<double> std_error;
    std::vector<double> field; // drift() at the same state
    double max_z = 0.0;        // worst |estimate - field| in standard errors
    double max_abs_dev = 0.0;
};

// Monte-Carlo estimate of the expected one-step projected increment under a
// uniform verifier/attester pair and idealized attestation (report sign
// e_k e_j), divided by the step size. Observers skip reports they issued
// themselves; that convention makes the drift field the exact mean at any
// state whose off-diagonal entries sit at least `step` inside the unit
// bounds. At a pinned entry the two objects differ by design: the estimate
// averages clamped increments while the field projects the net drift.
// Deterministic for a given rng state regardless of thread count.
MeanDriftCheck mean_drift_check(const TrustState& s, const HonestyLabeling& lab,
                                std::uint64_t samples, double step, Rng& rng);

struct StochasticOptions {
    std::uint64_t steps = 20000;
    bool diminishing = true; // a(t) = 1/(t+1); otherwise fixed_step
    double fixed_step = 0.0;
    // Stop once every honest-row entry sits exactly on the clamped fixed
    // profile (1 toward honest agents, 0 toward malicious ones). That state
    // is invariant under every further clamped update, so stopping there
    // returns the same matrix the full step budget would.
    bool stop_at_fixed_point = false;
};

// The projected stochastic iterates themselves: one uniformly drawn
// verifier/attester pair per step with idealized report signs, diminishing
// steps by default.
TrustState run_stochastic(const HonestyLabeling& lab, const TrustState& start,
                          const StochasticOptions& opts, Rng& rng);

} // namespace trustnet::dynamics
