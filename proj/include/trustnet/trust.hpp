#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "trustnet/election.hpp"

namespace trustnet {

enum class Outcome : std::uint8_t { negative = 0, positive = 1 };

struct AttestationReport {
    std::uint64_t tick = 0;
    AgentId verifier = 0;
    AgentId attester = 0;
    Outcome outcome = Outcome::negative;
};

inline double project_unit(double x)
{
    return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x);
}

// Dense trust matrix; row = observer, column = subject. Starts all-ones and
// keeps every entry in [0, 1] with an exact 1 on the diagonal: updates never
// touch an observer's opinion of itself.
class TrustMatrix {
public:
    explicit TrustMatrix(std::size_t n) : n_(n), p_(n * n, 1.0) {}

    std::size_t size() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return p_[i * n_ + j]; }
    void set(std::size_t i, std::size_t j, double v) { p_[i * n_ + j] = v; }
    std::span<const double> row(std::size_t i) const
    {
        return {p_.data() + i * n_, n_};
    }
    const std::vector<double>& data() const { return p_; }

    bool operator==(const TrustMatrix&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<double> p_;
};

// Update magnitude rule. fixed: |delta| = p_ik / n_active, n_active tracking
// the live agent count. diminishing: |delta| = p_ik / (t + 1) with one global
// counter incremented per report.
class StepRule {
public:
    static StepRule fixed(std::uint32_t n_active);
    static StepRule diminishing();

    // Coefficient for the next report; advances the diminishing counter.
    double advance();
    void set_active_count(std::uint32_t n_active);
    std::uint64_t reports_seen() const { return t_; }

private:
    bool diminishing_ = false;
    std::uint32_t n_active_ = 0;
    std::uint64_t t_ = 0;
};

// Applies one broadcast report: every observer i != attester j moves its
// opinion of j by +/- coeff * p[i][verifier], projected back onto [0, 1].
// Consumes exactly one step coefficient. Throws PreconditionError when
// verifier == attester or either index is out of range.
void apply_report_in_place(TrustMatrix& m, const AttestationReport& report,
                           StepRule& rule);

TrustMatrix apply_report(const TrustMatrix& m, const AttestationReport& report,
                         StepRule& rule);

// Number of active observers (other than the subject) whose opinion of
// `subject` sits at exactly zero.
std::uint32_t eviction_votes(const TrustMatrix& m, AgentId subject,
                             std::span<const AgentId> active);

// Strict majority of the active agents.
bool check_eviction(std::uint32_t votes, std::uint32_t n_active);

} // namespace trustnet
