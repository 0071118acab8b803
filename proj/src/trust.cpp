#include "trustnet/trust.hpp"

#include "trustnet/errors.hpp"

namespace trustnet {

StepRule StepRule::fixed(std::uint32_t n_active)
{
    if (n_active == 0) {
        throw PreconditionError("StepRule::fixed: zero agents");
    }
    StepRule r;
    r.n_active_ = n_active;
    return r;
}

StepRule StepRule::diminishing()
{
    StepRule r;
    r.diminishing_ = true;
    return r;
}

double StepRule::advance()
{
    if (diminishing_) {
        return 1.0 / static_cast<double>(++t_);
    }
    ++t_;
    return 1.0 / static_cast<double>(n_active_);
}

void StepRule::set_active_count(std::uint32_t n_active)
{
    if (n_active == 0) {
        throw PreconditionError("StepRule: zero agents");
    }
    n_active_ = n_active;
}

void apply_report_in_place(TrustMatrix& m, const AttestationReport& report,
                           StepRule& rule)
{
    const std::size_t n = m.size();
    const std::size_t j = report.attester;
    const std::size_t k = report.verifier;
    if (j >= n || k >= n) {
        throw PreconditionError("apply_report: agent index out of range");
    }
    if (j == k) {
        throw PreconditionError("apply_report: verifier attesting itself");
    }
    const double coeff = rule.advance();
    const double sign = report.outcome == Outcome::positive ? 1.0 : -1.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i == j) {
            continue;
        }
        // The verifier itself participates with self-trust p_kk = 1.
        m.set(i, j, project_unit(m(i, j) + sign * coeff * m(i, k)));
    }
}

TrustMatrix apply_report(const TrustMatrix& m, const AttestationReport& report,
                         StepRule& rule)
{
    TrustMatrix out = m;
    apply_report_in_place(out, report, rule);
    return out;
}

std::uint32_t eviction_votes(const TrustMatrix& m, AgentId subject,
                             std::span<const AgentId> active)
{
    if (subject >= m.size()) {
        throw PreconditionError("eviction_votes: subject out of range");
    }
    std::uint32_t votes = 0;
    for (const auto i : active) {
        if (i >= m.size()) {
            throw PreconditionError("eviction_votes: active agent out of range");
        }
        if (i != subject && m(i, subject) == 0.0) {
            ++votes;
        }
    }
    return votes;
}

bool check_eviction(std::uint32_t votes, std::uint32_t n_active)
{
    return 2ull * votes > n_active;
}

} // namespace trustnet
