#include "trustnet/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "trustnet/errors.hpp"

namespace trustnet::dynamics {

namespace {

// Entries below this count are cheaper single-threaded.
constexpr std::size_t kParallelCutoff = 1 << 12;

double clamp01(double x)
{
    return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x);
}

// Projected drift of one entry from its interior value x / D.
double project_branch(double p, double x, double inv_d)
{
    if (p >= 1.0) {
        return std::min(x, 0.0) * inv_d;
    }
    if (p <= 0.0) {
        return std::max(x, 0.0) * inv_d;
    }
    return x * inv_d;
}

} // namespace

HonestyLabeling HonestyLabeling::from_malicious(std::uint32_t n,
                                                std::span<const AgentId> malicious)
{
    if (n == 0) {
        throw PreconditionError("labeling: empty network");
    }
    HonestyLabeling lab;
    lab.n_ = n;
    lab.honest_.assign(n, 1);
    for (const auto j : malicious) {
        if (j >= n) {
            throw PreconditionError("labeling: malicious agent out of range");
        }
        lab.honest_[j] = 0;
    }
    for (AgentId j = 0; j < n; ++j) {
        if (lab.honest_[j] != 0) {
            lab.honest_list_.push_back(j);
        }
    }
    if (lab.honest_list_.empty()) {
        throw PreconditionError("labeling: at least one agent must be honest");
    }
    return lab;
}

TrustState all_ones(const HonestyLabeling& lab)
{
    TrustState s;
    s.n_honest = lab.n_honest();
    s.n = lab.n();
    s.p.assign(static_cast<std::size_t>(s.n_honest) * s.n, 1.0);
    return s;
}

TrustState p_star(const HonestyLabeling& lab)
{
    TrustState s = all_ones(lab);
    for (std::uint32_t r = 0; r < s.n_honest; ++r) {
        for (std::uint32_t j = 0; j < s.n; ++j) {
            s.at(r, j) = lab.honest(j) ? 1.0 : 0.0;
        }
    }
    return s;
}

TrustState q_state(const HonestyLabeling& lab)
{
    TrustState s = all_ones(lab);
    for (std::uint32_t r = 0; r < s.n_honest; ++r) {
        const AgentId self = lab.honest_agents()[r];
        for (std::uint32_t j = 0; j < s.n; ++j) {
            s.at(r, j) = lab.honest(j) ? 0.0 : 1.0;
        }
        s.at(r, self) = 1.0;
    }
    return s;
}

TrustState interior_profile(const HonestyLabeling& lab)
{
    TrustState s = all_ones(lab);
    for (std::uint32_t r = 0; r < s.n_honest; ++r) {
        const AgentId self = lab.honest_agents()[r];
        for (std::uint32_t j = 0; j < s.n; ++j) {
            const std::uint32_t mix = (r * 31u + j * 17u) % 97u;
            s.at(r, j) = 0.2 + 0.6 * (static_cast<double>(mix) / 96.0);
        }
        s.at(r, self) = 1.0;
    }
    return s;
}

PartialSums partial_sums(const TrustState& s, const HonestyLabeling& lab, AgentId i,
                         AgentId j)
{
    if (!lab.honest(i)) {
        throw PreconditionError("partial_sums: observer must be honest");
    }
    const auto& honest = lab.honest_agents();
    const auto row = static_cast<std::uint32_t>(
        std::lower_bound(honest.begin(), honest.end(), i) - honest.begin());

    PartialSums sums;
    for (AgentId k = 0; k < s.n; ++k) {
        if (k == i || k == j) {
            continue;
        }
        if (lab.honest(k)) {
            sums.ph += s.at(row, k);
        } else {
            sums.pm += s.at(row, k);
        }
    }
    return sums;
}

std::vector<double> drift_reference(const TrustState& s, const HonestyLabeling& lab)
{
    const double inv_d = 1.0 / (static_cast<double>(s.n) * (s.n - 1));
    std::vector<double> h(s.p.size(), 0.0);
    for (std::uint32_t r = 0; r < s.n_honest; ++r) {
        const AgentId i = lab.honest_agents()[r];
        for (AgentId j = 0; j < s.n; ++j) {
            if (j == i) {
                continue; // self-trust is pinned
            }
            const auto sums = partial_sums(s, lab, i, j);
            const double x = lab.e(j) * (sums.ph - sums.pm);
            h[r * s.n + j] = project_branch(s.at(r, j), x, inv_d);
        }
    }
    return h;
}

std::vector<double> drift(const TrustState& s, const HonestyLabeling& lab)
{
    const auto n = s.n;
    const double inv_d = 1.0 / (static_cast<double>(n) * (n - 1));
    std::vector<double> h(s.p.size(), 0.0);

    const auto row_kernel = [&](std::uint32_t r) {
        const AgentId i = lab.honest_agents()[r];
        const double* row = s.p.data() + static_cast<std::size_t>(r) * n;
        // Row totals over each label class; per-entry sums fall out by
        // removing the observer itself and the subject.
        double sum_h = 0.0;
        double sum_m = 0.0;
        for (AgentId k = 0; k < n; ++k) {
            if (lab.honest(k)) {
                sum_h += row[k];
            } else {
                sum_m += row[k];
            }
        }
        double* out = h.data() + static_cast<std::size_t>(r) * n;
        for (AgentId j = 0; j < n; ++j) {
            if (j == i) {
                continue;
            }
            const double pij = row[j];
            const double ph = sum_h - row[i] - (lab.honest(j) ? pij : 0.0);
            const double pm = sum_m - (lab.honest(j) ? 0.0 : pij);
            const double x = lab.e(j) * (ph - pm);
            out[j] = project_branch(pij, x, inv_d);
        }
    };

    if (s.p.size() >= kParallelCutoff) {
#pragma omp parallel for schedule(static)
        for (std::uint32_t r = 0; r < s.n_honest; ++r) {
            row_kernel(r);
        }
    } else {
        for (std::uint32_t r = 0; r < s.n_honest; ++r) {
            row_kernel(r);
        }
    }
    return h;
}

Trajectory integrate(const TrustState& start, const HonestyLabeling& lab,
                     const IntegrateOptions& opts)
{
    if (!(opts.dt > 0.0) || opts.dt >= 1.0) {
        throw PreconditionError("integrate: step size must lie in (0, 1)");
    }
    if (opts.horizon < 0.0) {
        throw PreconditionError("integrate: negative horizon");
    }
    const auto steps = static_cast<std::uint64_t>(std::llround(opts.horizon / opts.dt));
    std::uint32_t stride = opts.sample_stride;
    if (stride == 0) {
        stride = static_cast<std::uint32_t>(std::max<std::uint64_t>(1, steps / 100));
    }

    const auto n = start.n;
    const double inv_d = 1.0 / (static_cast<double>(n) * (n - 1));
    const bool parallel = start.p.size() >= kParallelCutoff;

    Trajectory traj;
    TrustState s = start;
    traj.times.push_back(0.0);
    traj.states.push_back(s);

    std::vector<double> field(s.p.size(), 0.0);
    for (std::uint64_t step = 1; step <= steps; ++step) {
        // Synchronous update: the whole field is evaluated at the current
        // state before any entry moves, then the step is projected back
        // onto the unit cube (which realizes the boundary drift branches).
        const auto row_step = [&](std::uint32_t r) {
            const AgentId i = lab.honest_agents()[r];
            double* row = s.p.data() + static_cast<std::size_t>(r) * n;
            double sum_h = 0.0;
            double sum_m = 0.0;
            for (AgentId k = 0; k < n; ++k) {
                if (lab.honest(k)) {
                    sum_h += row[k];
                } else {
                    sum_m += row[k];
                }
            }
            double* f = field.data() + static_cast<std::size_t>(r) * n;
            for (AgentId j = 0; j < n; ++j) {
                if (j == i) {
                    f[j] = 0.0;
                    continue;
                }
                const double pij = row[j];
                const double ph = sum_h - row[i] - (lab.honest(j) ? pij : 0.0);
                const double pm = sum_m - (lab.honest(j) ? 0.0 : pij);
                f[j] = lab.e(j) * (ph - pm) * inv_d;
            }
        };
        if (parallel) {
#pragma omp parallel for schedule(static)
            for (std::uint32_t r = 0; r < s.n_honest; ++r) {
                row_step(r);
            }
        } else {
            for (std::uint32_t r = 0; r < s.n_honest; ++r) {
                row_step(r);
            }
        }
        for (std::size_t e = 0; e < s.p.size(); ++e) {
            s.p[e] = clamp01(s.p[e] + opts.dt * field[e]);
        }
        if (step % stride == 0 || step == steps) {
            traj.times.push_back(static_cast<double>(step) * opts.dt);
            traj.states.push_back(s);
        }
    }
    return traj;
}

SettlementReport classify_settlement(const TrustState& final_state,
                                     const HonestyLabeling& lab, double tol)
{
    const TrustState star = p_star(lab);
    const TrustState inv = q_state(lab);
    SettlementReport rep;
    for (std::uint32_t r = 0; r < final_state.n_honest; ++r) {
        const AgentId i = lab.honest_agents()[r];
        for (AgentId j = 0; j < final_state.n; ++j) {
            if (j == i) {
                continue;
            }
            rep.dist_p_star = std::max(
                rep.dist_p_star, std::abs(final_state.at(r, j) - star.at(r, j)));
            rep.dist_q =
                std::max(rep.dist_q, std::abs(final_state.at(r, j) - inv.at(r, j)));
        }
    }
    if (rep.dist_p_star <= tol) {
        rep.kind = Settlement::correct_identification;
    } else if (rep.dist_q <= tol) {
        rep.kind = Settlement::inverted;
    }
    return rep;
}

MeanDriftCheck mean_drift_check(const TrustState& s, const HonestyLabeling& lab,
                                std::uint64_t samples, double step, Rng& rng)
{
    if (samples == 0 || !(step > 0.0) || step >= 1.0) {
        throw PreconditionError("mean_drift_check: bad sample count or step");
    }
    const auto n = s.n;
    if (n < 2) {
        throw PreconditionError("mean_drift_check: need at least two agents");
    }
    const std::size_t entries = s.p.size();

    // Fixed-size sample chunks with substream RNGs: the chunk results are
    // combined in chunk order, so the outcome is independent of the number
    // of OpenMP threads.
    constexpr std::uint64_t kChunk = 1 << 13;
    const auto n_chunks = static_cast<std::size_t>((samples + kChunk - 1) / kChunk);
    const std::uint64_t base_seed = rng.u64();

    std::vector<std::vector<double>> sum(n_chunks), sum_sq(n_chunks);

#pragma omp parallel for schedule(dynamic)
    for (std::size_t c = 0; c < n_chunks; ++c) {
        Rng chunk_rng = Rng::substream(base_seed, c);
        auto& acc = sum[c];
        auto& acc2 = sum_sq[c];
        acc.assign(entries, 0.0);
        acc2.assign(entries, 0.0);
        const std::uint64_t lo = static_cast<std::uint64_t>(c) * kChunk;
        const std::uint64_t hi = std::min(samples, lo + kChunk);
        for (std::uint64_t t = lo; t < hi; ++t) {
            const auto k = static_cast<AgentId>(chunk_rng.below(n));
            auto j = static_cast<AgentId>(chunk_rng.below(n - 1));
            if (j >= k) {
                ++j;
            }
            const double sign = lab.e(k) * lab.e(j);
            for (std::uint32_t r = 0; r < s.n_honest; ++r) {
                const AgentId i = lab.honest_agents()[r];
                if (i == j || i == k) {
                    continue; // observers skip their own reports
                }
                const std::size_t e = static_cast<std::size_t>(r) * n + j;
                const double inc =
                    clamp01(s.p[e] + step * sign * s.at(r, k)) - s.p[e];
                acc[e] += inc;
                acc2[e] += inc * inc;
            }
        }
    }

    MeanDriftCheck out;
    out.field = drift(s, lab);
    out.estimate.assign(entries, 0.0);
    out.std_error.assign(entries, 0.0);
    std::vector<double> total(entries, 0.0), total_sq(entries, 0.0);
    for (std::size_t c = 0; c < n_chunks; ++c) {
        for (std::size_t e = 0; e < entries; ++e) {
            total[e] += sum[c][e];
            total_sq[e] += sum_sq[c][e];
        }
    }
    const auto ns = static_cast<double>(samples);
    for (std::size_t e = 0; e < entries; ++e) {
        const double mean_inc = total[e] / ns;
        const double var_inc = std::max(0.0, total_sq[e] / ns - mean_inc * mean_inc);
        out.estimate[e] = mean_inc / step;
        out.std_error[e] = std::sqrt(var_inc / ns) / step;
        const double dev = std::abs(out.estimate[e] - out.field[e]);
        out.max_abs_dev = std::max(out.max_abs_dev, dev);
        if (dev > 0.0) {
            const double z = out.std_error[e] > 0.0
                                 ? dev / out.std_error[e]
                                 : std::numeric_limits<double>::infinity();
            out.max_z = std::max(out.max_z, z);
        }
    }
    return out;
}

TrustState run_stochastic(const HonestyLabeling& lab, const TrustState& start,
                          const StochasticOptions& opts, Rng& rng)
{
    const auto n = start.n;
    if (n < 2) {
        throw PreconditionError("run_stochastic: need at least two agents");
    }
    if (!opts.diminishing && (!(opts.fixed_step > 0.0) || opts.fixed_step >= 1.0)) {
        throw PreconditionError("run_stochastic: fixed step must lie in (0, 1)");
    }
    TrustState s = start;
    // Entries of honest rows still away from the clamped fixed profile
    // (1 toward honest agents, 0 toward malicious ones, diagonal 1). Only
    // maintained when the early stop is requested.
    std::uint64_t off_profile = 0;
    if (opts.stop_at_fixed_point) {
        for (std::uint32_t r = 0; r < s.n_honest; ++r) {
            const AgentId i = lab.honest_agents()[r];
            for (AgentId j = 0; j < n; ++j) {
                const double want = (j == i || lab.e(j) > 0.0) ? 1.0 : 0.0;
                if (s.at(r, j) != want) {
                    ++off_profile;
                }
            }
        }
        if (off_profile == 0) {
            return s;
        }
    }
    for (std::uint64_t t = 0; t < opts.steps; ++t) {
        const double a =
            opts.diminishing ? 1.0 / static_cast<double>(t + 1) : opts.fixed_step;
        const auto k = static_cast<AgentId>(rng.below(n));
        auto j = static_cast<AgentId>(rng.below(n - 1));
        if (j >= k) {
            ++j;
        }
        const double sign = lab.e(k) * lab.e(j);
        const double want = lab.e(j) > 0.0 ? 1.0 : 0.0;
        for (std::uint32_t r = 0; r < s.n_honest; ++r) {
            const AgentId i = lab.honest_agents()[r];
            if (i == j || i == k) {
                continue;
            }
            double& cell = s.at(r, j);
            const bool was_on = cell == want;
            cell = clamp01(cell + a * sign * s.at(r, k));
            if (opts.stop_at_fixed_point && was_on != (cell == want)) {
                off_profile += was_on ? 1 : std::uint64_t(-1);
            }
        }
        if (opts.stop_at_fixed_point && off_profile == 0) {
            break;
        }
    }
    return s;
}

} // namespace trustnet::dynamics
