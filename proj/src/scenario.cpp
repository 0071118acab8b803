#include "trustnet/scenario.hpp"

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <tuple>
#include <utility>

#include <omp.h>

#include <Eigen/Dense>

#include "trustnet/errors.hpp"
#include "trustnet/estimation.hpp"
#include "trustnet/rng.hpp"

namespace trustnet {

std::string to_string(Strategy s)
{
    return s == Strategy::cooperative ? "cooperative" : "non_cooperative";
}

std::string to_string(StepKind k)
{
    return k == StepKind::diminishing ? "diminishing" : "fixed";
}

Strategy strategy_from_string(const std::string& name)
{
    if (name == "non_cooperative" || name == "non-cooperative") {
        return Strategy::non_cooperative;
    }
    if (name == "cooperative") {
        return Strategy::cooperative;
    }
    throw ConfigError("unknown strategy: " + name);
}

StepKind step_kind_from_string(const std::string& name)
{
    if (name == "fixed") {
        return StepKind::fixed;
    }
    if (name == "diminishing") {
        return StepKind::diminishing;
    }
    throw ConfigError("unknown step rule: " + name);
}

void validate_scenario(const ScenarioConfig& cfg)
{
    if (cfg.n_agents < 2) {
        throw ConfigError("scenario needs at least two agents");
    }
    if (!std::is_sorted(cfg.malicious.begin(), cfg.malicious.end())) {
        throw ConfigError("malicious agent list must be ascending");
    }
    if (std::adjacent_find(cfg.malicious.begin(), cfg.malicious.end()) !=
        cfg.malicious.end()) {
        throw ConfigError("malicious agent list has duplicates");
    }
    if (!cfg.malicious.empty() && cfg.malicious.back() >= cfg.n_agents) {
        throw ConfigError("malicious agent id out of range");
    }
    if (cfg.malicious.size() >= cfg.n_agents) {
        throw ConfigError("at least one agent must stay honest");
    }
    if (cfg.window_ticks == 0) {
        throw ConfigError("window_ticks must be positive");
    }
    if (cfg.n_samples == 0 && cfg.max_ticks == 0) {
        throw ConfigError("set n_samples or max_ticks");
    }
    if (cfg.image_len == 0) {
        throw ConfigError("image_len must be positive");
    }
    if (cfg.meas_sigma <= 0.0) {
        throw ConfigError("meas_sigma must be positive");
    }
    if (cfg.process_noise < 0.0) {
        throw ConfigError("process_noise must be nonnegative");
    }
}

namespace {

// Substream tags. Each protocol component draws from its own stream, so the
// consumption pattern of one component never shifts another's sequence.
constexpr std::uint64_t kStreamElections = 1;
constexpr std::uint64_t kStreamSchedule = 2;
constexpr std::uint64_t kStreamAttest = 3;
constexpr std::uint64_t kStreamImages = 4;
constexpr std::uint64_t kStreamMalicious = 5;
constexpr std::uint64_t kStreamSe = 6;

// Per honest observer: how many of the other agents it currently classifies
// correctly (malicious pinned at exactly zero, honest above 1/2), plus the
// count of observers whose whole row is correct. Updated entry by entry as
// trust changes land.
class IdentTracker {
public:
    IdentTracker(std::uint32_t n, const std::vector<std::uint8_t>& malicious)
        : n_(n), malicious_(malicious), ok_(std::size_t{n} * n, 0), row_correct_(n, 0)
    {
        std::uint32_t m = 0;
        for (std::uint32_t j = 0; j < n; ++j) {
            m += malicious[j];
        }
        for (std::uint32_t i = 0; i < n; ++i) {
            if (malicious[i]) {
                continue;
            }
            for (std::uint32_t j = 0; j < n; ++j) {
                if (j != i && !malicious[j]) {
                    ok_[std::size_t{i} * n_ + j] = 1;
                }
            }
            row_correct_[i] = n - 1 - m;
            if (row_correct_[i] == n - 1) {
                ++full_rows_;
            }
        }
    }

    void update(std::uint32_t i, std::uint32_t j, double p)
    {
        if (malicious_[i]) {
            return;
        }
        const std::uint8_t now = malicious_[j] ? (p == 0.0 ? 1 : 0) : (p > 0.5 ? 1 : 0);
        std::uint8_t& slot = ok_[std::size_t{i} * n_ + j];
        if (now == slot) {
            return;
        }
        const bool was_full = row_correct_[i] == n_ - 1;
        if (now) {
            ++row_correct_[i];
        } else {
            --row_correct_[i];
        }
        slot = now;
        const bool is_full = row_correct_[i] == n_ - 1;
        if (is_full && !was_full) {
            ++full_rows_;
        } else if (!is_full && was_full) {
            --full_rows_;
        }
    }

    bool identified() const { return 2ull * full_rows_ >= n_; }

private:
    std::uint32_t n_ = 0;
    std::vector<std::uint8_t> malicious_;
    std::vector<std::uint8_t> ok_;
    std::vector<std::uint32_t> row_correct_;
    std::uint32_t full_rows_ = 0;
};

class Harness {
public:
    Harness(const ScenarioConfig& cfg, const GridCase* grid)
        : cfg_(cfg),
          n_(cfg.n_agents),
          grid_(grid),
          trust_(cfg.n_agents),
          rule_(cfg.step_rule == StepKind::diminishing ? StepRule::diminishing()
                                                       : StepRule::fixed(cfg.n_agents)),
          malicious_flag_(cfg.n_agents, 0),
          active_flag_(cfg.n_agents, 1),
          n_active_(cfg.n_agents),
          elections_rng_(Rng::substream(cfg.seed, kStreamElections)),
          schedule_rng_(Rng::substream(cfg.seed, kStreamSchedule)),
          attest_rng_(Rng::substream(cfg.seed, kStreamAttest)),
          malicious_rng_(Rng::substream(cfg.seed, kStreamMalicious)),
          se_rng_(Rng::substream(cfg.seed, kStreamSe)),
          ident_(cfg.n_agents, make_malicious_flags(cfg))
    {
        for (const AgentId a : cfg.malicious) {
            malicious_flag_[a] = 1;
        }
        m_total_ = static_cast<std::uint32_t>(cfg.malicious.size());
        active_ids_.resize(n_);
        for (std::uint32_t a = 0; a < n_; ++a) {
            active_ids_[a] = a;
        }

        Rng images_rng = Rng::substream(cfg.seed, kStreamImages);
        reference_ = random_image(cfg.image_len, images_rng);
        tampered_images_.resize(n_);
        for (const AgentId a : cfg.malicious) {
            tampered_images_[a] = tampered(reference_, images_rng.below(cfg.image_len));
        }

        if (grid_) {
            for (const AgentId a : grid_->bus_agents) {
                if (a >= n_) {
                    throw ConfigError("grid references agent beyond n_agents");
                }
            }
            kf_ = make_initial_state(grid_->n_bus);
            rebuild_plan();
        }
    }

    ScenarioTrace run()
    {
        trace_.config = cfg_;
        trace_.nominal_threat = 2ull * m_total_ + 2 < n_;
        if (m_total_ > 0) {
            trace_.max_malicious_trust_over_time = 1.0;
        }
        if (ident_.identified()) {
            trace_.identified = true;
        }

        elect(0);

        const std::uint64_t cap = cfg_.n_samples > 0 ? cfg_.n_samples : cfg_.max_ticks;
        std::vector<AttestationEvent> events;
        std::size_t ev_idx = 0;
        std::uint64_t tick = 0;
        while (tick < cap) {
            if (tick % cfg_.window_ticks == 0) {
                events = schedule_current_window(tick);
                ev_idx = 0;
            }
            bool stopped = false;
            while (ev_idx < events.size() && events[ev_idx].tick == tick) {
                handle_event(events[ev_idx]);
                ++ev_idx;
                if (cfg_.stop_on_identification && trace_.identified) {
                    stopped = true;
                    break;
                }
            }
            if (stopped) {
                ++tick;
                break;
            }
            if (grid_) {
                se_sample(tick);
            }
            if (cfg_.trust_stride > 0 && (tick + 1) % cfg_.trust_stride == 0) {
                trace_.trust_snapshots.push_back({tick, trust_.data()});
            }
            ++tick;
        }
        trace_.ticks_run = tick;
        finalize();
        return std::move(trace_);
    }

private:
    static std::vector<std::uint8_t> make_malicious_flags(const ScenarioConfig& cfg)
    {
        std::vector<std::uint8_t> flags(cfg.n_agents, 0);
        for (const AgentId a : cfg.malicious) {
            flags[a] = 1;
        }
        return flags;
    }

    bool evil(AgentId a, std::uint64_t tick) const
    {
        return malicious_flag_[a] != 0 && tick >= cfg_.malicious_from_tick;
    }

    void elect(std::uint64_t tick)
    {
        if (active_ids_.size() < 2) {
            leader_ = active_ids_.empty() ? 0 : active_ids_[0];
            return;
        }
        for (int attempt = 0; attempt < 8; ++attempt) {
            try {
                ElectionTranscript t =
                    run_election(active_ids_, elections_rng_, cfg_.hash_alg);
                leader_ = t.leader;
                trace_.elections.push_back({tick, round_, std::move(t)});
                ++round_;
                return;
            } catch (const ElectionFailed&) {
            }
        }
        throw SimAbort("election failed repeatedly");
    }

    std::vector<AttestationEvent> schedule_current_window(std::uint64_t start)
    {
        if (active_ids_.size() < 2) {
            return {};
        }
        if (!cfg_.random_verifier) {
            return schedule_window(active_ids_, start, cfg_.window_ticks, schedule_rng_);
        }
        // Same event rate, but the verifier of each slot is itself uniform.
        const std::size_t na = active_ids_.size();
        std::vector<AttestationEvent> events;
        events.reserve(na);
        for (std::size_t s = 0; s < na; ++s) {
            AttestationEvent ev;
            ev.tick = start + schedule_rng_.below(cfg_.window_ticks);
            const std::size_t vi = schedule_rng_.below(na);
            std::size_t ai = schedule_rng_.below(na - 1);
            if (ai >= vi) {
                ++ai;
            }
            ev.verifier = active_ids_[vi];
            ev.attester = active_ids_[ai];
            events.push_back(ev);
        }
        std::sort(events.begin(), events.end(),
                  [](const AttestationEvent& a, const AttestationEvent& b) {
                      return std::tie(a.tick, a.verifier, a.attester) <
                             std::tie(b.tick, b.verifier, b.attester);
                  });
        return events;
    }

    AgentId pick_cooperative_attester(AgentId v)
    {
        std::vector<AgentId> allies;
        for (const AgentId a : cfg_.malicious) {
            if (a != v && active_flag_[a]) {
                allies.push_back(a);
            }
        }
        if (!allies.empty()) {
            return allies[malicious_rng_.below(allies.size())];
        }
        // last conspirator standing: fall back to a uniformly drawn target
        std::vector<AgentId> others = active_others(v);
        if (others.empty()) {
            return v;
        }
        return others[malicious_rng_.below(others.size())];
    }

    std::vector<AgentId> active_others(AgentId v) const
    {
        std::vector<AgentId> others;
        others.reserve(active_ids_.size());
        for (const AgentId a : active_ids_) {
            if (a != v) {
                others.push_back(a);
            }
        }
        return others;
    }

    void handle_event(const AttestationEvent& ev)
    {
        if (!active_flag_[ev.verifier] || n_active_ < 2) {
            return;
        }
        const std::uint64_t tick = ev.tick;
        const bool v_evil = evil(ev.verifier, tick);

        AgentId attester = ev.attester;
        if (v_evil && cfg_.strategy == Strategy::cooperative) {
            attester = pick_cooperative_attester(ev.verifier);
        }
        if (attester == ev.verifier || !active_flag_[attester]) {
            // scheduled attester was evicted mid-window
            const std::vector<AgentId> others = active_others(ev.verifier);
            if (others.empty()) {
                return;
            }
            attester = others[attest_rng_.below(others.size())];
        }

        const bool tampered_now =
            malicious_flag_[attester] != 0 && tick >= cfg_.malicious_from_tick;
        const ProgramImage& att_img =
            tampered_now ? tampered_images_[attester] : reference_;
        const AttestOutcome ao = attest(reference_, att_img, attest_rng_);

        Outcome reported;
        if (!v_evil) {
            reported = ao.positive ? Outcome::positive : Outcome::negative;
        } else if (cfg_.strategy == Strategy::cooperative) {
            reported = malicious_flag_[attester] ? Outcome::positive : Outcome::negative;
        } else {
            // acting alone: smear honest attesters, coin-flip anyone else
            reported = malicious_flag_[attester]
                           ? (malicious_rng_.below(2) != 0 ? Outcome::positive
                                                           : Outcome::negative)
                           : Outcome::negative;
        }

        const AttestationReport rep{tick, ev.verifier, attester, reported};
        trace_.reports.push_back(rep);
        apply_trust(rep);
        maybe_evict(attester, tick);
    }

    void apply_trust(const AttestationReport& rep)
    {
        const double coeff = rule_.advance();
        const double base = rep.outcome == Outcome::positive ? coeff : -coeff;
        const AgentId j = rep.attester;
        const AgentId k = rep.verifier;
        for (std::uint32_t i = 0; i < n_; ++i) {
            if (i == j || !active_flag_[i]) {
                continue;
            }
            double delta = base;
            // cooperative bookkeeping: a conspirator never lowers a fellow
            // conspirator, whatever the report says
            if (delta < 0.0 && cfg_.strategy == Strategy::cooperative &&
                malicious_flag_[j] != 0 && evil(i, rep.tick)) {
                delta = -delta;
            }
            const double next = project_unit(trust_(i, j) + delta * trust_(i, k));
            trust_.set(i, j, next);
            after_trust_change(i, j, next, rep.tick);
        }
    }

    void after_trust_change(std::uint32_t i, std::uint32_t j, double p,
                            std::uint64_t tick)
    {
        if (!malicious_flag_[i]) {
            if (malicious_flag_[j]) {
                trace_.max_malicious_trust_over_time =
                    std::max(trace_.max_malicious_trust_over_time, p);
            } else {
                trace_.min_honest_trust_over_time =
                    std::min(trace_.min_honest_trust_over_time, p);
            }
        }
        ident_.update(i, j, p);
        if (!trace_.identified && ident_.identified()) {
            trace_.identified = true;
            trace_.identified_tick = tick;
            trace_.attestations_at_identification = trace_.reports.size();
        }
    }

    void maybe_evict(AgentId subject, std::uint64_t tick)
    {
        if (!active_flag_[subject]) {
            return;
        }
        const std::uint32_t votes = eviction_votes(trust_, subject, active_ids_);
        if (!check_eviction(votes, n_active_)) {
            return;
        }
        trace_.evictions.push_back({tick, subject, votes, n_active_});
        active_flag_[subject] = 0;
        --n_active_;
        active_ids_.erase(std::find(active_ids_.begin(), active_ids_.end(), subject));
        rule_.set_active_count(n_active_);
        if (grid_) {
            rebuild_plan();
        }
        if (leader_ == subject) {
            elect(tick);
        }
    }

    void rebuild_plan()
    {
        plan_ = build_measurement_plan(*grid_, active_ids_);
        r_diag_ = Eigen::VectorXd::Constant(plan_.H.rows(),
                                            cfg_.meas_sigma * cfg_.meas_sigma);
    }

    void se_sample(std::uint64_t tick)
    {
        const Eigen::VectorXd x_true = true_state_vector(*grid_, se_rng_);
        Eigen::VectorXd z = plan_.H * x_true;
        for (Eigen::Index r = 0; r < z.size(); ++r) {
            z[r] += cfg_.meas_sigma * se_rng_.normal();
            if (plan_.row_is_voltage[static_cast<std::size_t>(r)] &&
                evil(plan_.row_agent[static_cast<std::size_t>(r)], tick)) {
                z[r] += cfg_.se_bias;
            }
        }
        kalman_step(kf_, z, plan_.H, r_diag_, cfg_.process_noise);
        trace_.se_errors.push_back(
            {tick, squared_error(kf_.x, x_true), max_abs_error(kf_.x, x_true)});
    }

    void finalize()
    {
        const std::uint64_t last_tick = trace_.ticks_run == 0 ? 0 : trace_.ticks_run - 1;
        if (trace_.trust_snapshots.empty() ||
            trace_.trust_snapshots.back().tick != last_tick) {
            trace_.trust_snapshots.push_back({last_tick, trust_.data()});
        }
        trace_.final_trust = trust_;
        trace_.active_at_end = active_ids_;
        trace_.leader_at_end = leader_;

        double mn = 1.0;
        double mx = 0.0;
        for (std::uint32_t i = 0; i < n_; ++i) {
            if (malicious_flag_[i] || !active_flag_[i]) {
                continue;
            }
            for (std::uint32_t j = 0; j < n_; ++j) {
                if (j == i) {
                    continue;
                }
                const double p = trust_(i, j);
                if (malicious_flag_[j]) {
                    mx = std::max(mx, p);
                } else {
                    mn = std::min(mn, p);
                }
            }
        }
        trace_.min_honest_trust_at_stop = mn;
        trace_.max_malicious_trust_at_stop = mx;
        trace_.separation_at_stop = m_total_ == 0 || mn > mx;

        bool honest_evicted = false;
        for (const EvictionRecord& ev : trace_.evictions) {
            if (!malicious_flag_[ev.agent]) {
                honest_evicted = true;
            }
        }
        bool all_malicious_out = true;
        for (const AgentId a : cfg_.malicious) {
            if (active_flag_[a]) {
                all_malicious_out = false;
            }
        }
        trace_.outcome = honest_evicted      ? "false_eviction"
                         : all_malicious_out ? "correct"
                                             : "missed";
    }

    ScenarioConfig cfg_;
    std::uint32_t n_ = 0;
    const GridCase* grid_ = nullptr;
    ScenarioTrace trace_;
    TrustMatrix trust_;
    StepRule rule_;
    std::vector<std::uint8_t> malicious_flag_;
    std::vector<std::uint8_t> active_flag_;
    std::vector<AgentId> active_ids_;
    std::uint32_t n_active_ = 0;
    std::uint32_t m_total_ = 0;
    AgentId leader_ = 0;
    std::uint32_t round_ = 0;

    Rng elections_rng_;
    Rng schedule_rng_;
    Rng attest_rng_;
    Rng malicious_rng_;
    Rng se_rng_;

    ProgramImage reference_;
    std::vector<ProgramImage> tampered_images_;

    IdentTracker ident_;
    KalmanState kf_;
    MeasurementPlan plan_;
    Eigen::VectorXd r_diag_;
};

} // namespace

ScenarioTrace run_scenario(const ScenarioConfig& cfg, const GridCase* grid)
{
    validate_scenario(cfg);
    std::optional<GridCase> owned;
    if (!grid && cfg.grid_path && !cfg.grid_path->empty()) {
        owned = load_grid_case(*cfg.grid_path);
        grid = &*owned;
    }
    if (grid) {
        validate_grid_case(*grid);
    }
    Harness h(cfg, grid);
    return h.run();
}

DetectionMetrics detection_metrics(const ScenarioTrace& trace)
{
    DetectionMetrics dm;
    const ScenarioConfig& cfg = trace.config;
    std::vector<std::uint8_t> malicious(cfg.n_agents, 0);
    for (const AgentId a : cfg.malicious) {
        malicious[a] = 1;
    }
    for (const AgentId a : cfg.malicious) {
        DetectionMetrics::PerAgent pa;
        pa.agent = a;
        for (const EvictionRecord& ev : trace.evictions) {
            if (ev.agent == a) {
                pa.evicted = true;
                pa.tick = ev.tick;
                break;
            }
        }
        if (pa.evicted) {
            ++dm.malicious_evictions;
        }
        dm.detections.push_back(pa);
    }
    for (const EvictionRecord& ev : trace.evictions) {
        if (!malicious[ev.agent]) {
            ++dm.honest_evictions;
        }
    }
    dm.fully_identified = trace.identified;
    dm.attestations_at_identification = trace.attestations_at_identification;
    dm.min_honest_trust_over_time = trace.min_honest_trust_over_time;
    dm.max_malicious_trust_over_time = trace.max_malicious_trust_over_time;
    dm.min_honest_trust_at_stop = trace.min_honest_trust_at_stop;
    dm.max_malicious_trust_at_stop = trace.max_malicious_trust_at_stop;
    dm.separation_at_stop = trace.separation_at_stop;
    return dm;
}

namespace {

constexpr std::uint64_t kStreamRoster = 7;

} // namespace

std::vector<AgentId> pick_malicious_roster(std::uint32_t n_agents, std::uint32_t m,
                                           std::uint64_t seed)
{
    if (m >= n_agents) {
        throw PreconditionError("roster would leave no honest agent");
    }
    Rng rng = Rng::substream(seed, kStreamRoster);
    std::vector<AgentId> ids(n_agents);
    std::iota(ids.begin(), ids.end(), 0u);
    for (std::uint32_t t = 0; t < m; ++t) {
        const std::uint64_t pick = t + rng.below(n_agents - t);
        std::swap(ids[t], ids[pick]);
    }
    ids.resize(m);
    std::sort(ids.begin(), ids.end());
    return ids;
}

SweepResult run_sweep(const SweepConfig& sc, int jobs)
{
    if (sc.cells.empty()) {
        throw ConfigError("sweep has no cells");
    }
    if (sc.runs_per_cell == 0) {
        throw ConfigError("runs_per_cell must be positive");
    }
    for (const SweepCell& cell : sc.cells) {
        if (cell.n_agents < 2) {
            throw ConfigError("sweep cell needs at least two agents");
        }
        if (cell.m_malicious >= cell.n_agents) {
            throw ConfigError("sweep cell leaves no honest agent");
        }
    }

    std::optional<GridCase> owned;
    const GridCase* grid = nullptr;
    if (sc.base.grid_path && !sc.base.grid_path->empty()) {
        owned = load_grid_case(*sc.base.grid_path);
        grid = &*owned;
    }

    struct RunSummary {
        std::uint8_t outcome = 0; // 0 correct, 1 missed, 2 false_eviction
        std::uint32_t honest_evicted = 0;
        std::uint32_t malicious_evicted = 0;
        bool all_malicious_evicted = false;
        std::uint64_t last_eviction_tick = 0;
    };

    const std::size_t n_cells = sc.cells.size();
    const std::size_t total = n_cells * sc.runs_per_cell;
    std::vector<RunSummary> runs(total);
    bool failed = false;
    std::string first_error;

    const int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (std::int64_t idx = 0; idx < static_cast<std::int64_t>(total); ++idx) {
        if (failed) {
            continue;
        }
        try {
            const std::size_t c = static_cast<std::size_t>(idx) / sc.runs_per_cell;
            const std::uint64_t r = static_cast<std::uint64_t>(idx) % sc.runs_per_cell;
            const SweepCell& cell = sc.cells[c];
            const std::uint64_t run_seed = sc.seed0 + r;

            ScenarioConfig cfg = sc.base;
            cfg.n_agents = cell.n_agents;
            cfg.malicious = pick_malicious_roster(cell.n_agents, cell.m_malicious, run_seed);
            cfg.seed = run_seed;

            const ScenarioTrace trace = run_scenario(cfg, grid);
            const DetectionMetrics dm = detection_metrics(trace);

            RunSummary& out = runs[static_cast<std::size_t>(idx)];
            out.outcome = trace.outcome == "correct"   ? 0
                          : trace.outcome == "missed"  ? 1
                                                       : 2;
            out.honest_evicted = dm.honest_evictions;
            out.malicious_evicted = dm.malicious_evictions;
            out.all_malicious_evicted =
                dm.malicious_evictions == cfg.malicious.size() && !cfg.malicious.empty();
            for (const DetectionMetrics::PerAgent& pa : dm.detections) {
                if (pa.evicted) {
                    out.last_eviction_tick = std::max(out.last_eviction_tick, pa.tick);
                }
            }
        } catch (const std::exception& e) {
#pragma omp critical
            {
                if (!failed) {
                    failed = true;
                    first_error = e.what();
                }
            }
        }
    }
    if (failed) {
        throw SimAbort("sweep run failed: " + first_error);
    }

    SweepResult result;
    result.cells.reserve(n_cells);
    for (std::size_t c = 0; c < n_cells; ++c) {
        SweepCellResult agg;
        agg.n_agents = sc.cells[c].n_agents;
        agg.m_malicious = sc.cells[c].m_malicious;
        agg.runs = sc.runs_per_cell;
        agg.malicious_total =
            static_cast<std::uint64_t>(sc.cells[c].m_malicious) * sc.runs_per_cell;
        std::uint64_t tick_sum = 0;
        std::uint64_t tick_count = 0;
        for (std::uint32_t r = 0; r < sc.runs_per_cell; ++r) {
            const RunSummary& rs = runs[c * sc.runs_per_cell + r];
            agg.correct += rs.outcome == 0;
            agg.missed += rs.outcome == 1;
            agg.false_evictions += rs.outcome == 2;
            agg.malicious_evicted += rs.malicious_evicted;
            agg.honest_evicted += rs.honest_evicted;
            if (rs.all_malicious_evicted) {
                tick_sum += rs.last_eviction_tick;
                ++tick_count;
            }
        }
        agg.mean_last_eviction_tick =
            tick_count == 0 ? 0.0
                            : static_cast<double>(tick_sum) / static_cast<double>(tick_count);
        result.cells.push_back(agg);
    }
    return result;
}

} // namespace trustnet
