// Wall-clock comparison of the dynamics kernels: the entry-by-entry drift
// reference against the prefix-sum field (serial and OpenMP), the projected
// Euler integrator, and the Monte-Carlo mean-drift sampler. Pass a list of
// agent counts to override the default sizes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include <omp.h>

#include "trustnet/dynamics.hpp"
#include "trustnet/rng.hpp"

namespace dyn = trustnet::dynamics;

namespace {

volatile double sink = 0.0;

template <typename F>
double ms_best_of(int reps, F&& body)
{
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        body();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best,
                        std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

// Interior point away from the unit bounds so every entry takes the full
// formula path; self-trust stays pinned at 1.
dyn::TrustState interior_state(const dyn::HonestyLabeling& lab, trustnet::Rng& rng)
{
    dyn::TrustState s = dyn::all_ones(lab);
    for (double& v : s.p) {
        v = 0.05 + 0.9 * rng.unit();
    }
    const auto& honest = lab.honest_agents();
    for (std::uint32_t r = 0; r < s.n_honest; ++r) {
        s.at(r, honest[r]) = 1.0;
    }
    return s;
}

dyn::HonestyLabeling quarter_malicious(std::uint32_t n)
{
    const std::uint32_t m = std::max(1u, n / 4);
    std::vector<trustnet::AgentId> malicious(m);
    for (std::uint32_t a = 0; a < m; ++a) {
        malicious[a] = a;
    }
    return dyn::HonestyLabeling::from_malicious(n, malicious);
}

} // namespace

int main(int argc, char** argv)
{
    std::vector<std::uint32_t> sizes{30, 60, 118, 236};
    if (argc > 1) {
        sizes.clear();
        for (int a = 1; a < argc; ++a) {
            sizes.push_back(static_cast<std::uint32_t>(std::strtoul(argv[a], nullptr, 10)));
        }
    }
    const int max_threads = omp_get_max_threads();
    std::printf("threads: %d\n\n", max_threads);

    std::printf("%-10s %6s %14s %12s %12s %9s %12s\n", "kernel", "n", "reference_ms",
                "serial_ms", "omp_ms", "speedup", "max_dev");
    for (const std::uint32_t n : sizes) {
        const dyn::HonestyLabeling lab = quarter_malicious(n);
        trustnet::Rng rng(2026);
        const dyn::TrustState state = interior_state(lab, rng);

        std::vector<double> ref;
        std::vector<double> fast;
        const double t_ref = ms_best_of(5, [&] {
            ref = dyn::drift_reference(state, lab);
            sink = ref[0];
        });
        omp_set_num_threads(1);
        const double t_serial = ms_best_of(5, [&] {
            fast = dyn::drift(state, lab);
            sink = fast[0];
        });
        omp_set_num_threads(max_threads);
        const double t_omp = ms_best_of(5, [&] {
            fast = dyn::drift(state, lab);
            sink = fast[0];
        });
        double max_dev = 0.0;
        for (std::size_t e = 0; e < ref.size(); ++e) {
            max_dev = std::max(max_dev, std::abs(ref[e] - fast[e]));
        }
        std::printf("%-10s %6u %14.3f %12.3f %12.3f %8.2fx %12.3e\n", "drift", n,
                    t_ref, t_serial, t_omp, t_serial / t_omp, max_dev);
    }

    {
        const std::uint32_t n = 118;
        const dyn::HonestyLabeling lab = quarter_malicious(n);
        const dyn::TrustState start = dyn::all_ones(lab);
        dyn::IntegrateOptions opts;
        opts.dt = 0.01;
        opts.horizon = 2.0;
        omp_set_num_threads(1);
        const double t_serial = ms_best_of(3, [&] {
            const dyn::Trajectory traj = dyn::integrate(start, lab, opts);
            sink = traj.states.back().p[0];
        });
        omp_set_num_threads(max_threads);
        const double t_omp = ms_best_of(3, [&] {
            const dyn::Trajectory traj = dyn::integrate(start, lab, opts);
            sink = traj.states.back().p[0];
        });
        std::printf("%-10s %6u %14s %12.3f %12.3f %8.2fx %12s\n", "integrate", n, "-",
                    t_serial, t_omp, t_serial / t_omp, "-");
    }

    {
        const std::uint32_t n = 30;
        const dyn::HonestyLabeling lab = quarter_malicious(n);
        trustnet::Rng rng(2026);
        const dyn::TrustState state = interior_state(lab, rng);
        const std::uint64_t samples = 400000;
        omp_set_num_threads(1);
        const double t_serial = ms_best_of(3, [&] {
            trustnet::Rng r(7);
            const dyn::MeanDriftCheck c =
                dyn::mean_drift_check(state, lab, samples, 1e-6, r);
            sink = c.max_abs_dev;
        });
        omp_set_num_threads(max_threads);
        double dev_omp = 0.0;
        const double t_omp = ms_best_of(3, [&] {
            trustnet::Rng r(7);
            const dyn::MeanDriftCheck c =
                dyn::mean_drift_check(state, lab, samples, 1e-6, r);
            dev_omp = c.max_abs_dev;
            sink = dev_omp;
        });
        std::printf("%-10s %6u %14s %12.3f %12.3f %8.2fx %12.3e\n", "mean_check", n,
                    "-", t_serial, t_omp, t_serial / t_omp, dev_omp);
    }
    return 0;
}
