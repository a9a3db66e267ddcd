#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gfe/model.hpp"
#include "gfe/parallel.hpp"
#include "gfe/rng.hpp"
#include "gfe/test_function.hpp"

namespace gfe {

/// One fragmentation event. Masses are stored as logarithms: in transient
/// regimes log X drifts to -inf far beyond the range of a double.
struct JumpEvent {
    double time = 0.0;
    double log_pre = 0.0;
    double log_post = 0.0;

    double pre() const { return std::exp(log_pre); }
    double post() const { return std::exp(log_post); }
};

struct Trajectory {
    double log_start = 0.0;
    std::vector<JumpEvent> events;
    double end_time = 0.0;
    double log_end = 0.0;
    /// log of the exponential functional at end_time.
    double log_E = 0.0;

    double start() const { return std::exp(log_start); }
    double end_mass() const { return std::exp(log_end); }
};

struct HitSample {
    double H = 0.0;      ///< hitting time (meaningful iff hit)
    double log_W = 0.0;  ///< log E_H (iff hit)
    bool hit = false;
};

struct HitSampleSet {
    double source = 1.0;
    double target = 1.0;
    double censor_time = 0.0;
    std::vector<HitSample> samples;
    std::uint64_t seed = 0;
    std::string model_label;

    std::size_t size() const noexcept { return samples.size(); }
    std::size_t hit_count() const noexcept;
    double hit_fraction() const noexcept;
};

// ---------------------------------------------------------------------------
// Deterministic flow dx/dt = c(x)
// ---------------------------------------------------------------------------

/// Log-mass after following the flow for dt from log-mass z.
double flow_log(const Model& model, double z, double dt);
double flow_map(const Model& model, double x, double dt);
/// Time for the flow to carry log-mass z0 up to z1; +inf when z1 < z0.
double time_to_reach_log(const Model& model, double z0, double z1);
double time_to_reach(const Model& model, double x, double y);

/// int over a flow segment of f(X_s) ds, written in log-mass:
/// int_{z0}^{z1} f(e^u) / cbar(e^u) du. Gauss-Legendre pieces split at the
/// breakpoints of f, so piecewise-polynomial f in log-mass is integrated exactly.
double integrate_segment(const Model& model, const TestFunction& f, double z0, double z1);

// ---------------------------------------------------------------------------
// Event loop
// ---------------------------------------------------------------------------

/// Thinning policy of the plain process X: propose at rate Ksup, accept with K(p)/Ksup.
struct BaseJumps {
    const Model* model;

    double rate_bound() const { return model->jump_rate_bound(); }
    /// Upper bound for the acceptance numerator before V is drawn.
    double proposal_bound(double z) const { return model->jump_rate_log(z); }
    /// Acceptance numerator once log V is known.
    double accept(double z, double /*log_v*/) const { return model->jump_rate_log(z); }
};

/// How a run ended.
enum class RunEnd { Horizon, Hit };

struct RunResult {
    RunEnd end = RunEnd::Horizon;
    double time = 0.0;
    double z = 0.0;
    /// Sum over accepted jumps of log(pre/post).
    double jump_log_sum = 0.0;
};

/// Observer that ignores everything; the default for sampling hitting times.
struct NullObserver {
    void segment(double, double, double, double) {}
    void jump(double, double, double) {}
};

/// Runs one path from log-mass z0 until t_end, or until the first continuous
/// up-crossing of z_target (strictly from below) when one is given.
///
/// Random draws per proposal: an exponential waiting time, one uniform for
/// the acceptance test, and log V only if the proposal survives the bound.
template <class Policy, class Observer = NullObserver>
RunResult run_path(const Model& model, const Policy& policy, double z0, double t_end, Rng& rng,
                   std::optional<double> z_target = std::nullopt, Observer&& obs = Observer{}) {
    RunResult r;
    double t = 0.0;
    double z = z0;
    const double lambda = policy.rate_bound();
    for (;;) {
        const double wait =
            lambda > 0.0 ? rng.exponential() / lambda : std::numeric_limits<double>::infinity();
        if (z_target && z < *z_target) {
            const double tau = time_to_reach_log(model, z, *z_target);
            if (tau <= wait && t + tau <= t_end) {
                obs.segment(t, z, t + tau, *z_target);
                r.end = RunEnd::Hit;
                r.time = t + tau;
                r.z = *z_target;
                return r;
            }
        }
        if (t + wait >= t_end) {
            const double z_end = flow_log(model, z, t_end - t);
            obs.segment(t, z, t_end, z_end);
            r.end = RunEnd::Horizon;
            r.time = t_end;
            r.z = z_end;
            return r;
        }
        const double z_next = flow_log(model, z, wait);
        obs.segment(t, z, t + wait, z_next);
        t += wait;
        z = z_next;
        const double u = rng.uniform() * lambda;
        if (u < policy.proposal_bound(z)) {
            const double log_v = model.sample_log_ratio(rng);
            if (u < policy.accept(z, log_v)) {
                obs.jump(t, z, z + log_v);
                r.jump_log_sum -= log_v;
                z += log_v;
            }
        }
    }
}

/// Log of the exponential functional at the end of a run started from z0.
double run_log_E(const Model& model, double z0, const RunResult& r);

/// Records the events of a run into a trajectory.
struct TrajectoryRecorder {
    Trajectory* out;
    void segment(double, double, double, double) {}
    void jump(double t, double pre, double post) { out->events.push_back({t, pre, post}); }
};

template <class Policy>
Trajectory simulate_with(const Model& model, const Policy& policy, double x, double t_end, Rng& rng) {
    if (!(x > 0.0)) fail(ErrorCode::InvalidParameter, "initial mass must be positive");
    if (!(t_end >= 0.0)) fail(ErrorCode::InvalidParameter, "t_end must be non-negative");
    Trajectory tr;
    tr.log_start = std::log(x);
    const auto r = run_path(model, policy, tr.log_start, t_end, rng, std::nullopt,
                            TrajectoryRecorder{&tr});
    tr.end_time = r.time;
    tr.log_end = r.z;
    tr.log_E = run_log_E(model, tr.log_start, r);
    return tr;
}

/// Exact-in-law simulation of X on [0, t_end].
Trajectory simulate_path(const Model& model, double x, double t_end, Rng& rng);

/// One hitting sample of y from x, censored at t_max.
HitSample sample_hitting(const Model& model, double x, double y, double t_max, Rng& rng);

struct HitOptions {
    std::size_t n = 10000;
    double t_max = 200.0;
    std::uint64_t seed = 1;
    Execution exec = Execution::Parallel;
};

/// n independent hitting samples; path i draws from stream (seed, i).
HitSampleSet sample_hitting_set(const Model& model, double x, double y, const HitOptions& options);

struct PathOptions {
    std::size_t n = 10000;
    std::uint64_t seed = 1;
    Execution exec = Execution::Parallel;
};

/// Feynman-Kac estimate of T_t f(x) = x E_x[E_t f(X_t) / X_t].
Estimate feynman_kac(const Model& model, double x, double t, const TestFunction& f,
                     const PathOptions& options);

/// Per-path Feynman-Kac summands, in path order.
std::vector<double> feynman_kac_samples(const Model& model, double x, double t, const TestFunction& f,
                                        const PathOptions& options);

/// CSV with columns path_id,event_time,pre_mass,post_mass.
void write_trajectories_csv(std::ostream& os, std::span<const Trajectory> paths);

}  // namespace gfe
