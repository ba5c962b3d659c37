#include "netmax/sim.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <queue>

#include "netmax/ema.hpp"
#include "netmax/errors.hpp"
#include "netmax/rng.hpp"
#include "netmax/search.hpp"
#include "netmax/update.hpp"

namespace netmax {

std::string stop_reason_to_string(StopReason r) {
    switch (r) {
        case StopReason::max_steps: return "max_steps";
        case StopReason::max_time: return "max_time";
        case StopReason::target_deviation: return "target_deviation";
    }
    return "max_steps";
}

namespace {

enum class EventKind : int { slowdown_change = 0, monitor_cycle = 1, worker_complete = 2 };

struct SimEvent {
    double fire_time = 0.0;
    EventKind kind = EventKind::worker_complete;
    int node = -1;
    long seq = 0; // insertion order; last-resort tiebreak
};

struct EventAfter {
    bool operator()(const SimEvent& a, const SimEvent& b) const {
        if (a.fire_time != b.fire_time) return a.fire_time > b.fire_time;
        if (a.kind != b.kind) return static_cast<int>(a.kind) > static_cast<int>(b.kind);
        if (a.node != b.node) return a.node > b.node;
        return a.seq > b.seq;
    }
};

struct Worker {
    int id = 0;
    std::vector<double> x;
    std::vector<double> probs; // current policy row, self entry included
    double rho = 0.0;
    std::vector<double> ema;   // per-neighbor iteration times, 0 = unset
    long steps = 0;
    long self_steps = 0;
    double duration_sum = 0.0;          // all iterations
    double duration_sum_nonself = 0.0;  // numerator of the Eq.-(2) estimate
    Rng rng;

    // policy delivered mid-iteration; adopted at the next iteration start
    std::optional<std::pair<std::vector<double>, double>> pending_policy;

    // in-flight iteration
    int target = -1;
    double duration = 0.0;
    double used_p = 0.0;
    double used_rho = 0.0;
    std::vector<double> start_snapshot; // neighbor model at start (stale-read mode)

    Worker() : rng(0) {}
};

double consensus_spread_of(const std::vector<Worker>& workers) {
    double worst = 0.0;
    for (size_t i = 0; i < workers.size(); ++i)
        for (size_t m = i + 1; m < workers.size(); ++m)
            worst = std::max(worst, squared_distance(workers[i].x, workers[m].x));
    return std::sqrt(worst);
}

double deviation_of(const std::vector<Worker>& workers, const std::vector<double>& x_star) {
    double s = 0.0;
    for (const auto& w : workers) s += squared_distance(w.x, x_star);
    return s;
}

class AsyncSimulation {
public:
    AsyncSimulation(const ExperimentConfig& cfg, Protocol protocol)
        : cfg_(cfg),
          protocol_(protocol),
          model_(make_link_model(cfg, cfg.seed)),
          losses_(make_losses(cfg)),
          nodes_(cfg.topology.nodes) {}

    RunRecord run() {
        setup();
        if (cfg_.stop.max_steps == 0) {
            finalize(StopReason::max_steps);
            return std::move(record_);
        }
        kickoff();
        loop();
        return std::move(record_);
    }

private:
    bool uses_monitor() const {
        return protocol_ == Protocol::netmax || protocol_ == Protocol::uniform_async_with_monitor;
    }
    bool half_averaging() const {
        return protocol_ == Protocol::uniform_async ||
               protocol_ == Protocol::uniform_async_with_monitor;
    }

    void setup() {
        record_.protocol = protocol_to_string(protocol_);
        record_.seed = cfg_.seed;
        record_.config_echo = config_to_json(cfg_);
        record_.x_star = optimum_oracle(losses_);
        record_.link_usage = Matrix(nodes_, nodes_, 0.0);

        const auto lr = validate_learning_rate(cfg_.alpha, losses_);
        record_.learning_rate_ok = lr.ok;
        record_.learning_rate_limit = lr.limit;
        if (!lr.ok) record_.warnings.push_back("learning-rate check failed: " + lr.message);

        const auto xs = initial_models(cfg_, cfg_.seed, record_.x_star);
        workers_.assign(nodes_, Worker{});
        for (int i = 0; i < nodes_; ++i) {
            auto& w = workers_[i];
            w.id = i;
            w.x = xs[i];
            w.rho = cfg_.rho_init;
            w.ema.assign(nodes_, 0.0);
            w.rng = Rng(split_seed(cfg_.seed, 0xa0000 + static_cast<uint64_t>(i)));
            w.probs.assign(nodes_, 0.0);
            if (uses_monitor()) {
                // Bootstrap row [1/M]; replaced by the first monitor broadcast.
                w.probs.assign(nodes_, 1.0 / nodes_);
            } else {
                const int deg = cfg_.topology.degree(i);
                for (int m = 0; m < nodes_; ++m)
                    if (cfg_.topology.edge(i, m)) w.probs[m] = 1.0 / deg;
            }
        }

        record_.initial_deviation = deviation_of(workers_, record_.x_star);
        push_initial_row();

        // Explicit schedules become events (bookkeeping; the timing model is
        // clock-indexed). The procedural rotating regime is recorded post-run.
        if (!model_.procedural())
            for (const auto& ev : model_.schedule())
                if (ev.start_time < cfg_.stop.max_time)
                    push_event(ev.start_time, EventKind::slowdown_change, -1);
        if (uses_monitor()) push_event(0.0, EventKind::monitor_cycle, -1);
    }

    void push_initial_row() {
        TraceRow row;
        row.k = 0;
        row.clock = 0.0;
        row.deviation = record_.initial_deviation;
        row.spread = consensus_spread_of(workers_);
        row.objective = global_objective(models(), losses_, current_rho(), cfg_.topology);
        record_.trace.push_back(row);
    }

    std::vector<std::vector<double>> models() const {
        std::vector<std::vector<double>> xs;
        xs.reserve(workers_.size());
        for (const auto& w : workers_) xs.push_back(w.x);
        return xs;
    }

    double current_rho() const { return workers_.empty() ? cfg_.rho_init : workers_[0].rho; }

    void push_event(double time, EventKind kind, int node) {
        queue_.push({time, kind, node, seq_++});
    }

    // Process any t=0 slowdown/monitor events before workers pick their first
    // neighbor, then start everyone.
    void kickoff() {
        while (!queue_.empty() && queue_.top().fire_time == 0.0 &&
               queue_.top().kind != EventKind::worker_complete) {
            const SimEvent ev = queue_.top();
            queue_.pop();
            dispatch(ev);
        }
        for (auto& w : workers_) start_iteration(w, 0.0);
    }

    void loop() {
        while (!queue_.empty()) {
            const SimEvent ev = queue_.top();
            queue_.pop();
            if (ev.fire_time > cfg_.stop.max_time) {
                finalize(StopReason::max_time);
                return;
            }
            if (!dispatch(ev)) return; // a stop condition fired inside
        }
        finalize(StopReason::max_time); // queue drained (no runnable workers)
    }

    bool dispatch(const SimEvent& ev) {
        switch (ev.kind) {
            case EventKind::slowdown_change: on_slowdown(ev.fire_time); return true;
            case EventKind::monitor_cycle: on_monitor(ev.fire_time); return true;
            case EventKind::worker_complete: return on_worker_complete(ev.fire_time, ev.node);
        }
        return true;
    }

    void on_slowdown(double clock) {
        // The timing model is indexed by clock, so this is bookkeeping only.
        for (const auto& ev : model_.schedule())
            if (ev.start_time == clock)
                record_.network_changes.push_back({clock, ev.a, ev.b, ev.factor});
    }

    void on_monitor(double clock) {
        // Assemble iteration times from worker EMAs; never-observed links are
        // filled from the base model times.
        Matrix times = model_.base_iteration_times();
        for (int i = 0; i < nodes_; ++i)
            for (int m = 0; m < nodes_; ++m)
                if (cfg_.topology.edge(i, m) && workers_[i].ema[m] > 0.0)
                    times(i, m) = workers_[i].ema[m];

        PolicySearchParams params;
        params.alpha = cfg_.alpha;
        params.outer_rounds = cfg_.search_outer;
        params.inner_rounds = cfg_.search_inner;
        params.epsilon = cfg_.epsilon;
        params.margin = cfg_.lp_margin;
        const auto result = generate_policy_matrix(params, times, cfg_.topology);
        if (result) {
            record_.policy_changes.push_back({clock, result->rho, result->lambda2, result->tbar,
                                              result->t_convergence, result->policy});
            for (auto& w : workers_) {
                std::vector<double> row(nodes_);
                for (int m = 0; m < nodes_; ++m) row[m] = result->policy(w.id, m);
                w.pending_policy = std::make_pair(std::move(row), result->rho);
            }
        } else {
            record_.warnings.push_back("monitor cycle at t=" + std::to_string(clock) +
                                       " found no feasible policy; keeping previous");
        }
        push_event(clock + cfg_.monitor_period, EventKind::monitor_cycle, -1);
    }

    void start_iteration(Worker& w, double clock) {
        if (w.pending_policy) {
            w.probs = std::move(w.pending_policy->first);
            w.rho = w.pending_policy->second;
            w.pending_policy.reset();
        }
        const int m = w.rng.sample(w.probs);
        w.target = m;
        w.used_p = m >= 0 ? w.probs[m] : 0.0;
        w.used_rho = w.rho;
        w.duration = m == w.id || m < 0 ? model_.compute_time(w.id)
                                        : model_.iteration_time(w.id, m, clock);
        if (cfg_.stale_reads && m >= 0 && m != w.id) w.start_snapshot = workers_[m].x;
        push_event(clock + w.duration, EventKind::worker_complete, w.id);
    }

    bool on_worker_complete(double clock, int id) {
        Worker& w = workers_[id];
        const int m = w.target;
        const auto g = local_gradient(losses_[id], w.x, w.rng);
        if (m == id || m < 0) {
            // Self-iteration: local gradient step only (D = I).
            for (int d = 0; d < cfg_.loss.dim; ++d) w.x[d] -= cfg_.alpha * g[d];
            w.self_steps++;
        } else {
            const std::vector<double>& x_m = cfg_.stale_reads ? w.start_snapshot : workers_[m].x;
            if (half_averaging()) {
                for (int d = 0; d < cfg_.loss.dim; ++d)
                    w.x[d] = 0.5 * (w.x[d] - cfg_.alpha * g[d]) + 0.5 * x_m[d];
            } else {
                w.x = two_step_update(w.x, g, x_m, {cfg_.alpha, w.used_rho, 2, w.used_p});
            }
            w.ema[m] = ema_update(w.ema[m], w.duration, cfg_.beta);
            w.duration_sum_nonself += w.duration;
            record_.link_usage(id, m) += 1.0;
        }
        w.steps++;
        w.duration_sum += w.duration;
        record_.global_steps++;
        record_.sim_time = clock;

        const double dev = deviation_of(workers_, record_.x_star);
        if (record_.global_steps % cfg_.metrics.trace_every == 0) {
            TraceRow row;
            row.k = record_.global_steps;
            row.clock = clock;
            row.node = id;
            row.neighbor = m;
            row.iter_time = w.duration;
            row.deviation = dev;
            row.spread = consensus_spread_of(workers_);
            row.objective = global_objective(models(), losses_, current_rho(), cfg_.topology);
            record_.trace.push_back(row);
        }

        if (cfg_.stop.target_deviation && dev <= *cfg_.stop.target_deviation) {
            finalize(StopReason::target_deviation);
            return false;
        }
        if (record_.global_steps >= cfg_.stop.max_steps) {
            finalize(StopReason::max_steps);
            return false;
        }
        start_iteration(w, clock);
        return true;
    }

    void finalize(StopReason reason) {
        record_.stop_reason = reason;
        if (model_.procedural()) {
            record_.network_changes.clear();
            for (const auto& ev : model_.changes_until(record_.sim_time + 1e-9))
                record_.network_changes.push_back({ev.start_time, ev.a, ev.b, ev.factor});
        }
        record_.final_models = models();
        record_.final_deviation = deviation_of(workers_, record_.x_star);
        record_.final_spread = consensus_spread_of(workers_);
        record_.node_iterations.resize(nodes_);
        record_.self_iterations.resize(nodes_);
        record_.mean_iteration_time.assign(nodes_, 0.0);
        record_.eq2_iteration_time.assign(nodes_, 0.0);
        for (int i = 0; i < nodes_; ++i) {
            const auto& w = workers_[i];
            record_.node_iterations[i] = w.steps;
            record_.self_iterations[i] = w.self_steps;
            if (w.steps > 0) {
                record_.mean_iteration_time[i] = w.duration_sum / w.steps;
                record_.eq2_iteration_time[i] = w.duration_sum_nonself / w.steps;
            }
        }
    }

    const ExperimentConfig& cfg_;
    Protocol protocol_;
    LinkTimeModel model_;
    std::vector<QuadraticLoss> losses_;
    int nodes_;
    std::vector<Worker> workers_;
    std::priority_queue<SimEvent, std::vector<SimEvent>, EventAfter> queue_;
    long seq_ = 0;
    RunRecord record_;
};

// Barrier-synchronized rounds over a fixed logical ring 0-1-...-(M-1)-0:
// every node computes a gradient, the round lasts
// max_i (C_i + slowest incident ring-link time), and all models are replaced
// by the exact average of the post-gradient models.
class AllreduceSimulation {
public:
    explicit AllreduceSimulation(const ExperimentConfig& cfg)
        : cfg_(cfg), model_(make_link_model(cfg, cfg.seed)), losses_(make_losses(cfg)),
          nodes_(cfg.topology.nodes) {
        for (int i = 0; i < nodes_; ++i)
            if (!cfg.topology.edge(i, (i + 1) % nodes_))
                throw error(errc::config_invalid,
                            "sync-allreduce needs the ring links (i, i+1 mod M)");
    }

    RunRecord run() {
        RunRecord rec;
        rec.protocol = protocol_to_string(Protocol::sync_allreduce);
        rec.seed = cfg_.seed;
        rec.config_echo = config_to_json(cfg_);
        rec.x_star = optimum_oracle(losses_);
        rec.link_usage = Matrix(nodes_, nodes_, 0.0);
        const auto lr = validate_learning_rate(cfg_.alpha, losses_);
        rec.learning_rate_ok = lr.ok;
        rec.learning_rate_limit = lr.limit;
        if (!lr.ok) rec.warnings.push_back("learning-rate check failed: " + lr.message);

        auto xs = initial_models(cfg_, cfg_.seed, rec.x_star);
        std::vector<Rng> rngs;
        for (int i = 0; i < nodes_; ++i)
            rngs.emplace_back(split_seed(cfg_.seed, 0xa0000 + static_cast<uint64_t>(i)));

        const int dim = cfg_.loss.dim;
        rec.initial_deviation = 0.0;
        for (int i = 0; i < nodes_; ++i)
            rec.initial_deviation += squared_distance(xs[i], rec.x_star);
        TraceRow initial;
        initial.deviation = rec.initial_deviation;
        initial.spread = spread_of(xs);
        initial.objective = global_objective(xs, losses_, cfg_.rho_init, cfg_.topology);
        rec.trace.push_back(initial);

        // filled after the run from the clock-indexed model

        rec.node_iterations.assign(nodes_, 0);
        rec.self_iterations.assign(nodes_, 0);
        rec.mean_iteration_time.assign(nodes_, 0.0);
        rec.eq2_iteration_time.assign(nodes_, 0.0);
        std::vector<double> duration_sum(nodes_, 0.0);

        double clock = 0.0;
        StopReason reason = StopReason::max_time;
        while (true) {
            if (cfg_.stop.max_steps == 0) {
                reason = StopReason::max_steps;
                break;
            }
            double duration = 0.0;
            for (int i = 0; i < nodes_; ++i) {
                const int succ = (i + 1) % nodes_;
                const int pred = (i + nodes_ - 1) % nodes_;
                const double slowest =
                    std::max(model_.effective_comm_time(i, succ, clock),
                             model_.effective_comm_time(i, pred, clock));
                duration = std::max(duration, model_.compute_time(i) + slowest);
            }
            const double round_end = clock + duration;
            if (round_end > cfg_.stop.max_time) {
                reason = StopReason::max_time;
                break;
            }

            // Every node takes a gradient step, then an exact average.
            std::vector<double> avg(dim, 0.0);
            for (int i = 0; i < nodes_; ++i) {
                const auto g = local_gradient(losses_[i], xs[i], rngs[i]);
                for (int d = 0; d < dim; ++d) {
                    xs[i][d] -= cfg_.alpha * g[d];
                    avg[d] += xs[i][d];
                }
            }
            for (double& v : avg) v /= nodes_;
            for (int i = 0; i < nodes_; ++i) xs[i] = avg;
            clock = round_end;

            double dev = 0.0;
            for (int i = 0; i < nodes_; ++i) dev += squared_distance(xs[i], rec.x_star);
            const double spread = spread_of(xs);
            const double objective = global_objective(xs, losses_, cfg_.rho_init, cfg_.topology);
            bool hit_target = false;
            for (int i = 0; i < nodes_; ++i) {
                rec.global_steps++;
                rec.node_iterations[i]++;
                duration_sum[i] += duration;
                const int succ = (i + 1) % nodes_;
                rec.link_usage(i, succ) += 1.0;
                if (rec.global_steps % cfg_.metrics.trace_every == 0) {
                    TraceRow row;
                    row.k = rec.global_steps;
                    row.clock = clock;
                    row.node = i;
                    row.neighbor = succ;
                    row.iter_time = duration;
                    row.deviation = dev;
                    row.spread = spread;
                    row.objective = objective;
                    rec.trace.push_back(row);
                }
                if (cfg_.stop.target_deviation && dev <= *cfg_.stop.target_deviation) {
                    hit_target = true;
                    break;
                }
                if (rec.global_steps >= cfg_.stop.max_steps) break;
            }
            rec.sim_time = clock;
            if (hit_target) {
                reason = StopReason::target_deviation;
                break;
            }
            if (rec.global_steps >= cfg_.stop.max_steps) {
                reason = StopReason::max_steps;
                break;
            }
        }

        rec.stop_reason = reason;
        for (const auto& ev : model_.changes_until(clock + 1e-9))
            rec.network_changes.push_back({ev.start_time, ev.a, ev.b, ev.factor});
        rec.final_models = xs;
        rec.final_deviation = 0.0;
        for (int i = 0; i < nodes_; ++i) rec.final_deviation += squared_distance(xs[i], rec.x_star);
        rec.final_spread = spread_of(xs);
        for (int i = 0; i < nodes_; ++i) {
            if (rec.node_iterations[i] > 0) {
                rec.mean_iteration_time[i] = duration_sum[i] / rec.node_iterations[i];
                rec.eq2_iteration_time[i] = rec.mean_iteration_time[i];
            }
        }
        return rec;
    }

private:
    static double spread_of(const std::vector<std::vector<double>>& xs) {
        double worst = 0.0;
        for (size_t i = 0; i < xs.size(); ++i)
            for (size_t m = i + 1; m < xs.size(); ++m)
                worst = std::max(worst, squared_distance(xs[i], xs[m]));
        return std::sqrt(worst);
    }

    const ExperimentConfig& cfg_;
    LinkTimeModel model_;
    std::vector<QuadraticLoss> losses_;
    int nodes_;
};

} // namespace

RunRecord run_simulation(const ExperimentConfig& cfg) {
    return AsyncSimulation(cfg, Protocol::netmax).run();
}

RunRecord run_baseline(const ExperimentConfig& cfg, Protocol variant) {
    if (variant == Protocol::sync_allreduce) return AllreduceSimulation(cfg).run();
    if (variant == Protocol::netmax) return AsyncSimulation(cfg, Protocol::netmax).run();
    return AsyncSimulation(cfg, variant).run();
}

RunRecord run_protocol(const ExperimentConfig& cfg) { return run_baseline(cfg, cfg.protocol); }

} // namespace netmax
