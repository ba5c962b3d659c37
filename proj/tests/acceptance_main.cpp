// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion enforces its runtime budget.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "netmax/eigen.hpp"
#include "netmax/errors.hpp"
#include "netmax/metrics.hpp"
#include "netmax/search.hpp"
#include "netmax/sim.hpp"
#include "netmax/sweep.hpp"
#include "netmax/verify.hpp"
#include "support/oracles.hpp"

using namespace netmax;
using clock_type = std::chrono::steady_clock;

namespace {

int failures = 0;

struct Criterion {
    const char* name;
    double budget_seconds;
    clock_type::time_point start = clock_type::now();

    Criterion(const char* n, double budget) : name(n), budget_seconds(budget) {}

    void report(bool pass, const std::string& detail) {
        const double elapsed =
            std::chrono::duration<double>(clock_type::now() - start).count();
        const bool in_budget = elapsed <= budget_seconds;
        if (!pass || !in_budget) ++failures;
        std::printf("%-52s %s  (%.2fs / budget %.0fs)%s\n", name,
                    pass && in_budget ? "PASS" : "FAIL", elapsed, budget_seconds,
                    detail.empty() ? "" : ("  " + detail).c_str());
    }
};

Matrix clique_times(int nodes, double value) {
    Matrix t(nodes, nodes, 0.0);
    for (int i = 0; i < nodes; ++i)
        for (int m = 0; m < nodes; ++m)
            if (i != m) t(i, m) = value;
    return t;
}

ExperimentConfig clique_config(int nodes, int dim) {
    ExperimentConfig cfg;
    cfg.topology = Topology::fully_connected(nodes);
    cfg.compute_times.assign(nodes, 0.01);
    cfg.comm_times = clique_times(nodes, 1.0);
    cfg.loss.dim = dim;
    cfg.loss.shared_diag.assign(dim, 1.0);
    cfg.loss.shared_center.assign(dim, 0.5);
    cfg.stop.max_time = 1e9;
    return cfg;
}

// 1. Hand-derived gossip matrix and eigenvalue for the two-node swap policy.
void criterion_gossip_golden() {
    Criterion crit("1 gossip-matrix golden values (1e-12)", 1.0);
    Matrix policy(2, 2, 0.0);
    policy(0, 1) = policy(1, 0) = 1.0;
    const auto g = build_gossip_expectation(policy, 0.1, 1.0, Topology::fully_connected(2));
    const double lambda = second_largest_eigenvalue(g);
    double worst = std::fabs(lambda - 0.82);
    worst = std::max(worst, std::fabs(g.y(0, 0) - 0.91));
    worst = std::max(worst, std::fabs(g.y(0, 1) - 0.09));
    worst = std::max(worst, std::fabs(g.y(1, 0) - 0.09));
    worst = std::max(worst, std::fabs(g.y(1, 1) - 0.91));
    std::ostringstream detail;
    detail << "max |error| = " << worst;
    crit.report(worst <= 1e-12, detail.str());
}

// 2. Lemma suite over >= 200 random connected topologies, M in {3..8}.
void criterion_lemma_suite() {
    Criterion crit("2 lemma suite (200 random topologies)", 60.0);
    VerifyOptions opts;
    opts.lemma_instances = 200;
    const auto results = verify_policy_suite(opts);
    bool pass = true;
    std::string failed;
    for (const auto& r : results) {
        if (!r.pass) {
            pass = false;
            failed += r.name + " ";
        }
    }
    crit.report(pass, pass ? "all lemma properties hold" : "failed: " + failed);
}

// 3. Simplex objective vs dense grid enumeration on every M=2 / M=3 instance.
void criterion_lp_oracle() {
    Criterion crit("3 LP objective vs grid-enumeration oracle (2e-3)", 60.0);
    struct Instance {
        Topology topo;
        Matrix times;
        double alpha, rho;
    };
    std::vector<Instance> instances;
    {
        for (double t : {1.0, 2.5}) {
            instances.push_back({Topology::fully_connected(2), clique_times(2, t), 0.1, 1.0});
        }
        // triangle with heterogeneous times
        Matrix tri(3, 3, 0.0);
        tri(0, 1) = tri(1, 0) = 1.0;
        tri(0, 2) = tri(2, 0) = 2.0;
        tri(1, 2) = tri(2, 1) = 3.0;
        instances.push_back({Topology::fully_connected(3), tri, 0.1, 0.5});
        instances.push_back({Topology::fully_connected(3), tri, 0.1, 1.5});
        // path 0-1-2
        Topology path(3, std::vector<uint8_t>(9, 0));
        path.set_edge(0, 1);
        path.set_edge(1, 2);
        Matrix pt(3, 3, 0.0);
        pt(0, 1) = pt(1, 0) = 1.0;
        pt(1, 2) = pt(2, 1) = 2.0;
        instances.push_back({path, pt, 0.1, 0.5});
        instances.push_back({path, pt, 0.1, 1.0});
    }
    int checked = 0;
    int infeasible_agreed = 0;
    bool pass = true;
    double worst = 0.0;
    std::string note;
    for (const auto& inst : instances) {
        const auto [lo, hi] = tbar_interval(inst.alpha, inst.rho, inst.times, inst.topo);
        if (lo > hi) continue;
        // 1.2*U sits beyond the feasible band: both routes must agree on that.
        for (double frac : {0.3, 0.7, 1.0, 1.2}) {
            const double tbar = lo + frac * (hi - lo);
            const auto lp = solve_policy_lp(inst.alpha, inst.rho, tbar, inst.times, inst.topo);
            const auto oracle =
                oracles::lp_objective_oracle(inst.alpha, inst.rho, tbar, inst.times, inst.topo, 1e-6);
            if (lp.has_value() != oracle.has_value()) {
                pass = false;
                note = "feasibility status mismatch";
                continue;
            }
            if (!lp) {
                ++infeasible_agreed;
                continue;
            }
            double objective = 0.0;
            for (int i = 0; i < inst.topo.nodes; ++i) objective += (*lp)(i, i);
            worst = std::max(worst, std::fabs(objective - *oracle));
            if (std::fabs(objective - *oracle) > 2e-3) pass = false;
            ++checked;
        }
    }
    std::ostringstream detail;
    detail << checked << " feasible + " << infeasible_agreed << " infeasible instances, worst gap "
           << worst << " " << note;
    crit.report(pass && checked >= 12 && infeasible_agreed >= 4, detail.str());
}

// 4. Coarse K=R=8 search within 10% of the fine K=R=64 grid on the canonical
// four-node instance (unit clique, one 5x link).
void criterion_search_vs_fine_grid() {
    Criterion crit("4 coarse search within 10% of fine grid", 30.0);
    auto times = clique_times(4, 1.0);
    times(0, 1) = times(1, 0) = 5.0;
    const auto topo = Topology::fully_connected(4);
    PolicySearchParams coarse;
    coarse.alpha = 0.1;
    coarse.outer_rounds = 8;
    coarse.inner_rounds = 8;
    PolicySearchParams fine = coarse;
    fine.outer_rounds = 64;
    fine.inner_rounds = 64;
    const auto c = generate_policy_matrix(coarse, times, topo);
    const auto f = generate_policy_matrix(fine, times, topo);
    if (!c || !f) {
        crit.report(false, "search returned no policy");
        return;
    }
    const double ratio = c->t_convergence / f->t_convergence;
    std::ostringstream detail;
    detail << "coarse " << c->t_convergence << " vs fine " << f->t_convergence << " (ratio "
           << ratio << ")";
    crit.report(f->t_convergence <= c->t_convergence + 1e-12 && ratio <= 1.10, detail.str());
}

// 5. Deterministic decay: sigma=0, identical quadratics, alpha=2/(mu+L),
// static network; deviation(k) <= lambda2^k * deviation(0), zero slack.
void criterion_deterministic_bound() {
    Criterion crit("5 theorem-1 bound, deterministic (zero slack)", 30.0);
    bool pass = true;
    double worst = 0.0;
    for (int nodes : {4, 8}) {
        for (int s = 1; s <= 20; ++s) {
            auto cfg = clique_config(nodes, 32);
            cfg.alpha = 1.0; // 2/(mu+L) for the unit isotropic quadratic
            cfg.seed = 1000 + s;
            cfg.init.kind = "sphere";
            cfg.init.radius = 2.0;
            cfg.stop.max_steps = 60 * nodes;
            cfg.monitor_period = 1e8;
            // t̄ = U grid point only: no self-selection slack, so every global
            // step is a communication step and the per-step envelope applies.
            cfg.search_inner = 1;
            const auto record = run_simulation(cfg);
            if (record.policy_changes.empty()) {
                pass = false;
                continue;
            }
            const double lambda = record.policy_changes.front().lambda2;
            const double dev0 = record.trace.front().deviation;
            for (const auto& row : record.trace) {
                if (row.k == 0) continue;
                const double bound = std::pow(lambda, static_cast<double>(row.k)) * dev0;
                worst = std::max(worst, row.deviation / bound);
                if (row.deviation > bound) pass = false;
            }
        }
    }
    std::ostringstream detail;
    detail << "max deviation/bound = " << worst << " over 40 runs (M=4,8; 20 seeds each)";
    crit.report(pass, detail.str());
}

// 6. Noisy bounds: mean over 100 seeds <= bound * 1.10 at every step, static
// (constant lambda) and dynamic (running lambda_max) networks.
void criterion_noisy_bounds() {
    Criterion crit("6 theorem-1/2 bounds, noisy (slack 10%)", 300.0);
    std::vector<uint64_t> seeds(100);
    for (int i = 0; i < 100; ++i) seeds[i] = 2000 + i;
    bool pass = true;
    std::ostringstream detail;

    {
        auto cfg = clique_config(4, 16);
        cfg.alpha = 1.0;
        cfg.loss.sigma = 0.5;
        cfg.init.kind = "sphere";
        cfg.init.radius = 2.0;
        cfg.init.seed = 42;
        cfg.stop.max_steps = 400;
        cfg.monitor_period = 1e8;
        const auto runs = run_sweep(cfg, Protocol::netmax, seeds);
        const auto mean_dev = mean_deviation_trace(runs);
        BoundParams params;
        params.kind = BoundKind::static_network;
        params.lambda_per_step.assign(mean_dev.size(),
                                      runs.front().policy_changes.front().lambda2);
        params.init_dev = runs.front().trace.front().deviation;
        params.alpha = cfg.alpha;
        params.sigma = cfg.loss.sigma;
        params.assumptions_met = runs.front().learning_rate_ok;
        const auto report = check_bound_trace(mean_dev, params, 0.10);
        if (report.violations != 0 || !report.binding) pass = false;
        detail << "static violations " << report.violations;
    }
    {
        auto cfg = clique_config(4, 16);
        cfg.alpha = 1.0;
        cfg.loss.sigma = 0.5;
        cfg.init.kind = "sphere";
        cfg.init.radius = 2.0;
        cfg.init.seed = 42;
        cfg.slowdown.enabled = true;
        cfg.slowdown.factor_min = 3.0;
        cfg.slowdown.factor_max = 3.0;
        cfg.slowdown.rotation_interval = 40.0;
        cfg.slowdown.seed = 11;
        cfg.monitor_period = 10.0;
        cfg.stop.max_steps = 400;
        const auto runs = run_sweep(cfg, Protocol::netmax, seeds);
        const auto mean_dev = mean_deviation_trace(runs);
        BoundParams params;
        params.kind = BoundKind::dynamic_network;
        params.lambda_per_step.assign(mean_dev.size(), 0.0);
        for (const auto& run : runs) {
            const auto per_step = lambda_max_per_step(run);
            for (size_t k = 0; k < mean_dev.size() && k < per_step.size(); ++k)
                params.lambda_per_step[k] = std::max(params.lambda_per_step[k], per_step[k]);
        }
        params.init_dev = runs.front().trace.front().deviation;
        params.alpha = cfg.alpha;
        params.sigma = cfg.loss.sigma;
        params.assumptions_met = runs.front().learning_rate_ok;
        const auto report = check_bound_trace(mean_dev, params, 0.10);
        if (report.violations != 0 || !report.binding) pass = false;
        detail << ", dynamic violations " << report.violations;
    }
    crit.report(pass, detail.str());
}

// 7. Noise-free consensus fixed point for M in {2,4,8}.
void criterion_fixed_point() {
    Criterion crit("7 consensus fixed point (deviation & spread < 1e-6)", 30.0);
    bool pass = true;
    double worst_dev = 0.0, worst_spread = 0.0;
    for (int nodes : {2, 4, 8}) {
        auto cfg = clique_config(nodes, 8);
        cfg.alpha = 0.5;
        cfg.seed = 7;
        cfg.stop.max_steps = 2000 * nodes;
        cfg.monitor_period = 1e8;
        const auto record = run_simulation(cfg);
        worst_dev = std::max(worst_dev, record.final_deviation);
        worst_spread = std::max(worst_spread, record.final_spread);
        if (record.final_deviation >= 1e-6 || record.final_spread >= 1e-6) pass = false;
    }
    std::ostringstream detail;
    detail << "worst deviation " << worst_dev << ", worst spread " << worst_spread;
    crit.report(pass, detail.str());
}

// 8. Heterogeneous advantage on the canonical M=8 config.
void criterion_heterogeneous_advantage() {
    Criterion crit("8 heterogeneous advantage (strict per seed, mean >= 1.3x)", 300.0);
    ExperimentConfig cfg = load_config_file(std::string(NETMAX_CONFIG_DIR) + "/hetero_m8.json");
    const auto comparison = run_comparison(cfg);
    const auto& uniform = comparison[0];
    const auto& netmax = comparison[1];
    const auto& allreduce = comparison[2];
    bool strict = uniform.reached == cfg.compare.seed_count &&
                  netmax.reached == cfg.compare.seed_count;
    for (int s = 0; s < cfg.compare.seed_count && strict; ++s)
        if (!(netmax.times_to_target[s] < uniform.times_to_target[s])) strict = false;
    const double speedup = uniform.mean_time / netmax.mean_time;
    const bool allreduce_slowest =
        allreduce.mean_time > uniform.mean_time && allreduce.mean_time > netmax.mean_time;
    std::ostringstream detail;
    detail << "speedup " << speedup << ", uniform " << uniform.mean_time << "s, netmax "
           << netmax.mean_time << "s, allreduce " << allreduce.mean_time << "s";
    crit.report(strict && speedup >= 1.3 && allreduce_slowest, detail.str());
}

// 9. Homogeneous parity within [0.85, 1.15].
void criterion_homogeneous_parity() {
    Criterion crit("9 homogeneous parity (ratio in [0.85, 1.15])", 120.0);
    ExperimentConfig cfg = load_config_file(std::string(NETMAX_CONFIG_DIR) + "/homogeneous_m8.json");
    const auto comparison = run_comparison(cfg);
    const auto& uniform = comparison[0];
    const auto& netmax = comparison[1];
    if (uniform.reached != cfg.compare.seed_count || netmax.reached != cfg.compare.seed_count) {
        crit.report(false, "some runs missed the target");
        return;
    }
    const double ratio = netmax.mean_time / uniform.mean_time;
    std::ostringstream detail;
    detail << "netmax/uniform mean ratio " << ratio;
    crit.report(ratio >= 0.85 && ratio <= 1.15, detail.str());
}

// 10. Byte-identical traces across two CLI invocations.
void criterion_determinism() {
    Criterion crit("10 determinism (byte-identical JSONL, two runs)", 10.0);
    const std::string cli = NETMAX_CLI_PATH;
    const std::string config = std::string(NETMAX_CONFIG_DIR) + "/hetero_m8.json";
    auto run_once = [&](const std::string& prefix) {
        const std::string cmd = cli + " run --config " + config +
                                " --override stop.max_steps=400 --seed 7 --out " + prefix +
                                " > /dev/null 2>&1";
        return std::system(cmd.c_str());
    };
    if (run_once("acceptance_det_a") != 0 || run_once("acceptance_det_b") != 0) {
        crit.report(false, "CLI invocation failed");
        return;
    }
    auto slurp = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const std::string a = slurp("acceptance_det_a.trace.jsonl");
    const std::string b = slurp("acceptance_det_b.trace.jsonl");
    for (const char* f : {"acceptance_det_a.trace.jsonl", "acceptance_det_a.summary.json",
                          "acceptance_det_b.trace.jsonl", "acceptance_det_b.summary.json"})
        std::remove(f);
    std::ostringstream detail;
    detail << a.size() << " bytes each";
    crit.report(!a.empty() && a == b, detail.str());
}

// 11. Approximation-ratio bound vs an independent high-precision evaluation.
void criterion_approximation_ratio() {
    Criterion crit("11 approximation-ratio bound (1e-9 relative)", 1.0);
    const double value = approximation_ratio_bound(5, 0.1, 2.0, 1.0);
    const long double am = powl(0.1L, 5);
    const long double reference = 2.0L * (logl(4.0L) - logl(2.0L)) /
                                  (logl(1.0L - 0.2L + am) - logl(1.0L - 0.2L + am * 0.1L));
    const double rel = std::fabs(value - static_cast<double>(reference)) /
                       static_cast<double>(reference);
    bool invalid_m_raised = false;
    try {
        approximation_ratio_bound(3, 0.1, 2.0, 1.0);
    } catch (const error& e) {
        invalid_m_raised = e.code() == errc::invalid_m;
    }
    std::ostringstream detail;
    detail << "value " << value << ", relative error " << rel << ", InvalidM raised "
           << (invalid_m_raised ? "yes" : "no");
    crit.report(rel <= 1e-9 && invalid_m_raised, detail.str());
}

} // namespace

int main() {
    std::printf("acceptance suite\n");
    criterion_gossip_golden();
    criterion_lemma_suite();
    criterion_lp_oracle();
    criterion_search_vs_fine_grid();
    criterion_deterministic_bound();
    criterion_noisy_bounds();
    criterion_fixed_point();
    criterion_heterogeneous_advantage();
    criterion_homogeneous_parity();
    criterion_determinism();
    criterion_approximation_ratio();
    if (failures == 0) {
        std::printf("all criteria passed\n");
        return 0;
    }
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
}
