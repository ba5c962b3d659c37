// Command surface: run / policy / compare / verify.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "netmax/config.hpp"
#include "netmax/errors.hpp"
#include "netmax/metrics.hpp"
#include "netmax/search.hpp"
#include "netmax/sim.hpp"
#include "netmax/sweep.hpp"
#include "netmax/verify.hpp"

using namespace netmax;
using nlohmann::json;

namespace {

bool log_enabled() {
    const char* level = std::getenv("NETMAX_LOG");
    return level == nullptr || std::string(level) != "quiet";
}

void info(const std::string& message) {
    if (log_enabled()) std::cerr << message << '\n';
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error(errc::io_failure, "cannot open " + path);
    return json::parse(in);
}

struct RunArgs {
    std::string config_path;
    std::string out_prefix = "run";
    std::vector<std::string> overrides;
    int64_t seed = -1;
    std::string protocol;
    bool csv = false;
};

int cmd_run(const RunArgs& args) {
    ExperimentConfig cfg;
    try {
        json doc = load_json_file(args.config_path);
        for (const auto& o : args.overrides) apply_override(doc, o);
        if (args.seed >= 0) doc["seed"] = static_cast<uint64_t>(args.seed);
        if (!args.protocol.empty()) doc["protocol"] = args.protocol;
        cfg = parse_config(doc);
    } catch (const json::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    }
    try {
        const RunRecord record = run_protocol(cfg);
        const std::string trace_path = args.out_prefix + ".trace.jsonl";
        const std::string summary_path = args.out_prefix + ".summary.json";
        write_metrics(record, trace_path, summary_path);
        if (args.csv) {
            std::ofstream csv(args.out_prefix + ".trace.csv", std::ios::binary);
            if (!csv) throw error(errc::io_failure, "cannot write the csv trace");
            csv << trace_csv(record);
        }
        info("wrote " + trace_path + " and " + summary_path);
        info("steps=" + std::to_string(record.global_steps) +
             " sim_time=" + std::to_string(record.sim_time) +
             " final_deviation=" + std::to_string(record.final_deviation));
        return 0;
    } catch (const error& e) {
        std::cerr << "runtime error: " << e.what() << '\n';
        return 2;
    }
}

struct PolicyArgs {
    std::string times_path;
    double alpha = 0.1;
    int outer = 16;
    int inner = 16;
    double epsilon = 0.01;
    double margin = 1e-6;
};

int cmd_policy(const PolicyArgs& args) {
    Matrix times;
    Topology topo;
    try {
        const json doc = load_json_file(args.times_path);
        const json& rows = doc.is_object() ? doc.at("times") : doc;
        const int n = static_cast<int>(rows.size());
        if (n < 2) throw error(errc::config_invalid, "time matrix needs at least 2 nodes");
        times = Matrix(n, n, 0.0);
        for (int i = 0; i < n; ++i) {
            if (static_cast<int>(rows.at(i).size()) != n)
                throw error(errc::config_invalid, "time matrix must be square");
            for (int m = 0; m < n; ++m) times(i, m) = rows.at(i).at(m).get<double>();
        }
        topo = Topology(n, std::vector<uint8_t>(static_cast<size_t>(n) * n, 0));
        if (doc.is_object() && doc.contains("adjacency")) {
            const auto& adj = doc.at("adjacency");
            for (int i = 0; i < n; ++i)
                for (int m = 0; m < n; ++m)
                    if (adj.at(i).at(m).get<int>() != 0) topo.set_edge(i, m);
        } else {
            // Positive off-diagonal entries mark edges.
            for (int i = 0; i < n; ++i)
                for (int m = i + 1; m < n; ++m)
                    if (times(i, m) > 0.0 || times(m, i) > 0.0) topo.set_edge(i, m);
        }
        const auto check = validate_topology(topo);
        if (!check.ok) throw error(check.code, check.detail);
    } catch (const json::exception& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return 1;
    } catch (const error& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return 1;
    }

    PolicySearchParams params;
    params.alpha = args.alpha;
    params.outer_rounds = args.outer;
    params.inner_rounds = args.inner;
    params.epsilon = args.epsilon;
    params.margin = args.margin;
    try {
        const auto result = generate_policy_matrix(params, times, topo);
        if (!result) {
            std::cerr << "NoFeasiblePolicy: every grid point was infeasible\n";
            return 3;
        }
        json out;
        std::vector<std::vector<double>> p(times.rows, std::vector<double>(times.rows, 0.0));
        for (int i = 0; i < times.rows; ++i)
            for (int m = 0; m < times.rows; ++m) p[i][m] = result->policy(i, m);
        out["policy"] = p;
        out["rho"] = result->rho;
        out["tbar"] = result->tbar;
        out["lambda2"] = result->lambda2;
        out["t_convergence"] = result->t_convergence;
        std::cout << out.dump(2) << '\n';
        return 0;
    } catch (const error& e) {
        std::cerr << "runtime error: " << e.what() << '\n';
        return 2;
    }
}

struct CompareArgs {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_path;
};

int cmd_compare(const CompareArgs& args) {
    ExperimentConfig cfg;
    try {
        json doc = load_json_file(args.config_path);
        for (const auto& o : args.overrides) apply_override(doc, o);
        cfg = parse_config(doc);
        if (cfg.compare.protocols.size() < 2) {
            std::cerr << "config error: compare.protocols must list at least two protocols\n";
            return 1;
        }
    } catch (const json::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    }
    try {
        const auto comparison = run_comparison(cfg);
        json out;
        out["schema_version"] = 1;
        out["target_deviation"] = cfg.compare.target;
        out["seed_count"] = cfg.compare.seed_count;
        json rows = json::array();
        for (const auto& cmp : comparison) {
            json row;
            row["protocol"] = cmp.protocol;
            row["mean_time_to_target"] = cmp.reached > 0 ? json(cmp.mean_time) : json(nullptr);
            row["reached"] = cmp.reached;
            row["speedup_vs_first"] = cmp.speedup_vs_first;
            row["times"] = cmp.times_to_target;
            rows.push_back(row);
        }
        out["protocols"] = rows;
        std::cout << out.dump(2) << '\n';
        if (!args.out_path.empty()) {
            std::ofstream f(args.out_path, std::ios::binary);
            if (!f) throw error(errc::io_failure, "cannot write " + args.out_path);
            f << out.dump(2) << '\n';
        }
        return 0;
    } catch (const error& e) {
        std::cerr << "runtime error: " << e.what() << '\n';
        return 2;
    }
}

struct VerifyArgs {
    std::string suite = "all";
    double lp_margin = 1e-6;
    bool quick = false;
};

int cmd_verify(const VerifyArgs& args) {
    VerifyOptions opts;
    opts.lp_margin = args.lp_margin;
    opts.quick = args.quick;
    std::vector<PropertyResult> results;
    try {
        results = run_verify(args.suite, opts);
    } catch (const error& e) {
        std::cerr << "verify error: " << e.what() << '\n';
        return 1;
    }
    bool all_pass = true;
    std::printf("%-34s %-6s %s\n", "property", "result", "detail");
    for (const auto& r : results) {
        std::printf("%-34s %-6s %s\n", r.name.c_str(), r.pass ? "pass" : "FAIL", r.detail.c_str());
        all_pass = all_pass && r.pass;
    }
    return all_pass ? 0 : 4;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"decentralized consensus-SGD simulator and policy optimizer"};
    app.require_subcommand(1);

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "run one simulation from a config file");
    run->add_option("--config", run_args.config_path, "experiment config (JSON)")->required();
    run->add_option("--out", run_args.out_prefix, "output prefix (<out>.trace.jsonl, <out>.summary.json)");
    run->add_option("--seed", run_args.seed, "override the config seed");
    run->add_option("--protocol", run_args.protocol, "override the protocol");
    run->add_option("--override", run_args.overrides, "config override key.path=value (repeatable)");
    run->add_flag("--csv", run_args.csv, "also write <out>.trace.csv for plotting");

    PolicyArgs policy_args;
    auto* policy = app.add_subcommand("policy", "generate a communication policy from a time matrix");
    policy->add_option("--times", policy_args.times_path, "square JSON time matrix")->required();
    policy->add_option("--alpha", policy_args.alpha, "learning rate");
    policy->add_option("--outer", policy_args.outer, "rho grid rounds (K)");
    policy->add_option("--inner", policy_args.inner, "tbar grid rounds (R)");
    policy->add_option("--epsilon", policy_args.epsilon, "target accuracy");
    policy->add_option("--margin", policy_args.margin, "probability floor margin");

    CompareArgs compare_args;
    auto* compare = app.add_subcommand("compare", "run protocols listed in compare.protocols over a seed sweep");
    compare->add_option("--config", compare_args.config_path, "experiment config (JSON)")->required();
    compare->add_option("--out", compare_args.out_path, "also write the comparison JSON here");
    compare->add_option("--override", compare_args.overrides, "config override key.path=value (repeatable)");

    VerifyArgs verify_args;
    auto* verify = app.add_subcommand("verify", "run the runtime property suites");
    verify->add_option("--suite", verify_args.suite, "policy | bounds | all")
        ->check(CLI::IsMember({"policy", "bounds", "all"}));
    verify->add_option("--lp-margin", verify_args.lp_margin, "probability floor margin");
    verify->add_flag("--quick", verify_args.quick, "smaller instance counts");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return cmd_run(run_args);
    if (policy->parsed()) return cmd_policy(policy_args);
    if (compare->parsed()) return cmd_compare(compare_args);
    if (verify->parsed()) return cmd_verify(verify_args);
    return 1;
}
