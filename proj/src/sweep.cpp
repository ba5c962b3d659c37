#include "netmax/sweep.hpp"

#include "netmax/errors.hpp"
#include "netmax/metrics.hpp"

namespace netmax {

std::vector<RunRecord> run_sweep_serial(const ExperimentConfig& cfg, Protocol protocol,
                                        const std::vector<uint64_t>& seeds) {
    std::vector<RunRecord> out(seeds.size());
    for (size_t i = 0; i < seeds.size(); ++i) {
        ExperimentConfig run_cfg = cfg;
        run_cfg.seed = seeds[i];
        out[i] = run_baseline(run_cfg, protocol);
    }
    return out;
}

std::vector<RunRecord> run_sweep(const ExperimentConfig& cfg, Protocol protocol,
                                 const std::vector<uint64_t>& seeds) {
    std::vector<RunRecord> out(seeds.size());
    const int total = static_cast<int>(seeds.size());
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < total; ++i) {
        ExperimentConfig run_cfg = cfg;
        run_cfg.seed = seeds[i];
        out[i] = run_baseline(run_cfg, protocol);
    }
    return out;
}

std::vector<ProtocolComparison> run_comparison(const ExperimentConfig& cfg) {
    if (cfg.compare.protocols.size() < 2)
        throw error(errc::config_invalid, "comparison needs at least two protocols");
    std::vector<uint64_t> seeds(cfg.compare.seed_count);
    for (int i = 0; i < cfg.compare.seed_count; ++i) seeds[i] = cfg.compare.seed_base + i;

    std::vector<ProtocolComparison> out;
    for (const auto& name : cfg.compare.protocols) {
        const Protocol protocol = protocol_from_string(name);
        ExperimentConfig run_cfg = cfg;
        // Stop as soon as the target is reached so sweeps stay cheap.
        if (!run_cfg.stop.target_deviation) run_cfg.stop.target_deviation = cfg.compare.target;
        const auto runs = run_sweep(run_cfg, protocol, seeds);
        ProtocolComparison cmp;
        cmp.protocol = name;
        for (const auto& run : runs) {
            const double t = time_to_eps(run, cfg.compare.target);
            cmp.times_to_target.push_back(t);
            if (t >= 0.0) {
                cmp.mean_time += t;
                cmp.reached++;
            }
        }
        if (cmp.reached > 0) cmp.mean_time /= cmp.reached;
        out.push_back(std::move(cmp));
    }
    for (auto& cmp : out) {
        if (cmp.mean_time > 0.0 && out.front().mean_time > 0.0)
            cmp.speedup_vs_first = out.front().mean_time / cmp.mean_time;
    }
    return out;
}

} // namespace netmax
