#pragma once

#include <cstdint>
#include <vector>

#include "netmax/config.hpp"
#include "netmax/sim.hpp"

namespace netmax {

// Independent runs of one config over a list of seeds. The OpenMP variant
// executes runs in parallel (no shared mutable state); results are returned in
// seed order, identical to the serial reference.
std::vector<RunRecord> run_sweep(const ExperimentConfig& cfg, Protocol protocol,
                                 const std::vector<uint64_t>& seeds);
std::vector<RunRecord> run_sweep_serial(const ExperimentConfig& cfg, Protocol protocol,
                                        const std::vector<uint64_t>& seeds);

struct ProtocolComparison {
    std::string protocol;
    std::vector<double> times_to_target; // per seed; negative = never reached
    double mean_time = 0.0;
    int reached = 0;
    double speedup_vs_first = 1.0; // mean_time(first) / mean_time(this)
};

// Runs every protocol in cfg.compare over the seed sweep and summarizes
// mean time-to-target plus speedups against the first protocol.
std::vector<ProtocolComparison> run_comparison(const ExperimentConfig& cfg);

} // namespace netmax
