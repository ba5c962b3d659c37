#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "netmax/matrix.hpp"
#include "netmax/topology.hpp"

namespace netmax {

// A scheduled change of the emulated network: from start_time on, the link
// (a,b) runs at base_comm * factor. Each entry replaces the previously active
// one, so at any instant at most one link is slowed.
struct SlowdownEvent {
    double start_time = 0.0;
    int a = 0;
    int b = 0;
    double factor = 1.0;
};

// The emulation regime: slow one uniformly random link by a factor drawn from
// [factor_min, factor_max], rotating to a fresh link every `interval` seconds.
// Draws are indexed by the rotation counter, so the active assignment at any
// clock is computable in O(1) without materializing a schedule.
struct RotatingRegime {
    double interval = 25.0;
    double factor_min = 2.0;
    double factor_max = 100.0;
    uint64_t seed = 0;
};

// The j-th assignment of the rotating regime.
SlowdownEvent rotating_event(const Topology& topo, const RotatingRegime& regime, long index);

// Explicit schedule for a bounded horizon (tests, hand-written configs).
std::vector<SlowdownEvent> make_rotating_slowdowns(const Topology& topo, double interval,
                                                   double horizon, double factor_min,
                                                   double factor_max, uint64_t seed);

// Heterogeneous, time-varying link timing environment. Immutable after
// construction; safe to read concurrently.
class LinkTimeModel {
public:
    LinkTimeModel(Topology topo, std::vector<double> compute_time, Matrix base_comm,
                  std::vector<SlowdownEvent> schedule = {});
    LinkTimeModel(Topology topo, std::vector<double> compute_time, Matrix base_comm,
                  RotatingRegime regime);

    const Topology& topology() const { return topo_; }
    double compute_time(int i) const { return compute_[i]; }
    const std::vector<double>& compute_times() const { return compute_; }
    const Matrix& base_comm() const { return base_comm_; }
    const std::vector<SlowdownEvent>& schedule() const { return schedule_; }
    bool procedural() const { return regime_.has_value(); }

    // N_{i,m} scaled by the slowdown active at `clock` on that link (if any).
    // Piecewise-constant in clock with breakpoints at schedule start times.
    double effective_comm_time(int i, int m, double clock) const;

    // max{C_i, N_{i,m}} with the active slowdown applied; C_i alone for m == i
    // (a self-iteration has no network leg).
    double iteration_time(int i, int m, double clock) const;

    // Base (unslowed) iteration-time matrix, zero off the edge set. Used by the
    // monitor to fill never-observed links.
    Matrix base_iteration_times() const;

    // Slowdown assignments active in [0, until), capped for record sanity.
    std::vector<SlowdownEvent> changes_until(double until, size_t cap = 10000) const;

private:
    void validate() const;

    Topology topo_;
    std::vector<double> compute_;
    Matrix base_comm_;
    std::vector<SlowdownEvent> schedule_;
    std::optional<RotatingRegime> regime_;
};

} // namespace netmax
