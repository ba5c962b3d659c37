#include "netmax/link_time.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "netmax/errors.hpp"
#include "netmax/rng.hpp"

namespace netmax {

SlowdownEvent rotating_event(const Topology& topo, const RotatingRegime& regime, long index) {
    const auto edges = topo.edges();
    Rng rng(split_seed(split_seed(regime.seed, 0x510cd011ULL), static_cast<uint64_t>(index)));
    const auto [a, b] = edges[rng.uniform_int(static_cast<int>(edges.size()))];
    const double factor = regime.factor_min >= regime.factor_max
                              ? regime.factor_min
                              : rng.uniform(regime.factor_min, regime.factor_max);
    return {index * regime.interval, a, b, factor};
}

std::vector<SlowdownEvent> make_rotating_slowdowns(const Topology& topo, double interval,
                                                   double horizon, double factor_min,
                                                   double factor_max, uint64_t seed) {
    std::vector<SlowdownEvent> out;
    if (topo.edges().empty() || interval <= 0.0) return out;
    RotatingRegime regime{interval, factor_min, factor_max, seed};
    for (long j = 0; j * interval < horizon; ++j) out.push_back(rotating_event(topo, regime, j));
    return out;
}

LinkTimeModel::LinkTimeModel(Topology topo, std::vector<double> compute_time, Matrix base_comm,
                             std::vector<SlowdownEvent> schedule)
    : topo_(std::move(topo)),
      compute_(std::move(compute_time)),
      base_comm_(std::move(base_comm)),
      schedule_(std::move(schedule)) {
    validate();
    if (!std::is_sorted(schedule_.begin(), schedule_.end(),
                        [](const SlowdownEvent& a, const SlowdownEvent& b) { return a.start_time < b.start_time; }))
        throw error(errc::config_invalid, "slowdown schedule must be sorted by start time");
    for (const auto& ev : schedule_) {
        if (ev.factor < 1.0)
            throw error(errc::config_invalid, "slowdown factor must be >= 1");
        if (ev.a < 0 || ev.a >= topo_.nodes || ev.b < 0 || ev.b >= topo_.nodes ||
            !topo_.edge(ev.a, ev.b))
            throw error(errc::unknown_edge, "slowdown event references a non-edge");
    }
}

LinkTimeModel::LinkTimeModel(Topology topo, std::vector<double> compute_time, Matrix base_comm,
                             RotatingRegime regime)
    : topo_(std::move(topo)),
      compute_(std::move(compute_time)),
      base_comm_(std::move(base_comm)),
      regime_(regime) {
    validate();
    if (regime.interval <= 0.0)
        throw error(errc::config_invalid, "rotation interval must be positive");
    if (regime.factor_min < 1.0 || regime.factor_max < regime.factor_min)
        throw error(errc::config_invalid, "slowdown factors must satisfy 1 <= min <= max");
}

void LinkTimeModel::validate() const {
    const int n = topo_.nodes;
    if (static_cast<int>(compute_.size()) != n || base_comm_.rows != n || base_comm_.cols != n)
        throw error(errc::config_invalid, "link time model dimensions do not match topology");
    for (int i = 0; i < n; ++i) {
        if (compute_[i] <= 0.0)
            throw error(errc::config_invalid,
                        "compute time of node " + std::to_string(i) + " must be positive");
        for (int m = i + 1; m < n; ++m) {
            if (!topo_.edge(i, m)) continue;
            if (base_comm_(i, m) <= 0.0)
                throw error(errc::config_invalid, "communication time on edge (" + std::to_string(i) +
                                                      "," + std::to_string(m) + ") must be positive");
            if (base_comm_(i, m) != base_comm_(m, i))
                throw error(errc::config_invalid, "base communication times must be symmetric on edges");
        }
    }
}

double LinkTimeModel::effective_comm_time(int i, int m, double clock) const {
    if (i < 0 || i >= topo_.nodes || m < 0 || m >= topo_.nodes || !topo_.edge(i, m))
        throw error(errc::unknown_edge,
                    "(" + std::to_string(i) + "," + std::to_string(m) + ") is not an edge");
    const double base = base_comm_(i, m);
    if (regime_) {
        if (clock < 0.0) return base;
        const long index = static_cast<long>(std::floor(clock / regime_->interval));
        const SlowdownEvent active = rotating_event(topo_, *regime_, index);
        if ((active.a == i && active.b == m) || (active.a == m && active.b == i))
            return base * active.factor;
        return base;
    }
    // Last event with start_time <= clock is the active one.
    auto it = std::upper_bound(schedule_.begin(), schedule_.end(), clock,
                               [](double c, const SlowdownEvent& e) { return c < e.start_time; });
    if (it != schedule_.begin()) {
        const SlowdownEvent& active = *std::prev(it);
        if ((active.a == i && active.b == m) || (active.a == m && active.b == i))
            return base * active.factor;
    }
    return base;
}

double LinkTimeModel::iteration_time(int i, int m, double clock) const {
    if (m == i) return compute_[i];
    return std::max(compute_[i], effective_comm_time(i, m, clock));
}

Matrix LinkTimeModel::base_iteration_times() const {
    const int n = topo_.nodes;
    Matrix t(n, n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int m = 0; m < n; ++m)
            if (topo_.edge(i, m)) t(i, m) = std::max(compute_[i], base_comm_(i, m));
    return t;
}

std::vector<SlowdownEvent> LinkTimeModel::changes_until(double until, size_t cap) const {
    std::vector<SlowdownEvent> out;
    if (regime_) {
        for (long j = 0; j * regime_->interval < until && out.size() < cap; ++j)
            out.push_back(rotating_event(topo_, *regime_, j));
        return out;
    }
    for (const auto& ev : schedule_) {
        if (ev.start_time >= until || out.size() >= cap) break;
        out.push_back(ev);
    }
    return out;
}

} // namespace netmax
