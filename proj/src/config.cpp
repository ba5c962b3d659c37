#include "netmax/config.hpp"

#include <cmath>
#include <fstream>

#include "netmax/errors.hpp"
#include "netmax/rng.hpp"

namespace netmax {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) { throw error(errc::config_invalid, what); }

double require_positive(double v, const char* name) {
    if (!(v > 0.0)) bad(std::string(name) + " must be positive");
    return v;
}

Topology parse_topology(const json& doc) {
    const std::string kind = doc.value("kind", "fully-connected");
    if (kind == "explicit") {
        if (!doc.contains("adjacency")) bad("explicit topology needs an adjacency matrix");
        const auto& adj = doc.at("adjacency");
        const int n = static_cast<int>(adj.size());
        Topology topo(n, std::vector<uint8_t>(static_cast<size_t>(n) * n, 0));
        for (int i = 0; i < n; ++i) {
            if (static_cast<int>(adj.at(i).size()) != n) bad("adjacency matrix must be square");
            for (int m = 0; m < n; ++m)
                topo.adj[static_cast<size_t>(i) * n + m] = adj.at(i).at(m).get<int>() != 0;
        }
        const auto check = validate_topology(topo);
        if (!check.ok) bad("invalid topology: " + check.detail);
        return topo;
    }
    const int nodes = doc.value("nodes", 0);
    if (nodes < 2) bad("topology needs at least 2 nodes");
    if (kind == "fully-connected") return Topology::fully_connected(nodes);
    if (kind == "ring") return Topology::ring(nodes);
    bad("unknown topology kind '" + kind + "'");
}

std::vector<double> parse_compute(const json& doc, int nodes) {
    if (!doc.contains("compute")) return std::vector<double>(nodes, 0.01);
    const auto& c = doc.at("compute");
    if (c.is_number()) return std::vector<double>(nodes, require_positive(c.get<double>(), "compute"));
    if (static_cast<int>(c.size()) != nodes) bad("compute vector length must equal node count");
    std::vector<double> out(nodes);
    for (int i = 0; i < nodes; ++i) out[i] = require_positive(c.at(i).get<double>(), "compute");
    return out;
}

Matrix parse_comm(const json& doc, const Topology& topo, uint64_t config_seed) {
    const int n = topo.nodes;
    Matrix comm(n, n, 0.0);
    auto fill_scalar = [&](double v) {
        for (int i = 0; i < n; ++i)
            for (int m = 0; m < n; ++m)
                if (topo.edge(i, m)) comm(i, m) = v;
    };
    if (!doc.contains("comm")) {
        fill_scalar(1.0);
        return comm;
    }
    const auto& c = doc.at("comm");
    if (c.is_number()) {
        fill_scalar(require_positive(c.get<double>(), "comm"));
        return comm;
    }
    if (c.is_object()) {
        if (c.value("kind", "") != "uniform-random") bad("unknown comm generator");
        const double lo = require_positive(c.value("low", 0.5), "comm.low");
        const double hi = require_positive(c.value("high", 2.0), "comm.high");
        if (hi < lo) bad("comm.high must be >= comm.low");
        Rng rng(split_seed(c.value("seed", config_seed), 0xc0117ULL));
        for (int i = 0; i < n; ++i)
            for (int m = i + 1; m < n; ++m)
                if (topo.edge(i, m)) {
                    const double v = rng.uniform(lo, hi);
                    comm(i, m) = v;
                    comm(m, i) = v;
                }
        return comm;
    }
    if (static_cast<int>(c.size()) != n) bad("comm matrix must be square");
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(c.at(i).size()) != n) bad("comm matrix must be square");
        for (int m = 0; m < n; ++m) comm(i, m) = c.at(i).at(m).get<double>();
    }
    for (int i = 0; i < n; ++i)
        for (int m = i + 1; m < n; ++m)
            if (topo.edge(i, m)) {
                if (comm(i, m) != comm(m, i)) bad("comm matrix must be symmetric on edges");
                require_positive(comm(i, m), "comm entry");
            }
    return comm;
}

SlowdownSpec parse_slowdown(const json& doc) {
    SlowdownSpec spec;
    if (!doc.contains("slowdown")) return spec;
    const auto& s = doc.at("slowdown");
    spec.enabled = s.value("enabled", false);
    spec.factor_min = s.value("factor_min", 2.0);
    spec.factor_max = s.value("factor_max", 100.0);
    spec.rotation_interval = s.value("rotation_interval", 25.0);
    if (spec.factor_min < 1.0 || spec.factor_max < spec.factor_min)
        bad("slowdown factors must satisfy 1 <= factor_min <= factor_max");
    if (s.contains("seed") && !s.at("seed").is_null()) spec.seed = s.at("seed").get<uint64_t>();
    if (s.contains("events") && !s.at("events").is_null()) {
        std::vector<SlowdownEvent> events;
        for (const auto& e : s.at("events")) {
            SlowdownEvent ev;
            ev.start_time = e.at("start").get<double>();
            ev.a = e.at("link").at(0).get<int>();
            ev.b = e.at("link").at(1).get<int>();
            ev.factor = e.at("factor").get<double>();
            events.push_back(ev);
        }
        spec.events = std::move(events);
    }
    return spec;
}

LossSpec parse_loss(const json& doc, int nodes) {
    LossSpec spec;
    if (doc.contains("loss")) {
        const auto& l = doc.at("loss");
        spec.dim = l.value("dim", 8);
        if (spec.dim < 1) bad("loss.dim must be >= 1");
        spec.sigma = l.value("sigma", 0.0);
        if (spec.sigma < 0.0) bad("loss.sigma must be >= 0");
        const std::string noise = l.value("noise", "gaussian");
        if (noise == "gaussian")
            spec.noise = NoiseKind::gaussian;
        else if (noise == "rademacher")
            spec.noise = NoiseKind::rademacher;
        else
            bad("unknown noise kind '" + noise + "'");

        if (l.contains("curvature")) {
            const auto& c = l.at("curvature");
            spec.curvature_kind = c.value("kind", "shared-diagonal");
            if (spec.curvature_kind == "shared-diagonal") {
                if (c.contains("values")) {
                    spec.shared_diag = c.at("values").get<std::vector<double>>();
                    if (static_cast<int>(spec.shared_diag.size()) != spec.dim)
                        bad("curvature.values length must equal loss.dim");
                } else {
                    spec.shared_diag.assign(spec.dim, c.value("value", 1.0));
                }
            } else if (spec.curvature_kind == "per-node-diagonal") {
                spec.per_node_diag = c.at("values").get<std::vector<std::vector<double>>>();
                if (static_cast<int>(spec.per_node_diag.size()) != nodes)
                    bad("per-node curvature needs one diagonal per node");
                for (const auto& d : spec.per_node_diag)
                    if (static_cast<int>(d.size()) != spec.dim)
                        bad("per-node curvature diagonals must have loss.dim entries");
            } else if (spec.curvature_kind == "random-spd") {
                spec.spectrum = c.at("spectrum").get<std::vector<double>>();
                if (static_cast<int>(spec.spectrum.size()) != spec.dim)
                    bad("curvature.spectrum length must equal loss.dim");
                spec.curvature_seed = c.value("seed", 1);
            } else {
                bad("unknown curvature kind '" + spec.curvature_kind + "'");
            }
        } else {
            spec.shared_diag.assign(spec.dim, 1.0);
        }
        for (double v : spec.shared_diag)
            if (v < 0.0) bad("curvature entries must be nonnegative");

        if (l.contains("centers")) {
            const auto& c = l.at("centers");
            spec.center_kind = c.value("kind", "shared");
            if (spec.center_kind == "shared") {
                if (c.contains("values")) {
                    spec.shared_center = c.at("values").get<std::vector<double>>();
                    if (static_cast<int>(spec.shared_center.size()) != spec.dim)
                        bad("centers.values length must equal loss.dim");
                } else {
                    spec.shared_center.assign(spec.dim, c.value("value", 0.0));
                }
            } else if (spec.center_kind == "per-node") {
                spec.per_node_center = c.at("values").get<std::vector<std::vector<double>>>();
                if (static_cast<int>(spec.per_node_center.size()) != nodes)
                    bad("per-node centers need one vector per node");
            } else if (spec.center_kind == "gaussian") {
                spec.center_scale = c.value("scale", 1.0);
                if (c.contains("seed") && !c.at("seed").is_null())
                    spec.center_seed = c.at("seed").get<uint64_t>();
            } else {
                bad("unknown center kind '" + spec.center_kind + "'");
            }
        } else {
            spec.shared_center.assign(spec.dim, 0.0);
        }
    } else {
        spec.shared_diag.assign(spec.dim, 1.0);
        spec.shared_center.assign(spec.dim, 0.0);
    }
    return spec;
}

InitSpec parse_init(const json& doc) {
    InitSpec spec;
    if (!doc.contains("init")) return spec;
    const auto& i = doc.at("init");
    spec.kind = i.value("kind", "gaussian");
    if (spec.kind != "gaussian" && spec.kind != "sphere" && spec.kind != "zero")
        bad("unknown init kind '" + spec.kind + "'");
    spec.scale = i.value("scale", 1.0);
    spec.radius = i.value("radius", 1.0);
    if (i.contains("seed") && !i.at("seed").is_null()) spec.seed = i.at("seed").get<uint64_t>();
    return spec;
}

} // namespace

Protocol protocol_from_string(const std::string& name) {
    if (name == "netmax") return Protocol::netmax;
    if (name == "uniform-async") return Protocol::uniform_async;
    if (name == "sync-allreduce") return Protocol::sync_allreduce;
    if (name == "uniform-async-with-monitor") return Protocol::uniform_async_with_monitor;
    bad("unknown protocol '" + name + "'");
}

std::string protocol_to_string(Protocol p) {
    switch (p) {
        case Protocol::netmax: return "netmax";
        case Protocol::uniform_async: return "uniform-async";
        case Protocol::sync_allreduce: return "sync-allreduce";
        case Protocol::uniform_async_with_monitor: return "uniform-async-with-monitor";
    }
    return "netmax";
}

ExperimentConfig parse_config(const json& doc) {
    ExperimentConfig cfg;
    cfg.schema_version = doc.value("schema_version", 1);
    if (cfg.schema_version != 1) bad("unsupported schema_version");
    cfg.protocol = protocol_from_string(doc.value("protocol", "netmax"));
    cfg.seed = doc.value("seed", 1);

    if (!doc.contains("topology")) bad("config needs a topology");
    cfg.topology = parse_topology(doc.at("topology"));
    const int n = cfg.topology.nodes;

    const json link = doc.value("link_times", json::object());
    cfg.compute_times = parse_compute(link, n);
    cfg.comm_times = parse_comm(link, cfg.topology, cfg.seed);
    cfg.slowdown = parse_slowdown(doc);

    cfg.alpha = require_positive(doc.value("alpha", 0.1), "alpha");
    cfg.rho_init = doc.value("rho_init", 0.1);
    if (cfg.rho_init < 0.0) bad("rho_init must be >= 0");
    cfg.beta = doc.value("beta", 0.9);
    if (cfg.beta < 0.0 || cfg.beta > 1.0) bad("beta must lie in [0,1]");
    cfg.monitor_period = require_positive(doc.value("monitor_period", 5.0), "monitor_period");
    cfg.epsilon = doc.value("epsilon", 0.01);
    if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) bad("epsilon must lie in (0,1)");
    cfg.search_outer = doc.value("search_outer", 16);
    cfg.search_inner = doc.value("search_inner", 16);
    if (cfg.search_outer < 1 || cfg.search_inner < 1) bad("search rounds must be >= 1");
    cfg.lp_margin = doc.value("lp_margin", 1e-6);
    cfg.stale_reads = doc.value("stale_reads", false);

    cfg.loss = parse_loss(doc, n);
    cfg.init = parse_init(doc);

    if (doc.contains("stop")) {
        const auto& s = doc.at("stop");
        cfg.stop.max_time = require_positive(s.value("max_time", 100.0), "stop.max_time");
        cfg.stop.max_steps = s.value("max_steps", 100000L);
        if (cfg.stop.max_steps < 0) bad("stop.max_steps must be >= 0");
        if (s.contains("target_deviation") && !s.at("target_deviation").is_null())
            cfg.stop.target_deviation = s.at("target_deviation").get<double>();
    }
    if (doc.contains("metrics")) {
        const auto& m = doc.at("metrics");
        if (m.contains("eps_list")) cfg.metrics.eps_list = m.at("eps_list").get<std::vector<double>>();
        cfg.metrics.trace_every = m.value("trace_every", 1);
        if (cfg.metrics.trace_every < 1) bad("metrics.trace_every must be >= 1");
    }
    if (doc.contains("compare")) {
        const auto& c = doc.at("compare");
        cfg.compare.protocols = c.value("protocols", std::vector<std::string>{});
        for (const auto& p : cfg.compare.protocols) protocol_from_string(p);
        cfg.compare.seed_count = c.value("seed_count", 20);
        if (cfg.compare.seed_count < 1) bad("compare.seed_count must be >= 1");
        cfg.compare.seed_base = c.value("seed_base", 1);
        cfg.compare.target = c.value("target", cfg.metrics.eps_list.empty() ? 0.01 : cfg.metrics.eps_list.back());
    }
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error(errc::io_failure, "cannot open config file " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        bad(std::string("config parse error: ") + e.what());
    }
    return parse_config(doc);
}

json config_to_json(const ExperimentConfig& cfg) {
    json doc;
    doc["schema_version"] = cfg.schema_version;
    doc["protocol"] = protocol_to_string(cfg.protocol);
    doc["seed"] = cfg.seed;

    json topo;
    topo["kind"] = "explicit";
    std::vector<std::vector<int>> adjacency(cfg.topology.nodes, std::vector<int>(cfg.topology.nodes, 0));
    for (int i = 0; i < cfg.topology.nodes; ++i)
        for (int m = 0; m < cfg.topology.nodes; ++m) adjacency[i][m] = cfg.topology.edge(i, m) ? 1 : 0;
    topo["adjacency"] = adjacency;
    doc["topology"] = topo;

    json link;
    link["compute"] = cfg.compute_times;
    std::vector<std::vector<double>> comm(cfg.topology.nodes, std::vector<double>(cfg.topology.nodes, 0.0));
    for (int i = 0; i < cfg.topology.nodes; ++i)
        for (int m = 0; m < cfg.topology.nodes; ++m) comm[i][m] = cfg.comm_times(i, m);
    link["comm"] = comm;
    doc["link_times"] = link;

    json slow;
    slow["enabled"] = cfg.slowdown.enabled;
    slow["factor_min"] = cfg.slowdown.factor_min;
    slow["factor_max"] = cfg.slowdown.factor_max;
    slow["rotation_interval"] = cfg.slowdown.rotation_interval;
    slow["seed"] = cfg.slowdown.seed ? json(*cfg.slowdown.seed) : json(nullptr);
    if (cfg.slowdown.events) {
        json events = json::array();
        for (const auto& e : *cfg.slowdown.events)
            events.push_back({{"start", e.start_time}, {"link", {e.a, e.b}}, {"factor", e.factor}});
        slow["events"] = events;
    } else {
        slow["events"] = nullptr;
    }
    doc["slowdown"] = slow;

    doc["alpha"] = cfg.alpha;
    doc["rho_init"] = cfg.rho_init;
    doc["beta"] = cfg.beta;
    doc["monitor_period"] = cfg.monitor_period;
    doc["epsilon"] = cfg.epsilon;
    doc["search_outer"] = cfg.search_outer;
    doc["search_inner"] = cfg.search_inner;
    doc["lp_margin"] = cfg.lp_margin;
    doc["stale_reads"] = cfg.stale_reads;

    json loss;
    loss["dim"] = cfg.loss.dim;
    loss["sigma"] = cfg.loss.sigma;
    loss["noise"] = cfg.loss.noise == NoiseKind::gaussian ? "gaussian" : "rademacher";
    json curvature;
    curvature["kind"] = cfg.loss.curvature_kind;
    if (cfg.loss.curvature_kind == "shared-diagonal") curvature["values"] = cfg.loss.shared_diag;
    if (cfg.loss.curvature_kind == "per-node-diagonal") curvature["values"] = cfg.loss.per_node_diag;
    if (cfg.loss.curvature_kind == "random-spd") {
        curvature["spectrum"] = cfg.loss.spectrum;
        curvature["seed"] = cfg.loss.curvature_seed;
    }
    loss["curvature"] = curvature;
    json centers;
    centers["kind"] = cfg.loss.center_kind;
    if (cfg.loss.center_kind == "shared") centers["values"] = cfg.loss.shared_center;
    if (cfg.loss.center_kind == "per-node") centers["values"] = cfg.loss.per_node_center;
    if (cfg.loss.center_kind == "gaussian") {
        centers["scale"] = cfg.loss.center_scale;
        centers["seed"] = cfg.loss.center_seed ? json(*cfg.loss.center_seed) : json(nullptr);
    }
    loss["centers"] = centers;
    doc["loss"] = loss;

    json init;
    init["kind"] = cfg.init.kind;
    init["scale"] = cfg.init.scale;
    init["radius"] = cfg.init.radius;
    init["seed"] = cfg.init.seed ? json(*cfg.init.seed) : json(nullptr);
    doc["init"] = init;

    json stop;
    stop["max_time"] = cfg.stop.max_time;
    stop["max_steps"] = cfg.stop.max_steps;
    stop["target_deviation"] =
        cfg.stop.target_deviation ? json(*cfg.stop.target_deviation) : json(nullptr);
    doc["stop"] = stop;

    json metrics;
    metrics["eps_list"] = cfg.metrics.eps_list;
    metrics["trace_every"] = cfg.metrics.trace_every;
    doc["metrics"] = metrics;

    json compare;
    compare["protocols"] = cfg.compare.protocols;
    compare["seed_count"] = cfg.compare.seed_count;
    compare["seed_base"] = cfg.compare.seed_base;
    compare["target"] = cfg.compare.target;
    doc["compare"] = compare;
    return doc;
}

void apply_override(json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) bad("override must have the form key=value");
    const std::string path = assignment.substr(0, eq);
    const std::string value = assignment.substr(eq + 1);
    json* node = &doc;
    size_t start = 0;
    while (true) {
        const size_t dot = path.find('.', start);
        const std::string key = path.substr(start, dot == std::string::npos ? dot : dot - start);
        if (key.empty()) bad("override path has an empty segment");
        if (dot == std::string::npos) {
            json parsed;
            try {
                parsed = json::parse(value);
            } catch (const json::parse_error&) {
                parsed = value; // plain string
            }
            (*node)[key] = parsed;
            return;
        }
        node = &(*node)[key];
        start = dot + 1;
    }
}

std::vector<QuadraticLoss> make_losses(const ExperimentConfig& cfg) {
    const int n = cfg.topology.nodes;
    const LossSpec& spec = cfg.loss;

    std::vector<std::vector<double>> centers(n);
    if (spec.center_kind == "shared") {
        for (auto& c : centers) c = spec.shared_center;
    } else if (spec.center_kind == "per-node") {
        centers = spec.per_node_center;
    } else {
        Rng rng(split_seed(spec.center_seed.value_or(0xcafef00dULL), 0xce27e25ULL));
        for (auto& c : centers) {
            c.resize(spec.dim);
            for (double& v : c) v = spec.center_scale * rng.normal();
        }
    }

    std::vector<QuadraticLoss> losses;
    losses.reserve(n);
    for (int i = 0; i < n; ++i) {
        if (spec.curvature_kind == "shared-diagonal") {
            losses.push_back(QuadraticLoss::from_diagonal(spec.shared_diag, centers[i], spec.sigma,
                                                          spec.noise));
        } else if (spec.curvature_kind == "per-node-diagonal") {
            losses.push_back(QuadraticLoss::from_diagonal(spec.per_node_diag[i], centers[i],
                                                          spec.sigma, spec.noise));
        } else {
            losses.push_back(QuadraticLoss::random_spd(
                spec.spectrum, centers[i], split_seed(spec.curvature_seed, 1000 + i), spec.sigma,
                spec.noise));
        }
    }
    return losses;
}

LinkTimeModel make_link_model(const ExperimentConfig& cfg, uint64_t run_seed) {
    if (cfg.slowdown.enabled && cfg.slowdown.events)
        return LinkTimeModel(cfg.topology, cfg.compute_times, cfg.comm_times, *cfg.slowdown.events);
    if (cfg.slowdown.enabled) {
        RotatingRegime regime;
        regime.interval = cfg.slowdown.rotation_interval;
        regime.factor_min = cfg.slowdown.factor_min;
        regime.factor_max = cfg.slowdown.factor_max;
        regime.seed = cfg.slowdown.seed.value_or(run_seed);
        return LinkTimeModel(cfg.topology, cfg.compute_times, cfg.comm_times, regime);
    }
    return LinkTimeModel(cfg.topology, cfg.compute_times, cfg.comm_times);
}

std::vector<std::vector<double>> initial_models(const ExperimentConfig& cfg, uint64_t run_seed,
                                                const std::vector<double>& x_star) {
    const int n = cfg.topology.nodes;
    const int dim = cfg.loss.dim;
    Rng rng(split_seed(cfg.init.seed.value_or(run_seed), 0x1417ULL));
    std::vector<std::vector<double>> xs(n, std::vector<double>(dim, 0.0));
    if (cfg.init.kind == "zero") return xs;
    if (cfg.init.kind == "gaussian") {
        for (auto& x : xs)
            for (double& v : x) v = cfg.init.scale * rng.normal();
        return xs;
    }
    // sphere: exactly `radius` from the optimum, random direction per node
    for (auto& x : xs) {
        double norm = 0.0;
        do {
            norm = 0.0;
            for (double& v : x) {
                v = rng.normal();
                norm += v * v;
            }
            norm = std::sqrt(norm);
        } while (norm < 1e-12);
        for (int d = 0; d < dim; ++d) x[d] = x_star[d] + cfg.init.radius * x[d] / norm;
    }
    return xs;
}

} // namespace netmax
