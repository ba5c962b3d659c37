#include <doctest.h>

#include <cmath>

#include "netmax/errors.hpp"
#include "netmax/policy.hpp"
#include "support/oracles.hpp"

using namespace netmax;

namespace {

Matrix uniform_times(int nodes, double value) {
    Matrix t(nodes, nodes, 0.0);
    for (int i = 0; i < nodes; ++i)
        for (int m = 0; m < nodes; ++m)
            if (i != m) t(i, m) = value;
    return t;
}

Matrix swap_policy() {
    Matrix p(2, 2, 0.0);
    p(0, 1) = 1.0;
    p(1, 0) = 1.0;
    return p;
}

} // namespace

TEST_CASE("rho interval") {
    CHECK(rho_interval(0.1).second == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(rho_interval(0.5).second == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(rho_interval(0.1).first == 0.0);
    CHECK_THROWS_AS(rho_interval(0.0), error);
}

TEST_CASE("tbar interval on the two-node instance") {
    const auto topo = Topology::fully_connected(2);
    const auto times = uniform_times(2, 1.0);
    {
        const auto [lo, hi] = tbar_interval(0.1, 1.0, times, topo);
        CHECK(lo == doctest::Approx(0.1).epsilon(1e-12));
        CHECK(hi == doctest::Approx(0.5).epsilon(1e-12));
    }
    {
        const auto [lo, hi] = tbar_interval(0.1, 1e-9, times, topo);
        CHECK(lo == doctest::Approx(0.0).epsilon(1e-6));
        CHECK(hi == doctest::Approx(0.5));
    }
    {
        // Degenerate single-point interval at the rho upper bound.
        const auto [lo, hi] = tbar_interval(0.1, 5.0, times, topo);
        CHECK(lo == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(hi == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("policy LP on the two-node instance") {
    const auto topo = Topology::fully_connected(2);
    const auto times = uniform_times(2, 1.0);

    const auto swap = solve_policy_lp(0.1, 1.0, 0.5, times, topo);
    REQUIRE(swap.has_value());
    CHECK((*swap)(0, 1) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK((*swap)(0, 0) == doctest::Approx(0.0));
    CHECK((*swap)(1, 0) == doctest::Approx(1.0).epsilon(1e-9));

    const auto lazy = solve_policy_lp(0.1, 1.0, 0.2, times, topo);
    REQUIRE(lazy.has_value());
    CHECK((*lazy)(0, 0) == doctest::Approx(0.6).epsilon(1e-9));
    CHECK((*lazy)(0, 1) == doctest::Approx(0.4).epsilon(1e-9));
    CHECK((*lazy)(1, 1) == doctest::Approx(0.6).epsilon(1e-9));

    CHECK_FALSE(solve_policy_lp(0.1, 1.0, 0.6, times, topo).has_value());
}

TEST_CASE("gossip expectation golden values") {
    const auto topo = Topology::fully_connected(2);
    const auto g = build_gossip_expectation(swap_policy(), 0.1, 1.0, topo);
    CHECK(g.y(0, 0) == doctest::Approx(0.91).epsilon(1e-13));
    CHECK(g.y(0, 1) == doctest::Approx(0.09).epsilon(1e-13));
    CHECK(g.y(1, 0) == doctest::Approx(0.09).epsilon(1e-13));
    CHECK(g.y(1, 1) == doctest::Approx(0.91).epsilon(1e-13));
}

TEST_CASE("gossip expectation with zero coupling is the identity") {
    const auto topo = Topology::fully_connected(2);
    const auto g = build_gossip_expectation(swap_policy(), 0.1, 0.0, topo);
    CHECK(g.y(0, 0) == 1.0);
    CHECK(g.y(0, 1) == 0.0);
}

TEST_CASE("gossip expectation rejects zero-probability edges") {
    const auto topo = Topology::fully_connected(2);
    Matrix p(2, 2, 0.0);
    p(0, 0) = 1.0;
    p(1, 0) = 1.0;
    CHECK_THROWS_AS(build_gossip_expectation(p, 0.1, 1.0, topo), error);
}

TEST_CASE("rows of the gossip expectation sum to one for LP policies") {
    for (uint64_t seed = 1; seed <= 40; ++seed) {
        const int nodes = 3 + static_cast<int>(seed % 6);
        const auto topo = oracles::random_connected_topology(nodes, seed);
        const auto times = oracles::random_symmetric_times(topo, seed);
        const double alpha = 0.1;
        const double rho = 0.4 * rho_interval(alpha).second * (0.3 + 0.7 * (seed % 5) / 4.0);
        const auto [lo, hi] = tbar_interval(alpha, rho, times, topo);
        if (lo > hi) continue;
        const double tbar = lo + 0.7 * (hi - lo);
        const auto policy = solve_policy_lp(alpha, rho, tbar, times, topo);
        if (!policy) continue;
        const auto g = build_gossip_expectation(*policy, alpha, rho, topo);
        for (int i = 0; i < nodes; ++i) {
            double row = 0.0, col = 0.0;
            for (int m = 0; m < nodes; ++m) {
                row += g.y(i, m);
                col += g.y(m, i);
                CHECK(g.y(i, m) == g.y(m, i)); // exact symmetry by construction
                CHECK(g.y(i, m) >= -1e-12);
            }
            CHECK(row == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(col == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("LP solutions satisfy every feasibility constraint") {
    int tested = 0;
    for (uint64_t seed = 100; seed < 160; ++seed) {
        const int nodes = 3 + static_cast<int>(seed % 6);
        const auto topo = oracles::random_connected_topology(nodes, seed);
        const auto times = oracles::random_symmetric_times(topo, seed);
        const double alpha = 0.05 + 0.1 * (seed % 3);
        const double rho = rho_interval(alpha).second * (0.01 + 0.015 * (seed % 7));
        const auto [lo, hi] = tbar_interval(alpha, rho, times, topo);
        if (lo > hi) continue;
        const double tbar = lo + (0.2 + 0.6 * (seed % 4) / 3.0) * (hi - lo);
        const auto policy = solve_policy_lp(alpha, rho, tbar, times, topo);
        if (!policy) continue;
        ++tested;
        const auto rep = check_feasibility(*policy, alpha, rho, times, topo);
        CHECK(rep.all_pass());
        // Expected per-node selection probabilities equalize to 1/M.
        const auto probs = expected_selection_probabilities(*policy, times, topo);
        for (double p : probs) CHECK(p == doctest::Approx(1.0 / nodes).epsilon(1e-9));
    }
    CHECK(tested > 20);
}

TEST_CASE("feasibility report flags a broken row sum") {
    const auto topo = Topology::fully_connected(2);
    Matrix p(2, 2, 0.0);
    p(0, 1) = 0.9;
    p(1, 0) = 1.0;
    const auto rep = check_feasibility(p, 0.1, 1.0, uniform_times(2, 1.0), topo);
    CHECK_FALSE(rep.row_stochastic);
    CHECK(rep.worst_row_sum_violation == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("uniform policy on a homogeneous clique passes the checks") {
    const int nodes = 4;
    const auto topo = Topology::fully_connected(nodes);
    Matrix p(nodes, nodes, 0.0);
    for (int i = 0; i < nodes; ++i)
        for (int m = 0; m < nodes; ++m)
            if (i != m) p(i, m) = 1.0 / (nodes - 1);
    const auto rep = check_feasibility(p, 0.1, 0.5, uniform_times(nodes, 1.0), topo);
    CHECK(rep.all_pass());
}

TEST_CASE("expected selection probabilities") {
    const auto topo = Topology::fully_connected(2);
    Matrix times(2, 2, 0.0);
    times(0, 1) = 1.0;
    times(1, 0) = 3.0;
    const auto p = expected_selection_probabilities(swap_policy(), times, topo);
    CHECK(p[0] == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(p[1] == doctest::Approx(0.25).epsilon(1e-12));

    const auto single = expected_selection_probabilities(Matrix(1, 1, 1.0), Matrix(1, 1, 0.0),
                                                         Topology(1, {0}));
    CHECK(single[0] == 1.0);
}

TEST_CASE("convergence time") {
    const double t = convergence_time(1.0, 0.82, 0.01);
    CHECK(t == doctest::Approx(std::log(0.01) / std::log(0.82)).epsilon(1e-12));
    CHECK(t == doctest::Approx(23.2057).epsilon(1e-4));
    CHECK(convergence_time(1.0, 0.5, 0.5) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::isinf(convergence_time(1.0, 1.0, 0.01)));
    CHECK(std::isinf(convergence_time(1.0, -0.1, 0.01)));
    // λ₂ → 0⁺ mixes in about one step.
    CHECK(convergence_time(1.0, 1e-12, 0.01) < 0.2);
}

TEST_CASE("approximation ratio bound") {
    const double bound = approximation_ratio_bound(5, 0.1, 2.0, 1.0);
    // Long-double evaluation of the same expression as an independent check.
    const long double am = powl(0.1L, 5);
    const long double expected = 2.0L * (logl(4.0L) - logl(2.0L)) /
                                 (logl(1.0L - 0.2L + am) - logl(1.0L - 0.2L + am * 0.1L));
    CHECK(bound == doctest::Approx(static_cast<double>(expected)).epsilon(1e-9));
    CHECK(bound == doctest::Approx(1.23e5).epsilon(0.01));

    // U = L: the prefactor is exactly one.
    const double flat = approximation_ratio_bound(5, 0.1, 3.0, 3.0);
    CHECK(flat == doctest::Approx(bound / 2.0).epsilon(1e-12));

    // Smallest legal M: ln(3) - ln(1) in the numerator, finite positive value.
    const double m4 = approximation_ratio_bound(4, 0.25, 1.0, 1.0);
    CHECK(m4 > 0.0);
    CHECK(std::isfinite(m4));

    CHECK_THROWS_AS(approximation_ratio_bound(3, 0.1, 2.0, 1.0), error);
    CHECK_THROWS_AS(approximation_ratio_bound(5, 1.5, 2.0, 1.0), error);
    CHECK_THROWS_AS(approximation_ratio_bound(5, 0.1, 1.0, 2.0), error);
}

TEST_CASE("expected selection probabilities reject zero iteration time") {
    const auto topo = Topology::fully_connected(2);
    Matrix p(2, 2, 0.0);
    p(0, 0) = 1.0; // all mass on self: zero expected communication time
    p(1, 0) = 1.0;
    CHECK_THROWS_AS(expected_selection_probabilities(p, uniform_times(2, 1.0), topo), error);
}

TEST_CASE("returned rows are the most even split of the optimal face") {
    // Among all optimal solutions the solver returns the minimum-norm one:
    // random feasible perturbations within the face can only raise Σ p².
    const auto topo = Topology::fully_connected(4);
    Matrix times(4, 4, 0.0);
    for (int i = 0; i < 4; ++i)
        for (int m = 0; m < 4; ++m)
            if (i != m) times(i, m) = 1.0;
    times(0, 1) = times(1, 0) = 2.0;

    const double alpha = 0.1, rho = 0.8;
    const auto [lo, hi] = tbar_interval(alpha, rho, times, topo);
    REQUIRE(lo <= hi);
    const double tbar = lo + 0.8 * (hi - lo);
    const auto policy = solve_policy_lp(alpha, rho, tbar, times, topo);
    REQUIRE(policy.has_value());

    Rng rng(71);
    const double floor = 2.0 * alpha * rho + 1e-6;
    for (int row = 0; row < 4; ++row) {
        double norm = 0.0;
        for (int m = 0; m < 4; ++m)
            if (m != row) norm += (*policy)(row, m) * (*policy)(row, m);
        // perturb along the null space of (Σp, Σtp) over two equal-time links
        std::vector<int> unit_links;
        for (int m = 0; m < 4; ++m)
            if (m != row && times(row, m) == 1.0) unit_links.push_back(m);
        REQUIRE(unit_links.size() >= 2);
        for (int trial = 0; trial < 50; ++trial) {
            const double delta = 0.2 * (rng.uniform() - 0.5);
            const int a = unit_links[0], b = unit_links[1];
            const double pa = (*policy)(row, a) + delta;
            const double pb = (*policy)(row, b) - delta;
            if (pa < floor || pb < floor) continue;
            double perturbed = norm - (*policy)(row, a) * (*policy)(row, a) -
                               (*policy)(row, b) * (*policy)(row, b) + pa * pa + pb * pb;
            CHECK(perturbed >= norm - 1e-12);
        }
    }
}

TEST_CASE("simplex objective matches the grid enumeration oracle") {
    const auto topo2 = Topology::fully_connected(2);
    const auto times2 = uniform_times(2, 1.0);
    for (double tbar : {0.25, 0.35, 0.5}) {
        const auto policy = solve_policy_lp(0.1, 1.0, tbar, times2, topo2);
        const auto oracle = oracles::lp_objective_oracle(0.1, 1.0, tbar, times2, topo2, 1e-6);
        REQUIRE(policy.has_value());
        REQUIRE(oracle.has_value());
        double obj = 0.0;
        for (int i = 0; i < 2; ++i) obj += (*policy)(i, i);
        CHECK(obj == doctest::Approx(*oracle).epsilon(2e-3));
    }
}
