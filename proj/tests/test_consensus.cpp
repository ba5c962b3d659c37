#include <doctest.h>

#include <cmath>

#include "netmax/errors.hpp"
#include "netmax/loss.hpp"
#include "netmax/update.hpp"
#include "support/oracles.hpp"

using namespace netmax;

TEST_CASE("gradient at the minimizer vanishes") {
    const auto loss = QuadraticLoss::from_diagonal({1.0, 2.0}, {0.5, -0.25});
    Rng rng(1);
    const auto g = local_gradient(loss, {0.5, -0.25}, rng);
    CHECK(g[0] == 0.0);
    CHECK(g[1] == 0.0);
}

TEST_CASE("identity quadratic gradient") {
    const auto loss = QuadraticLoss::from_diagonal({1.0, 1.0}, {0.0, 0.0});
    Rng rng(1);
    const auto g = local_gradient(loss, {2.0, 0.0}, rng);
    CHECK(g[0] == doctest::Approx(2.0));
    CHECK(g[1] == doctest::Approx(0.0));
}

TEST_CASE("noise satisfies the variance contract") {
    for (NoiseKind kind : {NoiseKind::gaussian, NoiseKind::rademacher}) {
        auto loss = QuadraticLoss::from_diagonal({1.0, 1.0, 1.0, 1.0}, {0, 0, 0, 0}, 1.0, kind);
        Rng rng(2024);
        const std::vector<double> x = loss.b;
        double sum = 0.0;
        const int draws = 100000;
        for (int i = 0; i < draws; ++i) {
            const auto g = local_gradient(loss, x, rng); // pure noise at the minimizer
            sum += dot(g, g);
        }
        CHECK(sum / draws == doctest::Approx(1.0).epsilon(0.05));
    }
}

TEST_CASE("analytic gradients match finite differences") {
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const int dim = 2 + trial % 4;
        std::vector<double> spectrum(dim), b(dim), x(dim);
        for (int j = 0; j < dim; ++j) {
            spectrum[j] = 0.5 + 2.0 * rng.uniform();
            b[j] = rng.normal();
            x[j] = rng.normal();
        }
        const auto loss = trial % 2 == 0
                              ? QuadraticLoss::from_diagonal(spectrum, b)
                              : QuadraticLoss::random_spd(spectrum, b, 1000 + trial);
        const auto analytic = loss.gradient_exact(x);
        const auto numeric = oracles::finite_difference_gradient(loss, x);
        for (int j = 0; j < dim; ++j)
            CHECK(analytic[j] == doctest::Approx(numeric[j]).epsilon(1e-6));
    }
}

TEST_CASE("two step update golden value") {
    UpdateParams params{0.1, 1.0, 2, 1.0};
    const auto out = two_step_update({1.0}, {0.5}, {0.0}, params);
    CHECK(out[0] == doctest::Approx(0.855).epsilon(1e-12));
}

TEST_CASE("zero coupling reduces to local SGD") {
    UpdateParams params{0.1, 0.0, 2, 0.5};
    const auto out = two_step_update({1.0}, {0.5}, {7.0}, params);
    CHECK(out[0] == doctest::Approx(0.95).epsilon(1e-12));
}

TEST_CASE("consensus with zero gradient is a fixed point") {
    UpdateParams params{0.1, 1.0, 2, 0.5};
    const auto out = two_step_update({3.0, -1.0}, {0.0, 0.0}, {3.0, -1.0}, params);
    CHECK(out[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(out[1] == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("zero probability with coupling is an error") {
    UpdateParams params{0.1, 1.0, 2, 0.0};
    CHECK_THROWS_AS(two_step_update({1.0}, {0.0}, {0.0}, params), error);
}

TEST_CASE("update operator construction") {
    const auto d = update_operator(0, 1, 1.0, 1.0, 0.1, 3);
    CHECK(d(0, 0) == doctest::Approx(0.9));
    CHECK(d(0, 1) == doctest::Approx(0.1));
    CHECK(d(0, 2) == 0.0);
    CHECK(d(1, 1) == 1.0);
    CHECK(d(2, 2) == 1.0);

    const auto id = update_operator(0, 1, 1.0, 0.0, 0.7, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(id(i, j) == (i == j ? 1.0 : 0.0));

    // Row sums are one: consensus states are invariant.
    const std::vector<double> consensus(3, 4.2);
    const auto applied = matvec(d, consensus);
    for (double v : applied) CHECK(v == doctest::Approx(4.2).epsilon(1e-15));
}

TEST_CASE("per-node update equals the matrix operator on scalar models") {
    Rng rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        const int nodes = 3 + trial % 5;
        const int active = rng.uniform_int(nodes);
        int peer = rng.uniform_int(nodes - 1);
        if (peer >= active) ++peer;
        const double alpha = 0.05 + 0.2 * rng.uniform();
        const double rho = 0.2 + rng.uniform();
        const double p_im = 0.2 + 0.7 * rng.uniform();
        const double gamma = 1.0 / p_im;

        std::vector<double> state(nodes), grad(nodes, 0.0);
        for (int i = 0; i < nodes; ++i) state[i] = rng.normal();
        grad[active] = rng.normal();

        // Matrix route: D (x - α g).
        const auto d = update_operator(active, peer, alpha, rho, gamma, nodes);
        std::vector<double> shifted = state;
        axpy(-alpha, grad, shifted);
        const auto matrix_route = matvec(d, shifted);

        // Per-node route: two-step update for the active node only.
        UpdateParams params{alpha, rho, 2, p_im};
        const auto updated =
            two_step_update({state[active]}, {grad[active]}, {state[peer]}, params);
        for (int i = 0; i < nodes; ++i) {
            const double expected = i == active ? updated[0] : state[i];
            CHECK(matrix_route[i] == doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("optimum oracle") {
    // Mean of the two centers for identity curvatures.
    const auto a = QuadraticLoss::from_diagonal({1.0}, {0.0});
    const auto b = QuadraticLoss::from_diagonal({1.0}, {2.0});
    const auto x = optimum_oracle({a, b});
    CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-12));

    const auto single = optimum_oracle({QuadraticLoss::from_diagonal({2.0, 3.0}, {4.0, -1.0})});
    CHECK(single[0] == doctest::Approx(4.0));
    CHECK(single[1] == doctest::Approx(-1.0));

    // Matches an independent gradient-descent oracle.
    const auto l1 = QuadraticLoss::from_diagonal({1.0, 2.0}, {0.3, -0.7});
    const auto l2 = QuadraticLoss::from_diagonal({3.0, 4.0}, {1.1, 0.2});
    const auto direct = optimum_oracle({l1, l2});
    const auto descent = oracles::descend_to_optimum({l1, l2});
    CHECK(direct[0] == doctest::Approx(descent[0]).epsilon(1e-10));
    CHECK(direct[1] == doctest::Approx(descent[1]).epsilon(1e-10));

    const auto degenerate = QuadraticLoss::from_diagonal({0.0}, {0.0});
    CHECK_THROWS_AS(optimum_oracle({degenerate}), error);
}

TEST_CASE("learning rate validation") {
    const auto unit = QuadraticLoss::from_diagonal({1.0}, {0.0});
    CHECK(validate_learning_rate(1.0, {unit}).ok); // boundary 2/(1+1)

    const auto spread = QuadraticLoss::from_diagonal({1.0, 3.0}, {0.0, 0.0});
    const auto warn = validate_learning_rate(0.6, {spread});
    CHECK_FALSE(warn.ok);
    CHECK(warn.limit == doctest::Approx(0.5));

    CHECK_FALSE(validate_learning_rate(0.0, {unit}).ok);
}

TEST_CASE("global objective") {
    const auto topo = Topology::fully_connected(2);
    const auto zero = QuadraticLoss::from_diagonal({0.0}, {0.0});
    CHECK(global_objective({{0.0}, {2.0}}, {zero, zero}, 1.0, topo) == doctest::Approx(2.0));
    CHECK(global_objective({{0.0}, {2.0}}, {zero, zero}, 0.0, topo) == doctest::Approx(0.0));

    // Consensus kills the penalty term.
    const auto l = QuadraticLoss::from_diagonal({2.0}, {1.0});
    const double at_consensus = global_objective({{3.0}, {3.0}}, {l, l}, 5.0, topo);
    CHECK(at_consensus == doctest::Approx(2.0 * l.value({3.0})).epsilon(1e-12));
}

TEST_CASE("identical losses converge to the shared optimum under coupling") {
    const auto loss = QuadraticLoss::from_diagonal({1.0, 2.0}, {0.4, -0.6});
    const std::vector<double> x_star = loss.b;
    UpdateParams params{0.25, 1.0, 2, 1.0};
    std::vector<std::vector<double>> xs = {{5.0, 3.0}, {-2.0, 1.0}};
    Rng rng(5);
    for (int step = 0; step < 400; ++step) {
        const int i = step % 2;
        const auto g = loss.gradient_exact(xs[i]);
        xs[i] = two_step_update(xs[i], g, xs[1 - i], params);
    }
    CHECK(oracles::deviation_oracle(xs, x_star) < 1e-12);
}
