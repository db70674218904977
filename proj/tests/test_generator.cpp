#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "psrgan/generator.hpp"

using namespace psrgan;

namespace {

// Independent straight-line evaluation of one peephole LSTM step plus the
// output head, kept free of the library's cell code.
struct OracleStep {
    std::vector<double> h, c;
};

OracleStep oracle_cell(const GeneratorParams& p, double x, const OracleStep& prev) {
    const std::size_t n = p.cfg.hidden_size;
    auto sig = [](double v) { return 1.0 / (1.0 + std::exp(-v)); };
    OracleStep out;
    out.h.resize(n);
    out.c.resize(n);
    for (std::size_t u = 0; u < n; ++u) {
        double zi = p.W_i(u, 0) * x + p.b_i[u];
        double zf = p.W_f(u, 0) * x + p.b_f[u];
        double zc = p.W_c(u, 0) * x + p.b_c[u];
        double zo = p.W_o(u, 0) * x + p.b_o[u];
        for (std::size_t v = 0; v < n; ++v) {
            zi += p.R_i(u, v) * prev.h[v];
            zf += p.R_f(u, v) * prev.h[v];
            zc += p.R_c(u, v) * prev.h[v];
            zo += p.R_o(u, v) * prev.h[v];
        }
        if (p.cfg.peephole) {
            zi += p.V_i[u] * prev.c[u];
            zf += p.V_f[u] * prev.c[u];
        }
        const double i = sig(zi);
        const double f = sig(zf);
        const double chat = std::tanh(zc);
        out.c[u] = i * chat + f * prev.c[u];
        if (p.cfg.peephole) zo += p.V_o[u] * out.c[u];
        out.h[u] = sig(zo) * std::tanh(out.c[u]);
    }
    return out;
}

double oracle_forward(const GeneratorParams& p, const std::vector<double>& window) {
    OracleStep s;
    s.h.assign(p.cfg.hidden_size, 0.0);
    s.c.assign(p.cfg.hidden_size, 0.0);
    for (double x : window) s = oracle_cell(p, x, s);
    double pred = p.b_y;
    for (std::size_t u = 0; u < p.cfg.hidden_size; ++u) pred += p.W_y[u] * s.h[u];
    return pred;
}

} // namespace

TEST_CASE("zero parameters give zero state") {
    GeneratorConfig cfg{1, 3, true};
    const GeneratorParams p = GeneratorParams::zeros(cfg);
    auto [state, rec] = lstm_cell_forward(p, {0.7}, LstmState::zeros(3));
    for (double h : state.h) CHECK(h == doctest::Approx(0.0));
    for (double c : state.c) CHECK(c == doctest::Approx(0.0));
    CHECK(rec.i[0] == doctest::Approx(0.5)); // sigma(0) gates
}

TEST_CASE("large output offset still gives zero h when cell is zero") {
    GeneratorConfig cfg{1, 2, true};
    GeneratorParams p = GeneratorParams::zeros(cfg);
    p.b_o.assign(2, 50.0);
    auto [state, rec] = lstm_cell_forward(p, {0.0}, LstmState::zeros(2));
    for (double h : state.h) CHECK(h == doctest::Approx(0.0));
}

TEST_CASE("cell forward matches the straight-line oracle") {
    for (bool peephole : {true, false}) {
        GeneratorConfig cfg{1, 2, peephole};
        Rng rng(77);
        const GeneratorParams p = GeneratorParams::init(cfg, rng);
        OracleStep prev;
        prev.h = {0.1, -0.2};
        prev.c = {0.3, 0.05};
        auto [state, rec] = lstm_cell_forward(p, {0.42}, LstmState{prev.h, prev.c});
        const OracleStep expect = oracle_cell(p, 0.42, prev);
        for (std::size_t u = 0; u < 2; ++u) {
            CHECK(state.h[u] == doctest::Approx(expect.h[u]).epsilon(1e-12));
            CHECK(state.c[u] == doctest::Approx(expect.c[u]).epsilon(1e-12));
        }
    }
}

TEST_CASE("generator_forward with zero params predicts b_y") {
    GeneratorConfig cfg{1, 4, true};
    GeneratorParams p = GeneratorParams::zeros(cfg);
    p.b_y = 0.37;
    const auto [pred, cache] = generator_forward(p, {0.1, 0.2, 0.3});
    CHECK(pred == doctest::Approx(0.37));
    CHECK(cache.steps.size() == 3);
}

TEST_CASE("generator_forward is deterministic") {
    GeneratorConfig cfg{1, 5, true};
    Rng rng(4);
    const GeneratorParams p = GeneratorParams::init(cfg, rng);
    const std::vector<double> window{0.2, 0.4, 0.1, 0.9};
    const auto [a, c1] = generator_forward(p, window);
    const auto [b, c2] = generator_forward(p, window);
    CHECK(a == b); // bitwise
}

TEST_CASE("three-step forward matches hand-unrolled oracle") {
    GeneratorConfig cfg{1, 2, true};
    Rng rng(15);
    const GeneratorParams p = GeneratorParams::init(cfg, rng);
    const std::vector<double> window{0.3, 0.8, 0.5};
    const auto [pred, cache] = generator_forward(p, window);
    CHECK(pred == doctest::Approx(oracle_forward(p, window)).epsilon(1e-12));
}

TEST_CASE("hidden outputs stay strictly inside (-1, 1)") {
    GeneratorConfig cfg{1, 6, true};
    Rng rng(3);
    GeneratorParams p = GeneratorParams::init(cfg, rng);
    for (Matrix* m : {&p.W_i, &p.W_f, &p.W_c, &p.W_o})
        for (double& v : m->data) v *= 50.0; // push the gates hard
    const auto [pred, cache] = generator_forward(p, {0.9, -0.9, 0.9, -0.9});
    for (const auto& step : cache.steps)
        for (double h : step.h) CHECK(std::fabs(h) < 1.0);
}

TEST_CASE("backward trivial paths") {
    GeneratorConfig cfg{1, 3, true};
    Rng rng(21);
    const GeneratorParams p = GeneratorParams::init(cfg, rng);
    const auto [pred, cache] = generator_forward(p, {0.1, 0.5});

    const GeneratorParams zero_grads = generator_backward(p, cache, 0.0);
    for (double v : zero_grads.to_flat()) CHECK(v == 0.0);

    const GeneratorParams grads = generator_backward(p, cache, 1.7);
    CHECK(grads.b_y == doctest::Approx(1.7));
}

TEST_CASE("backward rejects a stale cache") {
    GeneratorConfig small{1, 2, true};
    GeneratorConfig big{1, 3, true};
    Rng rng(1);
    const GeneratorParams ps = GeneratorParams::init(small, rng);
    const GeneratorParams pb = GeneratorParams::init(big, rng);
    const auto [pred, cache] = generator_forward(ps, {0.1});
    CHECK_THROWS_AS(generator_backward(pb, cache, 1.0), StaleCache);
}

TEST_CASE("full-parameter gradient check, hidden 4, window 5") {
    for (bool peephole : {true, false}) {
        GeneratorConfig cfg{1, 4, peephole};
        Rng rng(peephole ? 1234 : 4321);
        const GeneratorParams p = GeneratorParams::init(cfg, rng);
        std::vector<double> window(5);
        for (double& x : window) x = rng.uniform(0, 1);

        const auto [pred, cache] = generator_forward(p, window);
        const auto analytic = generator_backward(p, cache, 1.0).to_flat();

        auto f = [&](const std::vector<double>& flat) {
            GeneratorParams q = GeneratorParams::zeros(cfg);
            q.from_flat(flat);
            return generator_forward(q, window).first;
        };
        CHECK(gradient_check(f, p.to_flat(), analytic) < 1e-4);
    }
}

TEST_CASE("gradient check property over random seeds") {
    GeneratorConfig cfg{1, 3, true};
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Rng rng(seed * 31 + 7);
        const GeneratorParams p = GeneratorParams::init(cfg, rng);
        std::vector<double> window(4);
        for (double& x : window) x = rng.uniform(0, 1);
        const auto [pred, cache] = generator_forward(p, window);
        const auto analytic = generator_backward(p, cache, 2.5).to_flat();
        auto f = [&](const std::vector<double>& flat) {
            GeneratorParams q = GeneratorParams::zeros(cfg);
            q.from_flat(flat);
            return 2.5 * generator_forward(q, window).first;
        };
        CHECK(gradient_check(f, p.to_flat(), analytic) < 1e-4);
    }
}

TEST_CASE("json round-trip preserves parameters and shapes") {
    GeneratorConfig cfg{1, 4, true};
    Rng rng(55);
    const GeneratorParams p = GeneratorParams::init(cfg, rng);
    const GeneratorParams q = GeneratorParams::from_json(p.to_json());
    CHECK(q.to_flat() == p.to_flat());
    CHECK(q.cfg.hidden_size == 4);

    // corrupted shape is rejected on load
    std::string bad = p.to_json();
    const auto pos = bad.find("\"hidden_size\": 4");
    REQUIRE(pos != std::string::npos);
    bad.replace(pos, 16, "\"hidden_size\": 5");
    CHECK_THROWS_AS(GeneratorParams::from_json(bad), ShapeMismatch);
}
