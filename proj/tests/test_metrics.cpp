#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "psrgan/metrics.hpp"
#include "psrgan/numerics.hpp"

using namespace psrgan;

namespace {

// independent brute-force enumeration oracles, kept deliberately naive

double oracle_da(const std::vector<double>& a, const std::vector<double>& p) {
    std::size_t hits = 0;
    const std::size_t t0 = a.size() - 1;
    for (std::size_t t = 0; t + 1 < a.size(); ++t) {
        const double prod = (a[t + 1] - a[t]) * (p[t + 1] - p[t]);
        if (prod > 0.0) ++hits;
    }
    return 100.0 * static_cast<double>(hits) / static_cast<double>(t0);
}

std::vector<int> oracle_trends(const std::vector<double>& y) {
    std::vector<int> out;
    int prev = 0;
    for (std::size_t t = 1; t < y.size(); ++t) {
        int tr;
        if (y[t] > y[t - 1]) tr = 1;
        else if (y[t] < y[t - 1]) tr = 0;
        else tr = prev;
        out.push_back(tr);
        prev = tr;
    }
    return out;
}

double oracle_trend_da(const std::vector<double>& a, const std::vector<double>& p) {
    const auto ta = oracle_trends(a);
    const auto tp = oracle_trends(p);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < ta.size(); ++i)
        if (ta[i] == tp[i]) ++hits;
    return 100.0 * static_cast<double>(hits) / static_cast<double>(ta.size());
}

double oracle_rmse(const std::vector<double>& a, const std::vector<double>& p) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - p[i]) * (a[i] - p[i]);
    return std::sqrt(s / static_cast<double>(a.size()));
}

double oracle_rmsre(const std::vector<double>& a, const std::vector<double>& p) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double r = (p[i] - a[i]) / a[i];
        s += r * r;
    }
    return std::sqrt(s / static_cast<double>(a.size()));
}

} // namespace

TEST_CASE("trend_da trivial and enumerated cases") {
    CHECK(trend_da({1, 2, 3, 2}, {1, 2, 3, 2}) == doctest::Approx(100.0));
    // actual trends [1,1,0], predicted trends [1,0,0]: 2/3 match
    CHECK(trend_da({1, 2, 3, 2}, {1, 2, 1, 0}) == doctest::Approx(100.0 * 2 / 3));
    // flat steps carry the previous trend
    const std::vector<double> a{5, 5, 5, 6};
    const std::vector<double> p{5, 5, 5, 4};
    CHECK(trend_da(a, p) == doctest::Approx(oracle_trend_da(a, p)));
    CHECK_THROWS_AS(trend_da({1}, {1}), TooShort);
    CHECK_THROWS_AS(trend_da({1, 2}, {1}), LengthMismatch);
}

TEST_CASE("directional_accuracy cases") {
    CHECK(directional_accuracy({1, 2, 3}, {4, 5, 6}) == doctest::Approx(100.0));
    // 4 steps, 3 agreeing
    CHECK(directional_accuracy({1, 2, 3, 4, 3}, {2, 3, 4, 5, 6}) == doctest::Approx(75.0));
    // constant predicted: all products zero, strict rule counts misses
    CHECK(directional_accuracy({1, 2, 3}, {5, 5, 5}) == doctest::Approx(0.0));
}

TEST_CASE("rmse cases") {
    CHECK(rmse({1, 2, 3}, {1, 2, 3}) == doctest::Approx(0.0));
    CHECK(rmse({1, 2, 3}, {2, 3, 4}) == doctest::Approx(1.0));
    CHECK(rmse({0, 0}, {3, 4}) == doctest::Approx(std::sqrt(12.5)).epsilon(1e-9));
}

TEST_CASE("rmsre and mrmse cases") {
    CHECK(rmsre({100}, {100}) == doctest::Approx(0.0));
    CHECK(rmsre({100}, {110}) == doctest::Approx(0.1).epsilon(1e-12));
    // relative errors {0.1, 0.3}
    CHECK(rmsre({100, 100}, {110, 130}) ==
          doctest::Approx(std::sqrt(0.05)).epsilon(1e-12));
    CHECK(mrmse({100, 200}, {110, 180}) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK_THROWS_AS(rmsre({0, 1}, {1, 1}), ZeroDenominator);
}

TEST_CASE("metric oracle equivalence over random series pairs") {
    Rng rng(42);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 2 + rng.next_u64() % 49;
        std::vector<double> a(n), p(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = rng.uniform(1.0, 100.0);
            p[i] = rng.uniform(1.0, 100.0);
            if (rng.next_double() < 0.1 && i > 0) a[i] = a[i - 1]; // flat steps
        }
        CHECK(std::fabs(directional_accuracy(a, p) - oracle_da(a, p)) < 1e-9);
        CHECK(std::fabs(trend_da(a, p) - oracle_trend_da(a, p)) < 1e-9);
        CHECK(std::fabs(rmse(a, p) - oracle_rmse(a, p)) < 1e-9);
        CHECK(std::fabs(rmsre(a, p) - oracle_rmsre(a, p)) < 1e-9);
        // the "modified" variants are the same functions by construction
        CHECK(mda(a, p) == directional_accuracy(a, p));
        CHECK(mrmse(a, p) == rmsre(a, p));
    }
}

TEST_CASE("rmse translation invariance") {
    Rng rng(8);
    std::vector<double> a(20), p(20);
    for (std::size_t i = 0; i < 20; ++i) {
        a[i] = rng.uniform(1, 10);
        p[i] = rng.uniform(1, 10);
    }
    for (double c : {-3.0, 0.5, 100.0}) {
        std::vector<double> ac = a, pc = p;
        for (double& v : ac) v += c;
        for (double& v : pc) v += c;
        CHECK(std::fabs(rmse(a, p) - rmse(ac, pc)) < 1e-12);
    }
}

TEST_CASE("rmse and rmsre invariant under identical reordering") {
    Rng rng(13);
    std::vector<double> a(15), p(15);
    for (std::size_t i = 0; i < 15; ++i) {
        a[i] = rng.uniform(1, 10);
        p[i] = rng.uniform(1, 10);
    }
    std::vector<std::size_t> perm(15);
    for (std::size_t i = 0; i < 15; ++i) perm[i] = i;
    rng.shuffle(perm);
    std::vector<double> as(15), ps(15);
    for (std::size_t i = 0; i < 15; ++i) {
        as[i] = a[perm[i]];
        ps[i] = p[perm[i]];
    }
    CHECK(rmse(as, ps) == doctest::Approx(rmse(a, p)).epsilon(1e-12));
    CHECK(rmsre(as, ps) == doctest::Approx(rmsre(a, p)).epsilon(1e-12));
}

TEST_CASE("evaluate populates every field") {
    const std::vector<double> a{100, 101, 102, 101};
    const auto report = evaluate(a, a, 1.5);
    CHECK(report.directional_accuracy_pct == doctest::Approx(100.0));
    CHECK(report.trend_da_pct == doctest::Approx(100.0));
    CHECK(report.rmse == doctest::Approx(0.0));
    CHECK(report.rmsre == doctest::Approx(0.0));
    CHECK(report.mrmse == doctest::Approx(0.0));
    CHECK(report.processing_time_s == doctest::Approx(1.5));
    CHECK(report.n_points == 4);

    const std::vector<double> p{100, 102, 101, 103};
    const auto r2 = evaluate(a, p, 0.0);
    CHECK(r2.directional_accuracy_pct == doctest::Approx(directional_accuracy(a, p)));
    CHECK(r2.rmse == doctest::Approx(rmse(a, p)));
    CHECK(r2.mrmse == doctest::Approx(mrmse(a, p)));
}

TEST_CASE("EvalReport serializes to json") {
    EvalReport r;
    r.directional_accuracy_pct = 64.58;
    r.mrmse = 0.028;
    const std::string j = r.to_json();
    CHECK(j.find("\"directional_accuracy_pct\"") != std::string::npos);
    CHECK(j.find("\"mrmse\"") != std::string::npos);
}
