#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "psrgan/ingest.hpp"
#include "psrgan/numerics.hpp"

using namespace psrgan;

namespace {

const char* kThreeRows =
    "Date,Open,High,Low,Close,Adj Close,Volume\n"
    "2013-01-02,10,11,9.5,10.5,10.5,1000\n"
    "2013-01-03,10.5,11.5,10,11,11,1100\n"
    "2013-01-04,11,12,10.5,11.5,11.5,900\n";

} // namespace

TEST_CASE("parse_csv parses valid rows") {
    const auto result = parse_csv(kThreeRows, "TEST");
    CHECK(result.series.bars.size() == 3);
    CHECK(result.dropped_rows == 0);
    CHECK(result.series.bars[0].date.to_string() == "2013-01-02");
    CHECK(result.series.bars[1].close == doctest::Approx(11.0));
    CHECK(result.series.bars[2].volume == doctest::Approx(900.0));
}

TEST_CASE("parse_csv re-sorts out-of-order dates") {
    const std::string csv =
        "Date,Open,High,Low,Close,Adj Close,Volume\n"
        "2013-01-04,11,12,10.5,11.5,11.5,900\n"
        "2013-01-02,10,11,9.5,10.5,10.5,1000\n"
        "2013-01-03,10.5,11.5,10,11,11,1100\n";
    const auto result = parse_csv(csv);
    CHECK(result.series.bars[0].date.to_string() == "2013-01-02");
    CHECK(result.series.bars[2].date.to_string() == "2013-01-04");
}

TEST_CASE("parse_csv drops null rows with a count") {
    const std::string csv =
        "Date,Open,High,Low,Close,Adj Close,Volume\n"
        "2013-01-02,10,11,9.5,10.5,10.5,1000\n"
        "2013-01-03,10.5,11.5,10,null,null,1100\n"
        "2013-01-04,11,12,10.5,11.5,11.5,900\n"
        "2013-01-07,11.5,12.5,11,12,12,800\n";
    const auto result = parse_csv(csv);
    CHECK(result.series.bars.size() == 3);
    CHECK(result.dropped_rows == 1);
}

TEST_CASE("parse_csv handles missing Adj Close by copying close") {
    const std::string csv =
        "Date,Open,High,Low,Close,Volume\n"
        "2013-01-02,10,11,9.5,10.5,1000\n";
    const auto result = parse_csv(csv);
    CHECK(result.series.bars[0].adj_close == doctest::Approx(10.5));
}

TEST_CASE("parse_csv error paths") {
    CHECK_THROWS_AS(parse_csv("Date,Open,High,Low,Volume\n2013-01-02,1,1,1,1\n"),
                    MissingColumn);
    CHECK_THROWS_AS(parse_csv("Date,Open,High,Low,Close,Adj Close,Volume\n"),
                    EmptySeries);
    const std::string garbage =
        "Date,Open,High,Low,Close,Adj Close,Volume\n"
        "junk\n"
        "more junk\n"
        "2013-01-02,10,11,9.5,10.5,10.5,1000\n";
    CHECK_THROWS_AS(parse_csv(garbage), MalformedRow);
}

TEST_CASE("parse_csv is idempotent on its own serialized output") {
    const auto first = parse_csv(kThreeRows, "TEST");
    const auto second = parse_csv(to_csv(first.series), "TEST");
    REQUIRE(second.series.bars.size() == first.series.bars.size());
    for (std::size_t i = 0; i < first.series.bars.size(); ++i) {
        CHECK(second.series.bars[i].date == first.series.bars[i].date);
        CHECK(second.series.bars[i].close ==
              doctest::Approx(first.series.bars[i].close).epsilon(1e-12));
    }
}

TEST_CASE("validate reports nothing for clean series") {
    const auto result = parse_csv(kThreeRows);
    const auto report = validate(result.series);
    CHECK(report.violations.empty());
}

TEST_CASE("validate flags high < close") {
    auto result = parse_csv(kThreeRows);
    result.series.bars[1].high = result.series.bars[1].close - 1.0;
    const auto report = validate(result.series);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].date.to_string() == "2013-01-03");
    CHECK(report.violations[0].rule.find("high") != std::string::npos);
}

TEST_CASE("validate records date gaps with span") {
    auto result = parse_csv(kThreeRows);
    result.series.bars[2].date = Date::parse("2013-01-13"); // 10 days after 01-03
    const auto report = validate(result.series);
    REQUIRE(report.gaps.size() == 1);
    CHECK(report.gaps[0].span_days == 10);
    CHECK(report.max_gap_days == 10);
}

TEST_CASE("normalize endpoints and mid values") {
    const auto [out, params] = normalize({10, 20, 30});
    CHECK(out[0] == doctest::Approx(0.0));
    CHECK(out[1] == doctest::Approx(0.5));
    CHECK(out[2] == doctest::Approx(1.0));
    CHECK(params.min_value == 10);
    CHECK(params.max_value == 30);

    const auto [out2, p2] = normalize({2, 4, 7, 4});
    CHECK(out2[0] == doctest::Approx(0.0));
    CHECK(out2[1] == doctest::Approx(0.4));
    CHECK(out2[2] == doctest::Approx(1.0));
    CHECK(out2[3] == doctest::Approx(0.4));
}

TEST_CASE("normalize rejects degenerate input") {
    CHECK_THROWS_AS(normalize({5, 5, 5}), DegenerateSeries);
    CHECK_THROWS_AS(normalize({5}), DegenerateSeries);
}

TEST_CASE("denormalize inverts normalize") {
    NormParams p{10, 30, "close"};
    const auto out = denormalize({0, 0.5, 1}, p);
    CHECK(out[0] == doctest::Approx(10));
    CHECK(out[1] == doctest::Approx(20));
    CHECK(out[2] == doctest::Approx(30));
    CHECK(denormalize({}, p).empty());
    CHECK_THROWS_AS(denormalize({0.5}, NormParams{3, 3, "close"}), InvalidParams);
}

TEST_CASE("round-trip property over random vectors") {
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> x(20);
        for (double& v : x) v = rng.uniform(1.0, 500.0);
        x[0] = 0.5; // force a distinct min
        const auto [norm, params] = normalize(x);
        for (double v : norm) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
        const auto back = denormalize(norm, params);
        for (std::size_t i = 0; i < x.size(); ++i)
            CHECK(std::fabs(back[i] - x[i]) <= 1e-12 * std::max(1.0, std::fabs(x[i])));
    }
}

TEST_CASE("split_chronological floor arithmetic") {
    PriceSeries s{"T", {}};
    for (int i = 0; i < 10; ++i) {
        PriceBar b;
        b.date = Date{2013, 1, 1 + i};
        b.open = b.high = b.low = b.close = b.adj_close = 1.0 + i;
        s.bars.push_back(b);
    }
    auto [train, test] = split_chronological(s, 0.8);
    CHECK(train.bars.size() == 8);
    CHECK(test.bars.size() == 2);

    s.bars.resize(7);
    auto [t2, v2] = split_chronological(s, 0.5);
    CHECK(t2.bars.size() == 3);
    CHECK(v2.bars.size() == 4);

    // concat(train, test) preserves the input
    CHECK(t2.bars.back().close == doctest::Approx(3.0));
    CHECK(v2.bars.front().close == doctest::Approx(4.0));
}

TEST_CASE("split_chronological rejects degenerate splits") {
    PriceSeries one{"T", {PriceBar{}}};
    CHECK_THROWS_AS(split_chronological(one, 0.5), DegenerateSplit);
    CHECK_THROWS_AS(split_chronological(one, 1.5), InvalidParams);
}
