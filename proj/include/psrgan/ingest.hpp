#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "psrgan/errors.hpp"

namespace psrgan {

// Calendar date, ISO YYYY-MM-DD.
struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;

    // days since 1970-01-01 (proleptic Gregorian)
    long to_days() const;
    std::string to_string() const;
    static Date parse(const std::string& iso);

    auto operator<=>(const Date&) const = default;
};

struct PriceBar {
    Date date;
    double open = 0, high = 0, low = 0, close = 0, adj_close = 0;
    double volume = 0;
};

struct PriceSeries {
    std::string ticker;
    std::vector<PriceBar> bars;
};

struct ParseResult {
    PriceSeries series;
    std::size_t dropped_rows = 0;
};

struct NormParams {
    double min_value = 0;
    double max_value = 1;
    std::string feature = "close";
};

struct BarViolation {
    Date date;
    std::string rule;
};

struct DateGap {
    Date from;
    Date to;
    long span_days = 0;
};

struct ValidationReport {
    std::vector<BarViolation> violations;
    std::vector<DateGap> gaps; // calendar gaps > 1 day between consecutive bars
    long max_gap_days = 0;
};

ParseResult parse_csv(const std::string& raw, const std::string& ticker = "");
std::string to_csv(const PriceSeries& series);

ValidationReport validate(const PriceSeries& series);

std::pair<std::vector<double>, NormParams> normalize(const std::vector<double>& values);
// normalize with externally fixed params (e.g. train-split params applied to test)
std::vector<double> normalize_with(const std::vector<double>& values, const NormParams& p);
std::vector<double> denormalize(const std::vector<double>& values, const NormParams& p);
double denormalize_one(double value, const NormParams& p);

std::pair<PriceSeries, PriceSeries> split_chronological(const PriceSeries& series,
                                                        double train_fraction);

std::vector<double> close_prices(const PriceSeries& series);

// Fills {ticker}/{start}/{end} placeholders in the endpoint template and
// returns the response body verbatim.
std::string fetch_remote(const std::string& ticker, const Date& start, const Date& end,
                         const std::string& endpoint_template);

} // namespace psrgan
