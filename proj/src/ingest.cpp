#include "psrgan/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "httplib.h"

namespace psrgan {

long Date::to_days() const {
    // Howard Hinnant's days_from_civil
    int y = year;
    const int m = month;
    const int d = day;
    y -= m <= 2;
    const long era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<long>(doe) - 719468;
}

std::string Date::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
    return buf;
}

Date Date::parse(const std::string& iso) {
    Date d;
    if (std::sscanf(iso.c_str(), "%d-%d-%d", &d.year, &d.month, &d.day) != 3 ||
        d.month < 1 || d.month > 12 || d.day < 1 || d.day > 31)
        throw MalformedRow("bad date: " + iso);
    return d;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string lower_trim(std::string s) {
    auto notspace = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), notspace));
    s.erase(std::find_if(s.rbegin(), s.rend(), notspace).base(), s.end());
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

bool parse_num(const std::string& field, double& out) {
    const std::string t = lower_trim(field);
    if (t.empty() || t == "null" || t == "nan" || t == "na") return false;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last && std::isfinite(out);
}

} // namespace

ParseResult parse_csv(const std::string& raw, const std::string& ticker) {
    std::istringstream in(raw);
    std::string line;
    if (!std::getline(in, line)) throw EmptySeries("empty input");

    const auto header = split_line(line);
    auto find_col = [&](const std::string& name) -> int {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (lower_trim(header[i]) == name) return static_cast<int>(i);
        return -1;
    };
    const int c_date = find_col("date");
    const int c_open = find_col("open");
    const int c_high = find_col("high");
    const int c_low = find_col("low");
    const int c_close = find_col("close");
    const int c_adj = find_col("adj close");
    const int c_vol = find_col("volume");
    for (auto [idx, name] : {std::pair{c_date, "Date"}, {c_open, "Open"},
                             {c_high, "High"}, {c_low, "Low"},
                             {c_close, "Close"}, {c_vol, "Volume"}})
        if (idx < 0) throw MissingColumn(std::string("header lacks ") + name);

    ParseResult result;
    result.series.ticker = ticker;
    std::size_t total = 0;
    std::size_t unparseable = 0;
    while (std::getline(in, line)) {
        if (lower_trim(line).empty()) continue;
        ++total;
        const auto fields = split_line(line);
        const std::size_t need = static_cast<std::size_t>(
            std::max({c_date, c_open, c_high, c_low, c_close, c_vol, c_adj}));
        if (fields.size() <= need) {
            ++unparseable;
            ++result.dropped_rows;
            continue;
        }
        PriceBar bar;
        try {
            bar.date = Date::parse(fields[c_date]);
        } catch (const MalformedRow&) {
            ++unparseable;
            ++result.dropped_rows;
            continue;
        }
        bool ok = parse_num(fields[c_open], bar.open) &&
                  parse_num(fields[c_high], bar.high) &&
                  parse_num(fields[c_low], bar.low) &&
                  parse_num(fields[c_close], bar.close) &&
                  parse_num(fields[c_vol], bar.volume);
        if (ok && c_adj >= 0)
            ok = parse_num(fields[c_adj], bar.adj_close);
        else
            bar.adj_close = bar.close;
        if (!ok) {
            ++result.dropped_rows;
            continue;
        }
        result.series.bars.push_back(bar);
    }
    if (total > 0 && unparseable * 2 > total)
        throw MalformedRow("more than half the rows are unparseable (" +
                           std::to_string(unparseable) + "/" + std::to_string(total) + ")");
    if (result.series.bars.empty()) throw EmptySeries("zero valid rows");
    std::stable_sort(result.series.bars.begin(), result.series.bars.end(),
                     [](const PriceBar& a, const PriceBar& b) { return a.date < b.date; });
    return result;
}

std::string to_csv(const PriceSeries& series) {
    std::ostringstream out;
    out << "Date,Open,High,Low,Close,Adj Close,Volume\n";
    out.precision(10);
    for (const auto& b : series.bars)
        out << b.date.to_string() << ',' << b.open << ',' << b.high << ',' << b.low
            << ',' << b.close << ',' << b.adj_close << ',' << b.volume << '\n';
    return out.str();
}

ValidationReport validate(const PriceSeries& series) {
    ValidationReport report;
    for (const auto& b : series.bars) {
        auto flag = [&](const std::string& rule) {
            report.violations.push_back({b.date, rule});
        };
        for (auto [v, name] : {std::pair{b.open, "open"}, {b.high, "high"},
                               {b.low, "low"}, {b.close, "close"},
                               {b.adj_close, "adj_close"}})
            if (!std::isfinite(v) || v <= 0.0)
                flag(std::string(name) + " not finite and positive");
        if (b.low > std::min(b.open, b.close)) flag("low > min(open, close)");
        if (b.high < std::max(b.open, b.close)) flag("high < max(open, close)");
        if (b.volume < 0.0 || !std::isfinite(b.volume)) flag("volume negative");
    }
    for (std::size_t i = 1; i < series.bars.size(); ++i) {
        const long span =
            series.bars[i].date.to_days() - series.bars[i - 1].date.to_days();
        if (span <= 0)
            report.violations.push_back(
                {series.bars[i].date, "dates not strictly increasing"});
        else if (span > 1) {
            report.gaps.push_back({series.bars[i - 1].date, series.bars[i].date, span});
            report.max_gap_days = std::max(report.max_gap_days, span);
        }
    }
    return report;
}

std::pair<std::vector<double>, NormParams> normalize(const std::vector<double>& values) {
    if (values.size() < 2) throw DegenerateSeries("need at least 2 values");
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    NormParams p{*lo, *hi, "close"};
    if (!(p.max_value > p.min_value)) throw DegenerateSeries("all values equal");
    return {normalize_with(values, p), p};
}

std::vector<double> normalize_with(const std::vector<double>& values,
                                   const NormParams& p) {
    if (!(p.max_value > p.min_value)) throw InvalidParams("max <= min");
    const double range = p.max_value - p.min_value;
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        out[i] = (values[i] - p.min_value) / range;
    return out;
}

std::vector<double> denormalize(const std::vector<double>& values, const NormParams& p) {
    if (!(p.max_value > p.min_value)) throw InvalidParams("max <= min");
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = denormalize_one(values[i], p);
    return out;
}

double denormalize_one(double value, const NormParams& p) {
    if (!(p.max_value > p.min_value)) throw InvalidParams("max <= min");
    return p.min_value + value * (p.max_value - p.min_value);
}

std::pair<PriceSeries, PriceSeries> split_chronological(const PriceSeries& series,
                                                        double train_fraction) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw InvalidParams("train_fraction must be in (0, 1)");
    const std::size_t n = series.bars.size();
    const std::size_t k =
        static_cast<std::size_t>(std::floor(static_cast<double>(n) * train_fraction));
    if (k == 0 || k >= n) throw DegenerateSplit("a split side would be empty");
    PriceSeries train{series.ticker, {series.bars.begin(), series.bars.begin() + k}};
    PriceSeries test{series.ticker, {series.bars.begin() + k, series.bars.end()}};
    return {std::move(train), std::move(test)};
}

std::vector<double> close_prices(const PriceSeries& series) {
    std::vector<double> out;
    out.reserve(series.bars.size());
    for (const auto& b : series.bars) out.push_back(b.close);
    return out;
}

std::string fetch_remote(const std::string& ticker, const Date& start, const Date& end,
                         const std::string& endpoint_template) {
    std::string url = endpoint_template;
    auto replace_all = [&](const std::string& key, const std::string& value) {
        std::size_t pos = 0;
        while ((pos = url.find(key, pos)) != std::string::npos) {
            url.replace(pos, key.size(), value);
            pos += value.size();
        }
    };
    replace_all("{ticker}", ticker);
    replace_all("{start}", start.to_string());
    replace_all("{end}", end.to_string());

    // split scheme://host[:port]/path
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw InvalidParams("endpoint lacks scheme");
    const auto host_start = scheme_end + 3;
    const auto path_start = url.find('/', host_start);
    const std::string origin = url.substr(0, path_start);
    const std::string path =
        path_start == std::string::npos ? "/" : url.substr(path_start);

    httplib::Client client(origin);
    client.set_connection_timeout(10);
    client.set_read_timeout(30);
    auto res = client.Get(path);
    if (!res) throw NetworkError("request to " + origin + " failed: " +
                                 httplib::to_string(res.error()));
    if (res->status != 200) throw HttpStatus(res->status);
    return res->body;
}

} // namespace psrgan
