#include "psrgan/metrics.hpp"

#include <cmath>
#include <cstdio>

#include "json.hpp"

namespace psrgan {

namespace {

void check_pair(const std::vector<double>& a, const std::vector<double>& p,
                std::size_t min_len) {
    if (a.size() != p.size())
        throw LengthMismatch("series lengths " + std::to_string(a.size()) + " vs " +
                             std::to_string(p.size()));
    if (a.size() < min_len) throw TooShort("need length >= " + std::to_string(min_len));
}

// per-step trends with flat steps inheriting the previous trend; a flat
// prefix carries trend 0
std::vector<int> trends(const std::vector<double>& y) {
    std::vector<int> out(y.size() - 1);
    int carry = 0;
    for (std::size_t t = 1; t < y.size(); ++t) {
        const double d = y[t] - y[t - 1];
        if (d > 0) carry = 1;
        else if (d < 0) carry = 0;
        out[t - 1] = carry;
    }
    return out;
}

} // namespace

double trend_da(const std::vector<double>& actual, const std::vector<double>& predicted) {
    check_pair(actual, predicted, 2);
    const auto ta = trends(actual);
    const auto tp = trends(predicted);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < ta.size(); ++i)
        if (ta[i] == tp[i]) ++hits;
    return 100.0 * static_cast<double>(hits) / static_cast<double>(ta.size());
}

double directional_accuracy(const std::vector<double>& actual,
                            const std::vector<double>& predicted) {
    check_pair(actual, predicted, 2);
    const std::size_t t0 = actual.size() - 1;
    std::size_t hits = 0;
    for (std::size_t t = 0; t < t0; ++t)
        if ((actual[t + 1] - actual[t]) * (predicted[t + 1] - predicted[t]) > 0.0)
            ++hits;
    return 100.0 * static_cast<double>(hits) / static_cast<double>(t0);
}

double mda(const std::vector<double>& actual, const std::vector<double>& predicted) {
    return directional_accuracy(actual, predicted);
}

double rmse(const std::vector<double>& actual, const std::vector<double>& predicted) {
    check_pair(actual, predicted, 1);
    double sum = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        const double d = actual[i] - predicted[i];
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(actual.size()));
}

double rmsre(const std::vector<double>& actual, const std::vector<double>& predicted) {
    check_pair(actual, predicted, 1);
    double sum = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        if (actual[i] == 0.0) throw ZeroDenominator("actual value is zero at index " +
                                                    std::to_string(i));
        const double r = (predicted[i] - actual[i]) / actual[i];
        sum += r * r;
    }
    return std::sqrt(sum / static_cast<double>(actual.size()));
}

double mrmse(const std::vector<double>& actual, const std::vector<double>& predicted) {
    return rmsre(actual, predicted);
}

EvalReport evaluate(const std::vector<double>& actual,
                    const std::vector<double>& predicted, double elapsed_seconds) {
    EvalReport r;
    r.directional_accuracy_pct = directional_accuracy(actual, predicted);
    r.trend_da_pct = trend_da(actual, predicted);
    r.rmse = rmse(actual, predicted);
    r.rmsre = rmsre(actual, predicted);
    r.mrmse = mrmse(actual, predicted);
    r.processing_time_s = elapsed_seconds;
    r.n_points = actual.size();
    return r;
}

std::string EvalReport::to_json() const {
    nlohmann::json j{{"directional_accuracy_pct", directional_accuracy_pct},
                     {"trend_da_pct", trend_da_pct},
                     {"rmse", rmse},
                     {"rmsre", rmsre},
                     {"mrmse", mrmse},
                     {"processing_time_s", processing_time_s},
                     {"n_points", n_points}};
    return j.dump(2);
}

std::string EvalReport::to_table_row(const std::string& label) const {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-12s %20.2f%% %18.2f Sec %12.4f", label.c_str(),
                  directional_accuracy_pct, processing_time_s, mrmse);
    return buf;
}

} // namespace psrgan
