#pragma once

#include <string>
#include <vector>

#include "psrgan/errors.hpp"

namespace psrgan {

struct EvalReport {
    double directional_accuracy_pct = 0; // product-sign rule
    double trend_da_pct = 0;             // trend-match rule with flat carry
    double rmse = 0;
    double rmsre = 0;
    double mrmse = 0;
    double processing_time_s = 0;
    std::size_t n_points = 0;

    std::string to_json() const;
    // fixed-width row: Directional Accuracy | Processing Time | MRSE
    std::string to_table_row(const std::string& label) const;
};

// trend-match DA: trends carry forward through flat steps, first trend from
// the first difference (flat prefix carries 0)
double trend_da(const std::vector<double>& actual, const std::vector<double>& predicted);

// product-sign DA: fraction of steps with (Y_{t+1}-Y_t)(Y'_{t+1}-Y'_t) > 0
double directional_accuracy(const std::vector<double>& actual,
                            const std::vector<double>& predicted);
double mda(const std::vector<double>& actual, const std::vector<double>& predicted);

double rmse(const std::vector<double>& actual, const std::vector<double>& predicted);
double rmsre(const std::vector<double>& actual, const std::vector<double>& predicted);
double mrmse(const std::vector<double>& actual, const std::vector<double>& predicted);

EvalReport evaluate(const std::vector<double>& actual,
                    const std::vector<double>& predicted, double elapsed_seconds);

} // namespace psrgan
