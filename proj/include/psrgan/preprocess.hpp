#pragma once

#include <cstddef>
#include <vector>

#include "psrgan/errors.hpp"

namespace psrgan {

enum class ThresholdRule { None, Universal, Fixed };

struct WaveletConfig {
    std::size_t levels = 1;
    ThresholdRule threshold_rule = ThresholdRule::Universal;
    double fixed_threshold = 0.0; // used when rule == Fixed
};

struct HaarPair {
    std::vector<double> approx;
    std::vector<double> detail;
    bool padded = false; // input had odd length; last sample was repeated
};

// Orthonormal single-level Haar: a_k = (x_{2k} + x_{2k+1}) / sqrt(2),
// d_k = (x_{2k} - x_{2k+1}) / sqrt(2). Odd input is padded by repeating
// the last sample.
HaarPair haar_dwt(const std::vector<double>& signal);
std::vector<double> haar_idwt(const std::vector<double>& approx,
                              const std::vector<double>& detail);

// d -> sign(d) * max(|d| - lambda, 0)
double soft_threshold(double d, double lambda);

// Universal threshold sigma * sqrt(2 ln n), sigma = median(|detail|) / 0.6745.
double universal_threshold(const std::vector<double>& finest_detail, std::size_t n);

std::vector<double> wavelet_denoise(const std::vector<double>& signal,
                                    const WaveletConfig& cfg);

struct Sample {
    std::vector<double> window; // m entries: x(t), x(t+tau), ..., x(t+(m-1)tau)
    double target;              // x(t+(m-1)tau+1)
};

struct ReconstructedDataset {
    std::vector<Sample> samples;
    std::size_t m = 1;
    std::size_t tau = 1;
};

// Delay embedding by sliding window; sample count = max(0, N - (m-1)*tau - 1).
ReconstructedDataset phase_space_reconstruct(const std::vector<double>& signal,
                                             std::size_t m, std::size_t tau);

} // namespace psrgan
