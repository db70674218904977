#include "psrgan/preprocess.hpp"

#include <algorithm>
#include <cmath>

namespace psrgan {

namespace {
constexpr double kInvSqrt2 = 0.7071067811865475244;
}

HaarPair haar_dwt(const std::vector<double>& signal) {
    if (signal.size() < 2) throw TooShort("haar_dwt needs length >= 2");
    HaarPair out;
    std::vector<double> padded;
    const std::vector<double>* src = &signal;
    if (signal.size() % 2 != 0) {
        padded = signal;
        padded.push_back(signal.back());
        src = &padded;
        out.padded = true;
    }
    const std::size_t half = src->size() / 2;
    out.approx.resize(half);
    out.detail.resize(half);
    for (std::size_t k = 0; k < half; ++k) {
        const double a = (*src)[2 * k];
        const double b = (*src)[2 * k + 1];
        out.approx[k] = (a + b) * kInvSqrt2;
        out.detail[k] = (a - b) * kInvSqrt2;
    }
    return out;
}

std::vector<double> haar_idwt(const std::vector<double>& approx,
                              const std::vector<double>& detail) {
    if (approx.size() != detail.size())
        throw LengthMismatch("haar_idwt: approx " + std::to_string(approx.size()) +
                             " vs detail " + std::to_string(detail.size()));
    std::vector<double> out(approx.size() * 2);
    for (std::size_t k = 0; k < approx.size(); ++k) {
        out[2 * k] = (approx[k] + detail[k]) * kInvSqrt2;
        out[2 * k + 1] = (approx[k] - detail[k]) * kInvSqrt2;
    }
    return out;
}

double soft_threshold(double d, double lambda) {
    const double mag = std::fabs(d) - lambda;
    if (mag <= 0.0) return 0.0;
    return d > 0.0 ? mag : -mag;
}

double universal_threshold(const std::vector<double>& finest_detail, std::size_t n) {
    if (finest_detail.empty() || n < 2) return 0.0;
    std::vector<double> mags(finest_detail.size());
    for (std::size_t i = 0; i < mags.size(); ++i) mags[i] = std::fabs(finest_detail[i]);
    std::sort(mags.begin(), mags.end());
    const std::size_t h = mags.size() / 2;
    const double median =
        mags.size() % 2 ? mags[h] : 0.5 * (mags[h - 1] + mags[h]);
    const double sigma = median / 0.6745;
    return sigma * std::sqrt(2.0 * std::log(static_cast<double>(n)));
}

std::vector<double> wavelet_denoise(const std::vector<double>& signal,
                                    const WaveletConfig& cfg) {
    const std::size_t min_len = std::size_t{1} << cfg.levels;
    if (signal.size() < min_len)
        throw TooShort("signal length " + std::to_string(signal.size()) +
                       " < 2^levels = " + std::to_string(min_len));

    std::vector<double> approx = signal;
    std::vector<std::vector<double>> details(cfg.levels);
    std::vector<bool> pad_flags(cfg.levels);
    for (std::size_t lv = 0; lv < cfg.levels; ++lv) {
        HaarPair pair = haar_dwt(approx);
        approx = std::move(pair.approx);
        details[lv] = std::move(pair.detail);
        pad_flags[lv] = pair.padded;
    }

    double lambda = 0.0;
    switch (cfg.threshold_rule) {
        case ThresholdRule::None: break;
        case ThresholdRule::Fixed: lambda = cfg.fixed_threshold; break;
        case ThresholdRule::Universal:
            lambda = universal_threshold(details[0], signal.size());
            break;
    }
    if (lambda > 0.0)
        for (auto& level : details)
            for (double& d : level) d = soft_threshold(d, lambda);

    for (std::size_t lv = cfg.levels; lv-- > 0;) {
        approx = haar_idwt(approx, details[lv]);
        if (pad_flags[lv]) approx.pop_back();
    }
    return approx;
}

ReconstructedDataset phase_space_reconstruct(const std::vector<double>& signal,
                                             std::size_t m, std::size_t tau) {
    if (m < 1 || tau < 1) throw InvalidParams("m and tau must be >= 1");
    ReconstructedDataset out;
    out.m = m;
    out.tau = tau;
    const std::size_t span = (m - 1) * tau; // index of last window element
    for (std::size_t t = 0; t + span + 1 < signal.size(); ++t) {
        Sample s;
        s.window.reserve(m);
        for (std::size_t d = 0; d < m; ++d) s.window.push_back(signal[t + d * tau]);
        s.target = signal[t + span + 1];
        out.samples.push_back(std::move(s));
    }
    return out;
}

} // namespace psrgan
