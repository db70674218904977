#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "psrgan/numerics.hpp"

namespace psrgan {

struct ConvSpec {
    std::size_t out_channels = 8;
    std::size_t width = 5;
    std::size_t stride = 2;
};

struct DiscriminatorConfig {
    std::size_t input_len = 122; // m + 1
    std::vector<ConvSpec> conv = {{8, 5, 2}, {16, 5, 2}};
    std::vector<std::size_t> dense_hidden = {32};
};

struct ConvLayer {
    std::size_t in_channels = 1;
    ConvSpec spec;
    Matrix kernels; // out_channels x (in_channels * width)
    std::vector<double> bias;
};

struct DenseLayer {
    Matrix weights;
    std::vector<double> bias;
};

struct DiscriminatorParams {
    DiscriminatorConfig cfg;
    std::vector<ConvLayer> conv;
    std::vector<DenseLayer> dense; // last layer emits the single logit

    static DiscriminatorParams zeros(const DiscriminatorConfig& cfg);
    static DiscriminatorParams init(const DiscriminatorConfig& cfg, Rng& rng);

    std::size_t flat_size() const;
    std::vector<double> to_flat() const;
    void from_flat(const std::vector<double>& flat);
    void axpy(double alpha, const DiscriminatorParams& other);
    double l2_norm() const;

    std::string to_json() const;
    static DiscriminatorParams from_json(const std::string& text);
};

// valid (no-padding) cross-correlation of a single-channel kernel
std::vector<double> conv1d_forward(const std::vector<double>& kernel, double bias,
                                   std::size_t stride, const std::vector<double>& signal);

struct DiscriminatorCache {
    std::vector<double> input;
    // per conv layer: layer input channels and pre-activation outputs
    std::vector<std::vector<std::vector<double>>> conv_inputs;
    std::vector<std::vector<std::vector<double>>> conv_pre;
    // per dense layer: input vector and pre-activation output
    std::vector<std::vector<double>> dense_inputs;
    std::vector<std::vector<double>> dense_pre;
    double logit = 0.0;
};

// probability that the terminal value of seq is real; ReLU hidden
// activations, sigmoid on the final logit
std::pair<double, DiscriminatorCache> discriminator_forward(
    const DiscriminatorParams& params, const std::vector<double>& seq);

struct DiscriminatorGrads {
    DiscriminatorParams params;       // gradient in parameter layout
    std::vector<double> d_input;      // gradient w.r.t. the input sequence
};

DiscriminatorGrads discriminator_backward(const DiscriminatorParams& params,
                                          const DiscriminatorCache& cache,
                                          double d_logit);

} // namespace psrgan
