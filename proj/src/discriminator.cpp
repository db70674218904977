#include "psrgan/discriminator.hpp"

#include <cmath>

#include "json.hpp"

namespace psrgan {

namespace {

std::size_t conv_out_len(std::size_t len, std::size_t width, std::size_t stride) {
    if (len < width) throw SignalTooShort("signal length " + std::to_string(len) +
                                          " < kernel width " + std::to_string(width));
    return (len - width) / stride + 1;
}

} // namespace

std::vector<double> conv1d_forward(const std::vector<double>& kernel, double bias,
                                   std::size_t stride,
                                   const std::vector<double>& signal) {
    if (stride < 1) throw InvalidParams("stride must be >= 1");
    const std::size_t out_len = conv_out_len(signal.size(), kernel.size(), stride);
    std::vector<double> out(out_len, bias);
    for (std::size_t j = 0; j < out_len; ++j)
        for (std::size_t k = 0; k < kernel.size(); ++k)
            out[j] += kernel[k] * signal[j * stride + k];
    return out;
}

DiscriminatorParams DiscriminatorParams::zeros(const DiscriminatorConfig& cfg) {
    DiscriminatorParams p;
    p.cfg = cfg;
    std::size_t channels = 1;
    std::size_t len = cfg.input_len;
    for (const ConvSpec& spec : cfg.conv) {
        ConvLayer layer;
        layer.in_channels = channels;
        layer.spec = spec;
        layer.kernels = Matrix(spec.out_channels, channels * spec.width);
        layer.bias.assign(spec.out_channels, 0.0);
        p.conv.push_back(std::move(layer));
        len = conv_out_len(len, spec.width, spec.stride);
        channels = spec.out_channels;
    }
    std::size_t width = channels * len; // flattened
    for (std::size_t hidden : cfg.dense_hidden) {
        p.dense.push_back({Matrix(hidden, width), std::vector<double>(hidden, 0.0)});
        width = hidden;
    }
    p.dense.push_back({Matrix(1, width), std::vector<double>(1, 0.0)});
    return p;
}

DiscriminatorParams DiscriminatorParams::init(const DiscriminatorConfig& cfg, Rng& rng) {
    DiscriminatorParams p = zeros(cfg);
    for (ConvLayer& layer : p.conv)
        layer.kernels = xavier_init(layer.kernels.rows, layer.kernels.cols, rng);
    for (DenseLayer& layer : p.dense)
        layer.weights = xavier_init(layer.weights.rows, layer.weights.cols, rng);
    return p;
}

std::size_t DiscriminatorParams::flat_size() const {
    std::size_t n = 0;
    for (const ConvLayer& l : conv) n += l.kernels.data.size() + l.bias.size();
    for (const DenseLayer& l : dense) n += l.weights.data.size() + l.bias.size();
    return n;
}

std::vector<double> DiscriminatorParams::to_flat() const {
    std::vector<double> flat;
    flat.reserve(flat_size());
    for (const ConvLayer& l : conv) {
        flat.insert(flat.end(), l.kernels.data.begin(), l.kernels.data.end());
        flat.insert(flat.end(), l.bias.begin(), l.bias.end());
    }
    for (const DenseLayer& l : dense) {
        flat.insert(flat.end(), l.weights.data.begin(), l.weights.data.end());
        flat.insert(flat.end(), l.bias.begin(), l.bias.end());
    }
    return flat;
}

void DiscriminatorParams::from_flat(const std::vector<double>& flat) {
    if (flat.size() != flat_size()) throw ShapeMismatch("from_flat size mismatch");
    std::size_t pos = 0;
    auto take = [&](std::vector<double>& dst) {
        std::copy(flat.begin() + pos, flat.begin() + pos + dst.size(), dst.begin());
        pos += dst.size();
    };
    for (ConvLayer& l : conv) {
        take(l.kernels.data);
        take(l.bias);
    }
    for (DenseLayer& l : dense) {
        take(l.weights.data);
        take(l.bias);
    }
}

void DiscriminatorParams::axpy(double alpha, const DiscriminatorParams& other) {
    if (conv.size() != other.conv.size() || dense.size() != other.dense.size())
        throw ShapeMismatch("axpy layer counts");
    for (std::size_t k = 0; k < conv.size(); ++k) {
        for (std::size_t i = 0; i < conv[k].kernels.data.size(); ++i)
            conv[k].kernels.data[i] += alpha * other.conv[k].kernels.data[i];
        for (std::size_t i = 0; i < conv[k].bias.size(); ++i)
            conv[k].bias[i] += alpha * other.conv[k].bias[i];
    }
    for (std::size_t k = 0; k < dense.size(); ++k) {
        for (std::size_t i = 0; i < dense[k].weights.data.size(); ++i)
            dense[k].weights.data[i] += alpha * other.dense[k].weights.data[i];
        for (std::size_t i = 0; i < dense[k].bias.size(); ++i)
            dense[k].bias[i] += alpha * other.dense[k].bias[i];
    }
}

double DiscriminatorParams::l2_norm() const {
    double sum = 0.0;
    for (double v : to_flat()) sum += v * v;
    return std::sqrt(sum);
}

std::string DiscriminatorParams::to_json() const {
    nlohmann::json j;
    j["format"] = "psrgan-discriminator";
    j["version"] = 1;
    j["input_len"] = cfg.input_len;
    j["conv_specs"] = nlohmann::json::array();
    for (const ConvSpec& s : cfg.conv)
        j["conv_specs"].push_back(
            {{"out_channels", s.out_channels}, {"width", s.width}, {"stride", s.stride}});
    j["dense_hidden"] = cfg.dense_hidden;
    j["flat"] = to_flat();
    return j.dump(2);
}

DiscriminatorParams DiscriminatorParams::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    if (j.at("format") != "psrgan-discriminator")
        throw InvalidParams("not a discriminator parameter file");
    DiscriminatorConfig cfg;
    cfg.input_len = j.at("input_len").get<std::size_t>();
    cfg.conv.clear();
    for (const auto& s : j.at("conv_specs"))
        cfg.conv.push_back({s.at("out_channels").get<std::size_t>(),
                            s.at("width").get<std::size_t>(),
                            s.at("stride").get<std::size_t>()});
    cfg.dense_hidden = j.at("dense_hidden").get<std::vector<std::size_t>>();
    DiscriminatorParams p = zeros(cfg);
    p.from_flat(j.at("flat").get<std::vector<double>>());
    return p;
}

std::pair<double, DiscriminatorCache> discriminator_forward(
    const DiscriminatorParams& params, const std::vector<double>& seq) {
    if (seq.size() != params.cfg.input_len)
        throw ShapeMismatch("sequence length " + std::to_string(seq.size()) +
                            " vs configured " + std::to_string(params.cfg.input_len));
    DiscriminatorCache cache;
    cache.input = seq;

    std::vector<std::vector<double>> channels{seq};
    for (const ConvLayer& layer : params.conv) {
        if (channels.size() != layer.in_channels)
            throw ShapeMismatch("conv layer channel count");
        cache.conv_inputs.push_back(channels);
        const std::size_t out_len =
            conv_out_len(channels[0].size(), layer.spec.width, layer.spec.stride);
        std::vector<std::vector<double>> pre(layer.spec.out_channels,
                                             std::vector<double>(out_len));
        for (std::size_t oc = 0; oc < layer.spec.out_channels; ++oc) {
            for (std::size_t j = 0; j < out_len; ++j) {
                double s = layer.bias[oc];
                for (std::size_t ic = 0; ic < layer.in_channels; ++ic)
                    for (std::size_t k = 0; k < layer.spec.width; ++k)
                        s += layer.kernels(oc, ic * layer.spec.width + k) *
                             channels[ic][j * layer.spec.stride + k];
                pre[oc][j] = s;
            }
        }
        cache.conv_pre.push_back(pre);
        channels.assign(layer.spec.out_channels, {});
        for (std::size_t oc = 0; oc < pre.size(); ++oc) {
            channels[oc].resize(out_len);
            for (std::size_t j = 0; j < out_len; ++j) channels[oc][j] = relu(pre[oc][j]);
        }
    }

    // flatten channel-major
    std::vector<double> vec;
    for (const auto& ch : channels) vec.insert(vec.end(), ch.begin(), ch.end());

    for (std::size_t k = 0; k < params.dense.size(); ++k) {
        const DenseLayer& layer = params.dense[k];
        cache.dense_inputs.push_back(vec);
        std::vector<double> pre = matvec(layer.weights, vec);
        for (std::size_t i = 0; i < pre.size(); ++i) pre[i] += layer.bias[i];
        cache.dense_pre.push_back(pre);
        if (k + 1 == params.dense.size()) {
            vec = pre; // final logit, no activation
        } else {
            for (double& v : pre) v = relu(v);
            vec = std::move(pre);
        }
    }
    cache.logit = vec[0];
    return {sigmoid(cache.logit), std::move(cache)};
}

DiscriminatorGrads discriminator_backward(const DiscriminatorParams& params,
                                          const DiscriminatorCache& cache,
                                          double d_logit) {
    if (cache.conv_inputs.size() != params.conv.size() ||
        cache.dense_inputs.size() != params.dense.size())
        throw StaleCache("cache does not match params");

    DiscriminatorGrads out;
    out.params = DiscriminatorParams::zeros(params.cfg);

    std::vector<double> dvec{d_logit};
    for (std::size_t k = params.dense.size(); k-- > 0;) {
        const DenseLayer& layer = params.dense[k];
        DenseLayer& grad = out.params.dense[k];
        if (k + 1 != params.dense.size()) {
            // gradient through the ReLU applied to this layer's pre-activation
            for (std::size_t i = 0; i < dvec.size(); ++i)
                if (cache.dense_pre[k][i] <= 0.0) dvec[i] = 0.0;
        }
        for (std::size_t i = 0; i < dvec.size(); ++i) grad.bias[i] += dvec[i];
        add_outer(grad.weights, 1.0, dvec, cache.dense_inputs[k]);
        dvec = matvec_t(layer.weights, dvec);
    }

    // un-flatten into channel gradients of the last conv output
    std::size_t channels = params.conv.empty() ? 1 : params.conv.back().spec.out_channels;
    std::size_t out_len = dvec.size() / channels;
    std::vector<std::vector<double>> dch(channels, std::vector<double>(out_len));
    for (std::size_t oc = 0; oc < channels; ++oc)
        for (std::size_t j = 0; j < out_len; ++j) dch[oc][j] = dvec[oc * out_len + j];

    for (std::size_t k = params.conv.size(); k-- > 0;) {
        const ConvLayer& layer = params.conv[k];
        ConvLayer& grad = out.params.conv[k];
        const auto& inputs = cache.conv_inputs[k];
        const auto& pre = cache.conv_pre[k];
        const std::size_t len = pre[0].size();
        for (std::size_t oc = 0; oc < layer.spec.out_channels; ++oc)
            for (std::size_t j = 0; j < len; ++j)
                if (pre[oc][j] <= 0.0) dch[oc][j] = 0.0;

        std::vector<std::vector<double>> din(layer.in_channels,
                                             std::vector<double>(inputs[0].size(), 0.0));
        for (std::size_t oc = 0; oc < layer.spec.out_channels; ++oc) {
            for (std::size_t j = 0; j < len; ++j) {
                const double d = dch[oc][j];
                if (d == 0.0) continue;
                grad.bias[oc] += d;
                for (std::size_t ic = 0; ic < layer.in_channels; ++ic)
                    for (std::size_t w = 0; w < layer.spec.width; ++w) {
                        const std::size_t idx = j * layer.spec.stride + w;
                        grad.kernels(oc, ic * layer.spec.width + w) += d * inputs[ic][idx];
                        din[ic][idx] += d * layer.kernels(oc, ic * layer.spec.width + w);
                    }
            }
        }
        dch = std::move(din);
    }
    out.d_input = dch[0];
    return out;
}

} // namespace psrgan
