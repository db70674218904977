#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "psrgan/numerics.hpp"

namespace psrgan {

struct GeneratorConfig {
    std::size_t input_size = 1;
    std::size_t hidden_size = 25;
    bool peephole = true; // Gers-style peephole connections on i, f, o gates
};

// All learnable weights of the LSTM generator plus the linear output head.
struct GeneratorParams {
    GeneratorConfig cfg;
    Matrix W_i, W_f, W_c, W_o; // hidden x input
    Matrix R_i, R_f, R_c, R_o; // hidden x hidden
    std::vector<double> V_i, V_f, V_o;     // per-unit peephole weights
    std::vector<double> b_i, b_f, b_c, b_o; // offsets
    std::vector<double> W_y; // 1 x hidden output projection
    double b_y = 0.0;

    static GeneratorParams zeros(const GeneratorConfig& cfg);
    static GeneratorParams init(const GeneratorConfig& cfg, Rng& rng);

    std::size_t flat_size() const;
    std::vector<double> to_flat() const;
    void from_flat(const std::vector<double>& flat);

    void axpy(double alpha, const GeneratorParams& other); // this += alpha * other
    double l2_norm() const;
    void scale(double alpha);

    std::string to_json() const;
    static GeneratorParams from_json(const std::string& text);
};

struct LstmState {
    std::vector<double> h;
    std::vector<double> c;

    static LstmState zeros(std::size_t hidden);
};

struct GateRecord {
    std::vector<double> x, h_prev, c_prev;
    std::vector<double> i, f, chat, c, o, h;
};

struct ForwardCache {
    std::vector<GateRecord> steps;
    std::size_t hidden_size = 0;
    std::size_t input_size = 0;
};

std::pair<LstmState, GateRecord> lstm_cell_forward(const GeneratorParams& params,
                                                   const std::vector<double>& x_t,
                                                   const LstmState& prev);

// Feeds window elements one per timestep from zero state; prediction is
// W_y . h_m + b_y.
std::pair<double, ForwardCache> generator_forward(const GeneratorParams& params,
                                                  const std::vector<double>& window);

// Reverse-mode gradients of (d_prediction * prediction) w.r.t. every field,
// backpropagated through all timesteps including the peephole paths.
GeneratorParams generator_backward(const GeneratorParams& params,
                                   const ForwardCache& cache, double d_prediction);

} // namespace psrgan
