#pragma once

#include <optional>
#include <string>
#include <vector>

#include "psrgan/discriminator.hpp"
#include "psrgan/generator.hpp"
#include "psrgan/ingest.hpp"
#include "psrgan/losses.hpp"
#include "psrgan/metrics.hpp"
#include "psrgan/preprocess.hpp"

namespace psrgan {

enum class ModelKind { GanProposed, LstmBaseline };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

struct TrainConfig {
    double rho_d = 0.01;
    double rho_g = 0.01;
    LossWeights weights;
    std::size_t batch_size = 32; // K
    std::size_t epochs = 100;
    std::size_t m = 121;
    std::size_t tau = 1;
    std::size_t hidden_size = 25;
    bool peephole = true;
    std::uint64_t seed = 42;
    ModelKind model_kind = ModelKind::GanProposed;
    double clip_norm = 5.0;
    DiscriminatorConfig disc; // input_len is derived from m at training time

    void validate() const;
};

struct EpochRecord {
    std::size_t epoch = 0;
    double g_loss = 0;
    double g_adv = 0;
    double g_p = 0;
    double g_dpl = 0;
    double d_loss = 0;
    double seconds = 0;
};

struct TrainHistory {
    std::vector<EpochRecord> epochs;

    std::string to_json() const;
    std::string to_csv() const;
};

struct TrainedModel {
    ModelKind kind = ModelKind::GanProposed;
    GeneratorParams generator;
    std::optional<DiscriminatorParams> discriminator;
    NormParams norm;
    TrainConfig config;

    std::string to_json() const;
    static TrainedModel from_json(const std::string& text);
};

// Alternating adversarial training per minibatch: a generator step against
// the composite loss, then a discriminator step against the standard GAN
// objective. Fixed epoch budget; deterministic under seed.
std::pair<TrainedModel, TrainHistory> train_gan(const ReconstructedDataset& dataset,
                                                const TrainConfig& cfg,
                                                const NormParams& norm);

// Minibatch SGD on the generator alone against the squared forecast error.
std::pair<TrainedModel, TrainHistory> train_baseline(const ReconstructedDataset& dataset,
                                                     const TrainConfig& cfg,
                                                     const NormParams& norm);

// raw-price window in, raw-price next-step prediction out
double predict(const TrainedModel& model, const std::vector<double>& raw_window);

struct EvalOutput {
    EvalReport report;
    std::vector<double> actual;    // raw prices, one per test window position
    std::vector<double> predicted; // aligned predictions
};

// Walk-forward one-step-ahead evaluation over every valid window position.
EvalOutput evaluate_on_test(const TrainedModel& model, const PriceSeries& test_series);
EvalOutput evaluate_on_values(const TrainedModel& model, const std::vector<double>& prices);

} // namespace psrgan
