#include "psrgan/trainer.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace psrgan {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

void clip_to_norm(GeneratorParams& g, double clip) {
    if (clip <= 0.0) return;
    const double n = g.l2_norm();
    if (n > clip) g.scale(clip / n);
}

void clip_to_norm(DiscriminatorParams& d, double clip) {
    if (clip <= 0.0) return;
    const double n = d.l2_norm();
    if (n > clip) {
        auto flat = d.to_flat();
        for (double& v : flat) v *= clip / n;
        d.from_flat(flat);
    }
}

nlohmann::json config_to_json(const TrainConfig& c) {
    return {{"rho_d", c.rho_d},
            {"rho_g", c.rho_g},
            {"lambda_adv", c.weights.lambda_adv},
            {"lambda_p", c.weights.lambda_p},
            {"lambda_dpl", c.weights.lambda_dpl},
            {"p", c.weights.p},
            {"batch_size", c.batch_size},
            {"epochs", c.epochs},
            {"m", c.m},
            {"tau", c.tau},
            {"hidden_size", c.hidden_size},
            {"peephole", c.peephole},
            {"seed", c.seed},
            {"model_kind", to_string(c.model_kind)},
            {"clip_norm", c.clip_norm}};
}

TrainConfig config_from_json(const nlohmann::json& j) {
    TrainConfig c;
    c.rho_d = j.at("rho_d").get<double>();
    c.rho_g = j.at("rho_g").get<double>();
    c.weights.lambda_adv = j.at("lambda_adv").get<double>();
    c.weights.lambda_p = j.at("lambda_p").get<double>();
    c.weights.lambda_dpl = j.at("lambda_dpl").get<double>();
    c.weights.p = j.at("p").get<int>();
    c.batch_size = j.at("batch_size").get<std::size_t>();
    c.epochs = j.at("epochs").get<std::size_t>();
    c.m = j.at("m").get<std::size_t>();
    c.tau = j.at("tau").get<std::size_t>();
    c.hidden_size = j.at("hidden_size").get<std::size_t>();
    c.peephole = j.at("peephole").get<bool>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.model_kind = model_kind_from_string(j.at("model_kind").get<std::string>());
    c.clip_norm = j.at("clip_norm").get<double>();
    return c;
}

std::vector<double> fake_sequence(const std::vector<double>& window, double terminal) {
    std::vector<double> seq = window;
    seq.push_back(terminal);
    return seq;
}

void check_dataset(const ReconstructedDataset& dataset, const TrainConfig& cfg) {
    cfg.validate();
    if (dataset.samples.empty()) throw EmptyDataset("no training samples");
    if (dataset.m != cfg.m)
        throw ConfigError("dataset window size " + std::to_string(dataset.m) +
                          " does not match config m " + std::to_string(cfg.m));
}

} // namespace

std::string to_string(ModelKind kind) {
    return kind == ModelKind::GanProposed ? "gan" : "lstm";
}

ModelKind model_kind_from_string(const std::string& name) {
    if (name == "gan") return ModelKind::GanProposed;
    if (name == "lstm" || name == "lstm_baseline") return ModelKind::LstmBaseline;
    throw ConfigError("unknown model kind: " + name);
}

void TrainConfig::validate() const {
    if (rho_d <= 0 || rho_g <= 0) throw ConfigError("learning rates must be positive");
    if (batch_size < 1) throw ConfigError("batch size must be >= 1");
    if (epochs < 1) throw ConfigError("epochs must be >= 1");
    if (m < 1 || tau < 1) throw ConfigError("m and tau must be >= 1");
    if (hidden_size < 1) throw ConfigError("hidden size must be >= 1");
    weights.validate();
}

std::string TrainHistory::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const EpochRecord& r : epochs)
        arr.push_back({{"epoch", r.epoch},
                       {"g_loss", r.g_loss},
                       {"g_adv", r.g_adv},
                       {"g_p", r.g_p},
                       {"g_dpl", r.g_dpl},
                       {"d_loss", r.d_loss},
                       {"seconds", r.seconds}});
    return nlohmann::json{{"format", "psrgan-history"}, {"version", 1}, {"epochs", arr}}
        .dump(2);
}

std::string TrainHistory::to_csv() const {
    std::ostringstream out;
    out << "epoch,g_loss,g_adv,g_p,g_dpl,d_loss,seconds\n";
    out.precision(12);
    for (const EpochRecord& r : epochs)
        out << r.epoch << ',' << r.g_loss << ',' << r.g_adv << ',' << r.g_p << ','
            << r.g_dpl << ',' << r.d_loss << ',' << r.seconds << '\n';
    return out.str();
}

std::string TrainedModel::to_json() const {
    nlohmann::json j;
    j["format"] = "psrgan-model";
    j["version"] = 1;
    j["kind"] = to_string(kind);
    j["norm"] = {{"min_value", norm.min_value},
                 {"max_value", norm.max_value},
                 {"feature", norm.feature}};
    j["config"] = config_to_json(config);
    j["generator"] = nlohmann::json::parse(generator.to_json());
    if (discriminator)
        j["discriminator"] = nlohmann::json::parse(discriminator->to_json());
    return j.dump(2);
}

TrainedModel TrainedModel::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    if (j.at("format") != "psrgan-model") throw InvalidParams("not a model file");
    TrainedModel m;
    m.kind = model_kind_from_string(j.at("kind").get<std::string>());
    m.norm.min_value = j.at("norm").at("min_value").get<double>();
    m.norm.max_value = j.at("norm").at("max_value").get<double>();
    m.norm.feature = j.at("norm").at("feature").get<std::string>();
    m.config = config_from_json(j.at("config"));
    m.generator = GeneratorParams::from_json(j.at("generator").dump());
    if (j.contains("discriminator"))
        m.discriminator = DiscriminatorParams::from_json(j.at("discriminator").dump());
    return m;
}

std::pair<TrainedModel, TrainHistory> train_gan(const ReconstructedDataset& dataset,
                                                const TrainConfig& cfg,
                                                const NormParams& norm) {
    check_dataset(dataset, cfg);

    Rng rng(cfg.seed);
    GeneratorConfig gcfg{1, cfg.hidden_size, cfg.peephole};
    GeneratorParams gen = GeneratorParams::init(gcfg, rng);
    DiscriminatorConfig dcfg = cfg.disc;
    dcfg.input_len = cfg.m + 1;
    // shrink kernel widths and strides that do not fit short windows so the
    // same defaults work across the full range of m
    {
        std::size_t len = dcfg.input_len;
        for (ConvSpec& spec : dcfg.conv) {
            spec.width = std::min(spec.width, len);
            spec.stride = std::min(spec.stride, spec.width);
            len = (len - spec.width) / spec.stride + 1;
        }
    }
    DiscriminatorParams disc = DiscriminatorParams::init(dcfg, rng);

    const std::size_t n = dataset.samples.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);

    TrainHistory history;
    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        const auto epoch_start = Clock::now();
        rng.shuffle(order);
        EpochRecord rec;
        rec.epoch = epoch;
        std::size_t d_batches = 0;

        for (std::size_t start = 0; start < n; start += cfg.batch_size) {
            const std::size_t stop = std::min(n, start + cfg.batch_size);

            // generator step against the composite loss
            GeneratorParams g_grad = GeneratorParams::zeros(gcfg);
            for (std::size_t b = start; b < stop; ++b) {
                const Sample& s = dataset.samples[order[b]];
                auto [pred, cache] = generator_forward(gen, s.window);
                auto [prob, d_cache] =
                    discriminator_forward(disc, fake_sequence(s.window, pred));
                PredictionPair pair{{s.target}, {pred}, s.window.back()};
                const auto breakdown = generator_loss(pair, d_cache.logit, cfg.weights);
                if (!std::isfinite(breakdown.total))
                    throw DivergenceDetected("non-finite generator loss at epoch " +
                                             std::to_string(epoch));
                rec.g_loss += breakdown.total;
                rec.g_adv += breakdown.adv;
                rec.g_p += breakdown.p_norm;
                rec.g_dpl += breakdown.dpl;

                // dL/dY': adversarial path through D's input gradient on the
                // terminal element, plus the p-norm path; l_dpl passes zero
                // gradient (piecewise constant)
                const auto d_grads =
                    discriminator_backward(disc, d_cache, sigmoid(d_cache.logit) - 1.0);
                const double d_pred =
                    cfg.weights.lambda_adv * d_grads.d_input.back() +
                    cfg.weights.lambda_p * sign(pred - s.target);
                g_grad.axpy(1.0, generator_backward(gen, cache, d_pred));
            }
            clip_to_norm(g_grad, cfg.clip_norm);
            gen.axpy(-cfg.rho_g, g_grad);

            // discriminator step on real vs freshly generated sequences
            DiscriminatorParams d_grad = DiscriminatorParams::zeros(dcfg);
            for (std::size_t b = start; b < stop; ++b) {
                const Sample& s = dataset.samples[order[b]];
                const auto [pred, cache] = generator_forward(gen, s.window);
                auto [p_real, real_cache] =
                    discriminator_forward(disc, fake_sequence(s.window, s.target));
                auto [p_fake, fake_cache] =
                    discriminator_forward(disc, fake_sequence(s.window, pred));
                const double loss =
                    discriminator_loss(real_cache.logit, fake_cache.logit);
                if (!std::isfinite(loss))
                    throw DivergenceDetected("non-finite discriminator loss at epoch " +
                                             std::to_string(epoch));
                rec.d_loss += loss;
                d_grad.axpy(
                    1.0,
                    discriminator_backward(disc, real_cache, p_real - 1.0).params);
                d_grad.axpy(1.0,
                            discriminator_backward(disc, fake_cache, p_fake).params);
            }
            clip_to_norm(d_grad, cfg.clip_norm);
            disc.axpy(-cfg.rho_d, d_grad);
            ++d_batches;
        }

        const double dn = static_cast<double>(n);
        rec.g_loss /= dn;
        rec.g_adv /= dn;
        rec.g_p /= dn;
        rec.g_dpl /= dn;
        rec.d_loss /= dn;
        rec.seconds = seconds_since(epoch_start);
        history.epochs.push_back(rec);
        (void)d_batches;
    }

    TrainedModel model;
    model.kind = ModelKind::GanProposed;
    model.generator = std::move(gen);
    model.discriminator = std::move(disc);
    model.norm = norm;
    model.config = cfg;
    model.config.model_kind = ModelKind::GanProposed;
    return {std::move(model), std::move(history)};
}

std::pair<TrainedModel, TrainHistory> train_baseline(const ReconstructedDataset& dataset,
                                                     const TrainConfig& cfg,
                                                     const NormParams& norm) {
    check_dataset(dataset, cfg);

    Rng rng(cfg.seed);
    GeneratorConfig gcfg{1, cfg.hidden_size, cfg.peephole};
    GeneratorParams gen = GeneratorParams::init(gcfg, rng);

    const std::size_t n = dataset.samples.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);

    TrainHistory history;
    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        const auto epoch_start = Clock::now();
        rng.shuffle(order);
        EpochRecord rec;
        rec.epoch = epoch;

        for (std::size_t start = 0; start < n; start += cfg.batch_size) {
            const std::size_t stop = std::min(n, start + cfg.batch_size);
            GeneratorParams g_grad = GeneratorParams::zeros(gcfg);
            for (std::size_t b = start; b < stop; ++b) {
                const Sample& s = dataset.samples[order[b]];
                auto [pred, cache] = generator_forward(gen, s.window);
                const double loss = baseline_loss({pred}, {s.target});
                if (!std::isfinite(loss))
                    throw DivergenceDetected("non-finite baseline loss at epoch " +
                                             std::to_string(epoch));
                rec.g_loss += loss;
                rec.g_p += loss;
                g_grad.axpy(1.0,
                            generator_backward(gen, cache, 2.0 * (pred - s.target)));
            }
            clip_to_norm(g_grad, cfg.clip_norm);
            gen.axpy(-cfg.rho_g, g_grad);
        }

        const double dn = static_cast<double>(n);
        rec.g_loss /= dn;
        rec.g_p /= dn;
        rec.seconds = seconds_since(epoch_start);
        history.epochs.push_back(rec);
    }

    TrainedModel model;
    model.kind = ModelKind::LstmBaseline;
    model.generator = std::move(gen);
    model.norm = norm;
    model.config = cfg;
    model.config.model_kind = ModelKind::LstmBaseline;
    return {std::move(model), std::move(history)};
}

double predict(const TrainedModel& model, const std::vector<double>& raw_window) {
    if (raw_window.size() != model.config.m)
        throw ShapeMismatch("window length " + std::to_string(raw_window.size()) +
                            " vs model m " + std::to_string(model.config.m));
    const auto norm_window = normalize_with(raw_window, model.norm);
    const auto [pred, cache] = generator_forward(model.generator, norm_window);
    (void)cache;
    return denormalize_one(pred, model.norm);
}

EvalOutput evaluate_on_values(const TrainedModel& model,
                              const std::vector<double>& prices) {
    const std::size_t m = model.config.m;
    const std::size_t tau = model.config.tau;
    const std::size_t span = (m - 1) * tau;
    if (prices.size() < span + 2) throw TooShort("test span too short for one window");

    const auto start = Clock::now();
    EvalOutput out;
    for (std::size_t t = 0; t + span + 1 < prices.size(); ++t) {
        std::vector<double> window(m);
        for (std::size_t d = 0; d < m; ++d) window[d] = prices[t + d * tau];
        out.predicted.push_back(predict(model, window));
        out.actual.push_back(prices[t + span + 1]);
    }
    out.report = evaluate(out.actual, out.predicted, seconds_since(start));
    return out;
}

EvalOutput evaluate_on_test(const TrainedModel& model, const PriceSeries& test_series) {
    return evaluate_on_values(model, close_prices(test_series));
}

} // namespace psrgan
