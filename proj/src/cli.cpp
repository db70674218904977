#include "psrgan/cli.hpp"

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "psrgan/trainer.hpp"

namespace psrgan {

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitDivergence = 4;

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

struct PipelineOptions {
    std::string data_path;
    std::string ticker;
    double train_fraction = 0.8;
    std::size_t wavelet_levels = 1;
    std::string threshold_rule = "universal";
    double fixed_threshold = 0.0;
};

ThresholdRule parse_rule(const std::string& name) {
    if (name == "none") return ThresholdRule::None;
    if (name == "universal") return ThresholdRule::Universal;
    if (name == "fixed") return ThresholdRule::Fixed;
    throw ConfigError("unknown threshold rule: " + name);
}

struct PreparedData {
    PriceSeries train;
    PriceSeries test;
    ReconstructedDataset dataset;
    NormParams norm;
    std::size_t dropped_rows = 0;
    std::uint64_t data_checksum = 0;
};

PreparedData prepare(const PipelineOptions& opt, const TrainConfig& cfg) {
    const std::string raw = read_file(opt.data_path);
    auto parsed = parse_csv(raw, opt.ticker.empty() ? fs::path(opt.data_path).stem().string()
                                                    : opt.ticker);
    PreparedData out;
    out.dropped_rows = parsed.dropped_rows;
    out.data_checksum = fnv1a(raw);
    std::tie(out.train, out.test) =
        split_chronological(parsed.series, opt.train_fraction);

    WaveletConfig wcfg{opt.wavelet_levels, parse_rule(opt.threshold_rule),
                       opt.fixed_threshold};
    const auto denoised = wavelet_denoise(close_prices(out.train), wcfg);
    auto [normalized, norm] = normalize(denoised);
    out.norm = norm;
    out.dataset = phase_space_reconstruct(normalized, cfg.m, cfg.tau);
    if (out.dataset.samples.empty())
        throw TooShort("train split too short for window size m=" + std::to_string(cfg.m));
    return out;
}

void apply_config_file(TrainConfig& cfg, PipelineOptions& opt, const std::string& path) {
    const auto j = nlohmann::json::parse(read_file(path));
    auto get = [&](const char* key, auto& dst) {
        if (j.contains(key)) dst = j.at(key).get<std::decay_t<decltype(dst)>>();
    };
    get("rho_g", cfg.rho_g);
    get("rho_d", cfg.rho_d);
    get("lambda_adv", cfg.weights.lambda_adv);
    get("lambda_p", cfg.weights.lambda_p);
    get("lambda_dpl", cfg.weights.lambda_dpl);
    get("p", cfg.weights.p);
    get("batch_size", cfg.batch_size);
    get("epochs", cfg.epochs);
    get("m", cfg.m);
    get("tau", cfg.tau);
    get("hidden_size", cfg.hidden_size);
    get("peephole", cfg.peephole);
    get("seed", cfg.seed);
    get("clip_norm", cfg.clip_norm);
    get("train_fraction", opt.train_fraction);
    get("wavelet_levels", opt.wavelet_levels);
    get("threshold_rule", opt.threshold_rule);
    get("fixed_threshold", opt.fixed_threshold);
    if (j.contains("model_kind"))
        cfg.model_kind = model_kind_from_string(j.at("model_kind").get<std::string>());
}

std::string manifest_json(const TrainConfig& cfg, const PreparedData& data,
                          const std::string& data_path) {
    const auto now = std::chrono::system_clock::now().time_since_epoch();
    nlohmann::json config{{"rho_d", cfg.rho_d},
                          {"rho_g", cfg.rho_g},
                          {"lambda_adv", cfg.weights.lambda_adv},
                          {"lambda_p", cfg.weights.lambda_p},
                          {"lambda_dpl", cfg.weights.lambda_dpl},
                          {"p", cfg.weights.p},
                          {"batch_size", cfg.batch_size},
                          {"epochs", cfg.epochs},
                          {"m", cfg.m},
                          {"tau", cfg.tau},
                          {"hidden_size", cfg.hidden_size},
                          {"peephole", cfg.peephole},
                          {"seed", cfg.seed},
                          {"model_kind", to_string(cfg.model_kind)},
                          {"clip_norm", cfg.clip_norm}};
    nlohmann::json j{
        {"data_path", data_path},
        {"data_checksum_fnv1a", data.data_checksum},
        {"dropped_rows", data.dropped_rows},
        {"train_bars", data.train.bars.size()},
        {"test_bars", data.test.bars.size()},
        {"samples", data.dataset.samples.size()},
        {"created_unix_ms",
         std::chrono::duration_cast<std::chrono::milliseconds>(now).count()},
        {"config", config}};
    return j.dump(2);
}

std::string predictions_csv(const PriceSeries& test, const TrainedModel& model,
                            const EvalOutput& eval) {
    // actual/predicted index i targets bar (m-1)*tau + 1 + i of the test span
    const std::size_t span = (model.config.m - 1) * model.config.tau;
    std::ostringstream out;
    out << "date,actual,predicted\n";
    out.precision(12);
    for (std::size_t i = 0; i < eval.actual.size(); ++i) {
        const std::size_t bar = span + 1 + i;
        out << (bar < test.bars.size() ? test.bars[bar].date.to_string() : "") << ','
            << eval.actual[i] << ',' << eval.predicted[i] << '\n';
    }
    return out.str();
}

struct ComparisonRow {
    std::string ticker;
    EvalReport baseline;
    EvalReport proposed;
    std::vector<double> actual;
    std::vector<double> baseline_pred;
    std::vector<double> proposed_pred;
};

EvalReport average_report(const std::vector<EvalReport>& reports) {
    EvalReport avg;
    for (const EvalReport& r : reports) {
        avg.directional_accuracy_pct += r.directional_accuracy_pct;
        avg.trend_da_pct += r.trend_da_pct;
        avg.rmse += r.rmse;
        avg.rmsre += r.rmsre;
        avg.mrmse += r.mrmse;
        avg.processing_time_s += r.processing_time_s;
        avg.n_points += r.n_points;
    }
    const double n = static_cast<double>(reports.size());
    avg.directional_accuracy_pct /= n;
    avg.trend_da_pct /= n;
    avg.rmse /= n;
    avg.rmsre /= n;
    avg.mrmse /= n;
    avg.processing_time_s /= n;
    return avg;
}

std::string comparison_text(const std::vector<ComparisonRow>& rows) {
    std::ostringstream out;
    char line[256];
    std::snprintf(line, sizeof line, "%-12s %-44s %-44s\n", "", "State of Art",
                  "Proposed");
    out << line;
    std::snprintf(line, sizeof line, "%-12s %-22s %-12s %-8s %-22s %-12s %-8s\n",
                  "Stock Index", "Directional Accuracy", "Processing Time", "MRSE",
                  "Directional Accuracy", "Processing Time", "MRSE");
    out << line;
    auto emit = [&](const std::string& name, const EvalReport& base,
                    const EvalReport& prop) {
        std::snprintf(line, sizeof line,
                      "%-12s %20.2f%% %11.0f Sec %8.4f %20.2f%% %11.0f Sec %8.4f\n",
                      name.c_str(), base.directional_accuracy_pct,
                      base.processing_time_s, base.mrmse,
                      prop.directional_accuracy_pct, prop.processing_time_s,
                      prop.mrmse);
        out << line;
    };
    std::vector<EvalReport> bases, props;
    for (const ComparisonRow& r : rows) {
        emit(r.ticker, r.baseline, r.proposed);
        bases.push_back(r.baseline);
        props.push_back(r.proposed);
    }
    emit("Average", average_report(bases), average_report(props));
    return out.str();
}

nlohmann::json report_to_json(const EvalReport& r) {
    return nlohmann::json::parse(r.to_json());
}

std::string comparison_json(const std::vector<ComparisonRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    std::vector<EvalReport> bases, props;
    for (const ComparisonRow& r : rows) {
        arr.push_back({{"ticker", r.ticker},
                       {"baseline", report_to_json(r.baseline)},
                       {"proposed", report_to_json(r.proposed)},
                       {"actual", r.actual},
                       {"baseline_pred", r.baseline_pred},
                       {"proposed_pred", r.proposed_pred}});
        bases.push_back(r.baseline);
        props.push_back(r.proposed);
    }
    nlohmann::json j{{"format", "psrgan-comparison"},
                     {"version", 1},
                     {"rows", arr},
                     {"average",
                      {{"baseline", report_to_json(average_report(bases))},
                       {"proposed", report_to_json(average_report(props))}}}};
    return j.dump(2);
}

int cmd_train(const PipelineOptions& opt, TrainConfig cfg, const std::string& out_dir,
              std::ostream& out) {
    const PreparedData data = prepare(opt, cfg);
    const auto start = std::chrono::steady_clock::now();
    auto [model, history] = cfg.model_kind == ModelKind::GanProposed
                                ? train_gan(data.dataset, cfg, data.norm)
                                : train_baseline(data.dataset, cfg, data.norm);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / "model.json", model.to_json());
    write_file(fs::path(out_dir) / "history.json", history.to_json());
    write_file(fs::path(out_dir) / "history.csv", history.to_csv());
    write_file(fs::path(out_dir) / "manifest.json",
               manifest_json(cfg, data, opt.data_path));
    out << "trained " << to_string(cfg.model_kind) << " in " << elapsed << " s, "
        << history.epochs.size() << " epochs, final loss "
        << history.epochs.back().g_loss << "\n";
    return kExitOk;
}

int cmd_evaluate(const std::string& model_path, const std::string& data_path,
                 double train_fraction, const std::string& format,
                 const std::string& out_dir, std::ostream& out) {
    const TrainedModel model = TrainedModel::from_json(read_file(model_path));
    const auto parsed = parse_csv(read_file(data_path));
    auto [train, test] = split_chronological(parsed.series, train_fraction);
    (void)train;
    const EvalOutput eval = evaluate_on_test(model, test);

    if (format == "json")
        out << eval.report.to_json() << "\n";
    else
        out << "Directional Accuracy | Processing Time | MRSE\n"
            << eval.report.to_table_row(parsed.series.ticker.empty()
                                            ? "series"
                                            : parsed.series.ticker)
            << "\n";
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        write_file(fs::path(out_dir) / "predictions.csv",
                   predictions_csv(test, model, eval));
        write_file(fs::path(out_dir) / "report.json", eval.report.to_json());
    }
    return kExitOk;
}

int cmd_compare(const std::vector<std::string>& data_paths, PipelineOptions base_opt,
                TrainConfig cfg, const std::string& out_dir, const std::string& format,
                std::ostream& out) {
    std::vector<ComparisonRow> rows;
    for (std::size_t i = 0; i < data_paths.size(); ++i) {
        PipelineOptions opt = base_opt;
        opt.data_path = data_paths[i];
        opt.ticker = fs::path(data_paths[i]).stem().string();
        TrainConfig run_cfg = cfg;
        run_cfg.seed = cfg.seed + i; // independent per-ticker streams

        const PreparedData data = prepare(opt, run_cfg);
        ComparisonRow row;
        row.ticker = opt.ticker;

        auto timed_train = [&](ModelKind kind, EvalReport& report,
                               std::vector<double>& pred) {
            TrainConfig c = run_cfg;
            c.model_kind = kind;
            const auto start = std::chrono::steady_clock::now();
            auto [model, history] = kind == ModelKind::GanProposed
                                        ? train_gan(data.dataset, c, data.norm)
                                        : train_baseline(data.dataset, c, data.norm);
            const double train_time = std::chrono::duration<double>(
                                          std::chrono::steady_clock::now() - start)
                                          .count();
            EvalOutput eval = evaluate_on_test(model, data.test);
            report = eval.report;
            report.processing_time_s = train_time; // table tracks training time
            pred = eval.predicted;
            row.actual = eval.actual;
        };
        timed_train(ModelKind::LstmBaseline, row.baseline, row.baseline_pred);
        timed_train(ModelKind::GanProposed, row.proposed, row.proposed_pred);
        rows.push_back(std::move(row));
    }

    const std::string text = comparison_text(rows);
    const std::string json = comparison_json(rows);
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        write_file(fs::path(out_dir) / "comparison.txt", text);
        write_file(fs::path(out_dir) / "comparison.json", json);
    }
    out << (format == "json" ? json : text);
    return kExitOk;
}

int cmd_plotdata(const std::string& in_dir, const std::string& out_dir,
                 std::ostream& out) {
    const fs::path src = fs::path(in_dir) / "comparison.json";
    if (!fs::exists(src)) throw Error("missing " + src.string());
    const auto j = nlohmann::json::parse(read_file(src));
    fs::create_directories(out_dir);

    auto bar_csv = [&](const std::string& name, auto field) {
        std::ostringstream csv;
        csv << "ticker,baseline,proposed\n";
        csv.precision(12);
        for (const auto& row : j.at("rows"))
            csv << row.at("ticker").get<std::string>() << ','
                << field(row.at("baseline")) << ',' << field(row.at("proposed")) << '\n';
        write_file(fs::path(out_dir) / name, csv.str());
    };
    bar_csv("da.csv", [](const nlohmann::json& r) {
        return r.at("directional_accuracy_pct").get<double>();
    });
    bar_csv("rmse.csv",
            [](const nlohmann::json& r) { return r.at("rmse").get<double>(); });
    bar_csv("time.csv", [](const nlohmann::json& r) {
        return r.at("processing_time_s").get<double>();
    });

    for (const auto& row : j.at("rows")) {
        std::ostringstream csv;
        csv << "index,actual,baseline,proposed\n";
        csv.precision(12);
        const auto actual = row.at("actual").get<std::vector<double>>();
        const auto base = row.at("baseline_pred").get<std::vector<double>>();
        const auto prop = row.at("proposed_pred").get<std::vector<double>>();
        for (std::size_t i = 0; i < actual.size(); ++i)
            csv << i << ',' << actual[i] << ',' << base[i] << ',' << prop[i] << '\n';
        write_file(fs::path(out_dir) /
                       ("curve_" + row.at("ticker").get<std::string>() + ".csv"),
                   csv.str());
    }
    out << "wrote da.csv, rmse.csv, time.csv and " << j.at("rows").size()
        << " curve files to " << out_dir << "\n";
    return kExitOk;
}

} // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"PSR + GAN stock index forecaster"};
    app.require_subcommand(1);

    PipelineOptions opt;
    TrainConfig cfg;
    std::string config_file, out_dir, model_kind = "gan", format = "text";
    std::string model_path, in_dir;
    std::vector<std::string> data_paths;
    std::string ticker, start_date = "2013-01-01", end_date = "2018-12-31", endpoint;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", cfg.seed);
        sub->add_option("--epochs", cfg.epochs);
        sub->add_option("--m,--window", cfg.m);
        sub->add_option("--tau", cfg.tau);
        sub->add_option("--hidden", cfg.hidden_size);
        sub->add_option("--batch", cfg.batch_size);
        sub->add_option("--rho-g", cfg.rho_g);
        sub->add_option("--rho-d", cfg.rho_d);
        sub->add_option("--lambda-adv", cfg.weights.lambda_adv);
        sub->add_option("--lambda-p", cfg.weights.lambda_p);
        sub->add_option("--lambda-dpl", cfg.weights.lambda_dpl);
        sub->add_option("--p", cfg.weights.p);
        sub->add_option("--clip-norm", cfg.clip_norm);
        sub->add_flag("--no-peephole{false}", cfg.peephole);
        sub->add_option("--train-fraction", opt.train_fraction);
        sub->add_option("--wavelet-levels", opt.wavelet_levels);
        sub->add_option("--threshold-rule", opt.threshold_rule)
            ->check(CLI::IsMember({"none", "universal", "fixed"}));
        sub->add_option("--threshold", opt.fixed_threshold);
        sub->add_option("--config", config_file);
    };

    auto* train = app.add_subcommand("train", "train one model");
    train->add_option("--data", opt.data_path)->required();
    train->add_option("--model", model_kind)->check(CLI::IsMember({"gan", "lstm"}));
    train->add_option("--out", out_dir)->required();
    train->add_option("--ticker", opt.ticker);
    add_common(train);

    auto* evaluate = app.add_subcommand("evaluate", "evaluate a trained model");
    evaluate->add_option("--model", model_path)->required();
    evaluate->add_option("--data", opt.data_path)->required();
    evaluate->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));
    evaluate->add_option("--out", out_dir);
    evaluate->add_option("--train-fraction", opt.train_fraction);

    auto* compare = app.add_subcommand("compare", "train and compare both models");
    compare->add_option("--data", data_paths)->required();
    compare->add_option("--out", out_dir)->required();
    compare->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));
    add_common(compare);

    auto* plotdata = app.add_subcommand("plotdata", "emit plot-ready CSVs");
    plotdata->add_option("--in", in_dir)->required();
    plotdata->add_option("--out", out_dir)->required();

    auto* fetch = app.add_subcommand("fetch", "fetch raw CSV from a quote endpoint");
    fetch->add_option("--ticker", ticker)->required();
    fetch->add_option("--start", start_date);
    fetch->add_option("--end", end_date);
    fetch->add_option("--endpoint", endpoint)->required();

    std::vector<const char*> argv;
    argv.push_back("psrgan");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kExitOk;
        }
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        if (!config_file.empty()) {
            // file values first, then re-parse flags so they take precedence
            apply_config_file(cfg, opt, config_file);
            app.clear();
            app.parse(static_cast<int>(argv.size()), argv.data());
        }
        if (train->parsed()) {
            cfg.model_kind = model_kind_from_string(model_kind);
            cfg.validate();
            return cmd_train(opt, cfg, out_dir, out);
        }
        if (evaluate->parsed())
            return cmd_evaluate(model_path, opt.data_path, opt.train_fraction, format,
                                out_dir, out);
        if (compare->parsed()) {
            cfg.validate();
            return cmd_compare(data_paths, opt, cfg, out_dir, format, out);
        }
        if (plotdata->parsed()) return cmd_plotdata(in_dir, out_dir, out);
        if (fetch->parsed()) {
            out << fetch_remote(ticker, Date::parse(start_date), Date::parse(end_date),
                                endpoint);
            return kExitOk;
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const InvalidParams& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const DivergenceDetected& e) {
        err << "divergence: " << e.what() << "\n";
        return kExitDivergence;
    } catch (const Error& e) {
        err << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        err << "data error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitConfig;
}

} // namespace psrgan
