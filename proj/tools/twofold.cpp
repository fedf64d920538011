// Command-line surface: generate, classify, forecast, evaluate.
// Failures print one JSON object on stderr and exit nonzero.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "twofold/errors.hpp"
#include "twofold/evaluation.hpp"
#include "twofold/io.hpp"
#include "twofold/synthetic.hpp"
#include "twofold/taxonomy.hpp"

namespace fs = std::filesystem;
using namespace twofold;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

RunConfig run_config(const std::string& path) {
    Config config = path.empty() ? Config{} : Config::load(path);
    config.apply_environment();
    return load_run_config(config);
}

std::vector<DemandSeries> load_series(const std::string& path) {
    const auto records = load_csv(path);
    return build_series(records, span_of(records));
}

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot write " + path.string());
    return out;
}

void write_text(const fs::path& path, const std::string& text) {
    auto out = open_out(path);
    out << text;
}

fs::path labels_path_for(const fs::path& out) {
    fs::path p = out;
    p.replace_filename(out.stem().string() + "_labels" + out.extension().string());
    return p;
}

void cmd_generate(const std::string& spec_path, const std::string& out_path, const std::string& labels_path) {
    const RunConfig cfg = run_config(spec_path);
    const SyntheticData data = generate_synthetic(cfg.synthetic);
    const auto records = to_records(data.series);
    {
        auto out = open_out(out_path);
        write_csv(out, records);
    }
    auto labels = open_out(labels_path.empty() ? labels_path_for(out_path) : fs::path(labels_path));
    write_labels_csv(labels, data.series);
}

void cmd_classify(const std::string& in, const std::string& out_path, const std::string& config_path) {
    const RunConfig cfg = run_config(config_path);
    const auto& opts = cfg.evaluation.base.taxonomy;
    const auto series = load_series(in);
    auto out = open_out(out_path);
    out << "material,client,adi,cv2,quadrant,schema2\n";
    for (const auto& s : series) {
        out << s.key().material << ',' << s.key().client << ',';
        try {
            const PatternProfile p = classify(s, opts);
            out << format_number(p.adi) << ',' << format_number(p.cv2) << ',' << to_string(p.quadrant) << ','
                << to_string(p.schema2) << '\n';
        } catch (const UndefinedPattern&) {
            out << "NA,NA,undefined,undefined\n";
        }
    }
}

void cmd_forecast(const std::string& in, const std::string& experiment, int horizon, const std::string& out_path,
                  const std::string& config_path) {
    if (horizon != 14 && horizon != 56) throw ConfigError("horizon must be 14 or 56");
    RunConfig cfg = run_config(config_path);
    const ExperimentSpec spec = ExperimentSpec::parse(experiment);
    const auto series = load_series(in);
    cfg.evaluation.horizons = {horizon};
    Evaluator ev(series, cfg.evaluation);
    const auto predictions = ev.predictions(spec, horizon);
    auto out = open_out(out_path);
    write_forecast_csv(out, series, predictions);
}

void cmd_evaluate(const std::string& in, const std::string& matrix_path, const std::string& out_dir) {
    const RunConfig cfg = run_config(matrix_path);
    std::vector<ExperimentSpec> specs;
    for (const auto& id : cfg.experiments) specs.push_back(ExperimentSpec::parse(id));
    const auto series = load_series(in);
    const EvaluationReport report = run_matrix(specs, series, cfg.evaluation);

    const fs::path dir(out_dir);
    fs::create_directories(dir);
    const std::string tag = config_digest(cfg);
    write_text(dir / "table4.csv", table4_csv(report));
    write_text(dir / "table5.csv", table5_csv(report));
    write_text(dir / "results.csv", results_csv_header() + results_csv(report, tag));
    write_text(dir / "report.txt", render_text(report));

    // The ledger accumulates across runs; relative paths resolve inside the output directory.
    fs::path ledger(cfg.results_ledger);
    if (ledger.is_relative()) ledger = dir / ledger;
    const bool fresh = !fs::exists(ledger);
    std::ofstream out(ledger, std::ios::binary | std::ios::app);
    if (!out) throw InvalidInput("cannot append to " + ledger.string());
    if (fresh) out << results_csv_header();
    out << results_csv(report, tag);
    std::cout << render_text(report);
}

int report_error(const std::string& kind, const std::string& message, int code) {
    const nlohmann::json record{{"error", kind}, {"message", message}};
    std::cerr << record.dump() << '\n';
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-fold intermittent demand forecasting"};
    app.require_subcommand(1);

    std::string spec_path, in, out, labels, experiment, matrix, config_path;
    int horizon = 14;

    auto* generate = app.add_subcommand("generate", "Write a synthetic demand CSV and its oracle-label CSV");
    generate->add_option("--spec", spec_path, "Config file with synthetic.* keys")->required();
    generate->add_option("--out", out, "Demand CSV path")->required();
    generate->add_option("--labels", labels, "Label CSV path (default: <out>_labels.csv)");

    auto* classify_cmd = app.add_subcommand("classify", "Per-series ADI, CV2, quadrant and schema");
    classify_cmd->add_option("--in", in, "Demand CSV")->required();
    classify_cmd->add_option("--out", out, "Output CSV")->required();
    classify_cmd->add_option("--config", config_path, "Config file (taxonomy.* keys)");

    auto* forecast_cmd = app.add_subcommand("forecast", "Out-of-sample forecasts over the test window");
    forecast_cmd->add_option("--in", in, "Demand CSV")->required();
    forecast_cmd->add_option("--experiment", experiment, "Experiment id, e.g. C2R1-SES or CROSTON")->required();
    forecast_cmd->add_option("--horizon", horizon, "14 or 56")->required();
    forecast_cmd->add_option("--out", out, "Output CSV")->required();
    forecast_cmd->add_option("--config", config_path, "Config file");

    auto* evaluate_cmd = app.add_subcommand("evaluate", "Run the experiment matrix");
    evaluate_cmd->add_option("--in", in, "Demand CSV")->required();
    evaluate_cmd->add_option("--matrix", matrix, "Config file listing experiments and settings")->required();
    evaluate_cmd->add_option("--out", out, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report_error("usage", e.what(), kExitUsage);
    }

    try {
        if (*generate) cmd_generate(spec_path, out, labels);
        else if (*classify_cmd) cmd_classify(in, out, config_path);
        else if (*forecast_cmd) cmd_forecast(in, experiment, horizon, out, config_path);
        else if (*evaluate_cmd) cmd_evaluate(in, matrix, out);
    } catch (const ConfigError& e) {
        return report_error(e.kind(), e.what(), kExitUsage);
    } catch (const Error& e) {
        return report_error(e.kind(), e.what(), kExitFailure);
    } catch (const std::exception& e) {
        return report_error("internal", e.what(), kExitFailure);
    }
    return 0;
}
