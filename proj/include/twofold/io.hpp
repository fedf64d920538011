#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "twofold/boosting.hpp"
#include "twofold/demand.hpp"
#include "twofold/evaluation.hpp"
#include "twofold/forest.hpp"
#include "twofold/synthetic.hpp"

namespace twofold {

inline constexpr const char* kDemandHeader = "date,material,client,quantity";

struct CsvLineError {
    std::size_t line = 0;  ///< 1-based, header is line 1
    std::string message;
};

struct DemandCsv {
    std::vector<DemandRecord> records;
    std::vector<CsvLineError> errors;
};

/// Parses every row, collecting per-line errors. A wrong header is fatal (InvalidInput).
DemandCsv parse_demand_csv(std::istream& in);

/// Throws InvalidInput on a missing file, bad header, or any invalid row (line numbers in the message).
std::vector<DemandRecord> load_csv(const std::string& path);

/// Shortest decimal text that parses back to the same double.
std::string format_number(double v);

void write_csv(std::ostream& out, std::span<const DemandRecord> records);
void write_csv(const std::string& path, std::span<const DemandRecord> records);

/// Smallest range covering every record. Throws InvalidInput when empty.
DateRange span_of(std::span<const DemandRecord> records);

/// Oracle occurrence labels: one row per (series, weekday).
void write_labels_csv(std::ostream& out, std::span<const DemandSeries> series);

/// Columns: date,key,score,flag,size,combined (key = material/client).
void write_forecast_csv(std::ostream& out, std::span<const DemandSeries> series,
                        std::span<const std::vector<ForecastPoint>> predictions);

/**
 * Flat `key = value` configuration. `#` starts a comment. Environment
 * variables TWOFOLD_<KEY> (uppercase, dots as underscores) override file
 * values for known keys.
 */
class Config {
public:
    static Config parse(std::istream& in, const std::string& source = "<config>");
    static Config load(const std::string& path);

    /// Overrides known keys from the process environment.
    void apply_environment();
    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    bool has(const std::string& key) const { return values_.count(key) != 0; }
    std::optional<std::string> get(const std::string& key) const;
    const std::map<std::string, std::string>& values() const { return values_; }

    /// Every key a run config understands.
    static const std::vector<std::string>& known_keys();

private:
    std::map<std::string, std::string> values_;
};

struct RunConfig {
    EvaluationOptions evaluation;
    SyntheticSpec synthetic;
    std::vector<std::string> experiments = default_matrix_ids();
    std::string results_ledger = "results_ledger.csv";
};

/// Range-checks every value; throws ConfigError naming the key. Unknown keys are errors.
RunConfig load_run_config(const Config& config);

/// Stable hex digest of a run config, used to tag result ledger rows.
std::string config_digest(const RunConfig& config);

inline constexpr int kModelFormatVersion = 1;

/// Model file: `twofold-model <version>`, `kind <name>`, `schema <hash>`, then the model body.
void save_model(std::ostream& out, const BoostedClassifier& model);
void save_model(std::ostream& out, const TreeEnsembleRegressor& model);
/// Throws SchemaMismatch when the stored hash differs from `schema`, InvalidInput on a bad header or version.
BoostedClassifier load_classifier(std::istream& in, const FeatureSchema& schema);
TreeEnsembleRegressor load_regressor(std::istream& in, const FeatureSchema& schema);

}  // namespace twofold
