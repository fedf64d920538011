#include "twofold/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "twofold/errors.hpp"
#include "twofold/tree.hpp"

namespace twofold {

namespace {

std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::optional<double> parse_double(const std::string& text) {
    double v = 0.0;
    const char* end = text.data() + text.size();
    const auto [p, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || p != end || !std::isfinite(v)) return std::nullopt;
    return v;
}

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

DemandCsv parse_demand_csv(std::istream& in) {
    DemandCsv out;
    std::string line;
    if (!std::getline(in, line)) throw InvalidInput("demand CSV is empty (expected header '" + std::string(kDemandHeader) + "')");
    strip_cr(line);
    if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (line != kDemandHeader) {
        throw InvalidInput("bad header '" + line + "' (expected '" + std::string(kDemandHeader) + "')");
    }
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        strip_cr(line);
        if (line.empty()) continue;
        const auto fields = split(line, ',');
        if (fields.size() != 4) {
            out.errors.push_back({lineno, "expected 4 fields, found " + std::to_string(fields.size())});
            continue;
        }
        DemandRecord r;
        try {
            r.date = parse_date(fields[0]);
        } catch (const InvalidInput& e) {
            out.errors.push_back({lineno, e.what()});
            continue;
        }
        if (fields[1].empty() || fields[2].empty()) {
            out.errors.push_back({lineno, "empty material or client"});
            continue;
        }
        r.key = {fields[1], fields[2]};
        const auto q = parse_double(fields[3]);
        if (!q) {
            out.errors.push_back({lineno, "unparseable quantity '" + fields[3] + "'"});
            continue;
        }
        if (*q < 0.0) {
            out.errors.push_back({lineno, "negative quantity " + fields[3]});
            continue;
        }
        r.quantity = *q;
        out.records.push_back(std::move(r));
    }
    return out;
}

std::vector<DemandRecord> load_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open '" + path + "'");
    DemandCsv csv = parse_demand_csv(in);
    if (!csv.errors.empty()) {
        std::string msg = path + ": " + std::to_string(csv.errors.size()) + " invalid row(s)";
        for (std::size_t i = 0; i < csv.errors.size() && i < 10; ++i) {
            msg += "; line " + std::to_string(csv.errors[i].line) + ": " + csv.errors[i].message;
        }
        throw InvalidInput(msg);
    }
    return std::move(csv.records);
}

std::string format_number(double v) {
    char buf[64];
    const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc()) throw InvalidInput("cannot format number");
    return std::string(buf, p);
}

void write_csv(std::ostream& out, std::span<const DemandRecord> records) {
    out << kDemandHeader << '\n';
    for (const auto& r : records) {
        out << format_date(r.date) << ',' << r.key.material << ',' << r.key.client << ',' << format_number(r.quantity)
            << '\n';
    }
}

void write_csv(const std::string& path, std::span<const DemandRecord> records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot write '" + path + "'");
    write_csv(out, records);
}

DateRange span_of(std::span<const DemandRecord> records) {
    if (records.empty()) throw InvalidInput("no demand records");
    DateRange r{records.front().date, records.front().date};
    for (const auto& rec : records) {
        r.first = std::min(r.first, rec.date);
        r.last = std::max(r.last, rec.date);
    }
    return r;
}

void write_labels_csv(std::ostream& out, std::span<const DemandSeries> series) {
    out << "date,material,client,occurrence\n";
    for (const auto& s : series) {
        const auto v = s.values();
        for (std::size_t i = 0; i < v.size(); ++i) {
            const Date d = s.date_at(i);
            if (!is_weekday(d)) continue;
            out << format_date(d) << ',' << s.key().material << ',' << s.key().client << ',' << (v[i] > 0.0 ? 1 : 0)
                << '\n';
        }
    }
}

void write_forecast_csv(std::ostream& out, std::span<const DemandSeries> series,
                        std::span<const std::vector<ForecastPoint>> predictions) {
    if (series.size() != predictions.size()) throw InvalidInput("series and predictions differ in count");
    out << "date,key,score,flag,size,combined\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        const std::string key = to_string(series[i].key());
        for (const auto& p : predictions[i]) {
            out << format_date(p.date) << ',' << key << ',' << format_number(p.occurrence_score) << ','
                << (p.occurrence_flag ? 1 : 0) << ',' << format_number(p.size_estimate) << ','
                << format_number(p.combined) << '\n';
        }
    }
}

// ---------------------------------------------------------------------------
// Configuration

const std::vector<std::string>& Config::known_keys() {
    static const std::vector<std::string> keys{
        "seed",
        "horizons",
        "alpha",
        "beta",
        "threshold",
        "smoothing_grid",
        "test_days",
        "n_folds",
        "inner_days",
        "experiments",
        "results_ledger",
        "taxonomy.adi_cutoff",
        "taxonomy.cv2_cutoff",
        "boost.rounds",
        "boost.max_depth",
        "boost.learning_rate",
        "boost.focal_gamma",
        "boost.lambda",
        "boost.min_leaf_weight",
        "boost.max_bins",
        "boost.row_subsample",
        "forest.n_trees",
        "forest.max_depth",
        "forest.min_leaf_weight",
        "forest.bootstrap_fraction",
        "forest.colsample",
        "mlp.hidden",
        "mlp.epochs",
        "mlp.learning_rate",
        "mlp.window",
        "synthetic.n_series",
        "synthetic.start",
        "synthetic.span_days",
        "synthetic.lumpy_fraction",
        "synthetic.adi_median",
        "synthetic.adi_sigma",
        "synthetic.lumpy_adi_median",
        "synthetic.lumpy_adi_sigma",
        "synthetic.adi_min",
        "synthetic.adi_max",
        "synthetic.regularity",
        "synthetic.adi_tolerance",
    };
    return keys;
}

Config Config::parse(std::istream& in, const std::string& source) {
    Config c;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(source + ":" + std::to_string(lineno) + ": expected 'key = value'");
        }
        const std::string key = trim(std::string_view(t).substr(0, eq));
        if (key.empty()) throw ConfigError(source + ":" + std::to_string(lineno) + ": empty key");
        c.values_[key] = trim(std::string_view(t).substr(eq + 1));
    }
    return c;
}

Config Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    return parse(in, path);
}

void Config::apply_environment() {
    for (const auto& key : known_keys()) {
        std::string name = "TWOFOLD_";
        for (char c : key) name += c == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        if (const char* v = std::getenv(name.c_str())) values_[key] = trim(v);
    }
}

std::optional<std::string> Config::get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

namespace {

class Reader {
public:
    explicit Reader(const Config& c) : c_(c) {}

    void real(const std::string& key, double& target, double lo, double hi, bool open_lo = false) const {
        const auto v = c_.get(key);
        if (!v) return;
        const auto d = parse_double(*v);
        if (!d) throw ConfigError(key + ": '" + *v + "' is not a number");
        if (*d > hi || *d < lo || (open_lo && *d == lo)) {
            throw ConfigError(key + " = " + *v + " is outside " + (open_lo ? "(" : "[") + format_number(lo) + ", " +
                              format_number(hi) + "]");
        }
        target = *d;
    }

    template <class Int>
    void integer(const std::string& key, Int& target, long long lo, long long hi) const {
        const auto v = c_.get(key);
        if (!v) return;
        long long x = 0;
        const char* end = v->data() + v->size();
        const auto [p, ec] = std::from_chars(v->data(), end, x);
        if (ec != std::errc() || p != end) throw ConfigError(key + ": '" + *v + "' is not an integer");
        if (x < lo || x > hi) {
            throw ConfigError(key + " = " + *v + " is outside [" + std::to_string(lo) + ", " + std::to_string(hi) +
                              "]");
        }
        target = static_cast<Int>(x);
    }

    std::optional<std::vector<std::string>> list(const std::string& key) const {
        const auto v = c_.get(key);
        if (!v) return std::nullopt;
        std::vector<std::string> items;
        for (const auto& part : split(*v, ',')) {
            const std::string t = trim(part);
            if (!t.empty()) items.push_back(t);
        }
        return items;
    }

private:
    const Config& c_;
};

}  // namespace

RunConfig load_run_config(const Config& config) {
    const auto& known = Config::known_keys();
    for (const auto& [key, value] : config.values()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) throw ConfigError("unknown config key '" + key + "'");
    }
    RunConfig rc;
    const Reader r(config);
    auto& ev = rc.evaluation;
    auto& base = ev.base;

    std::uint64_t seed = 42;
    r.integer("seed", seed, 0, std::numeric_limits<long long>::max());
    base.seed = seed;
    base.boost.seed = seed;
    base.forest.seed = seed;
    base.mlp.seed = seed;
    rc.synthetic.seed = seed;

    if (const auto hs = r.list("horizons")) {
        ev.horizons.clear();
        for (const auto& h : *hs) {
            Config one;
            one.set("h", h);
            int v = 0;
            Reader(one).integer("h", v, 1, 366);
            ev.horizons.push_back(v);
        }
        if (ev.horizons.empty()) throw ConfigError("horizons must list at least one horizon");
    }
    r.real("alpha", base.smoothing.alpha, 0.0, 1.0, true);
    r.real("beta", base.smoothing.beta, 0.0, 1.0, true);
    r.real("threshold", base.threshold, 0.0, 1.0, true);
    if (base.threshold >= 1.0) throw ConfigError("threshold must be below 1");
    if (const auto grid = r.list("smoothing_grid")) {
        ev.smoothing_grid.clear();
        for (const auto& g : *grid) {
            const auto d = parse_double(g);
            if (!d || *d <= 0.0 || *d > 1.0) throw ConfigError("smoothing_grid: '" + g + "' is not in (0, 1]");
            ev.smoothing_grid.push_back(*d);
        }
    }
    r.integer("test_days", ev.test_days, 1, 100000);
    r.integer("n_folds", ev.n_folds, 1, 1000);
    if (ev.n_folds > ev.test_days) throw ConfigError("n_folds exceeds test_days");
    r.integer("inner_days", ev.inner_days, 1, 100000);
    if (const auto ids = r.list("experiments")) {
        for (const auto& id : *ids) (void)ExperimentSpec::parse(id);
        rc.experiments = *ids;
    }
    if (const auto v = config.get("results_ledger")) rc.results_ledger = *v;

    r.real("taxonomy.adi_cutoff", base.taxonomy.adi_cutoff, 1.0, 1e9);
    r.real("taxonomy.cv2_cutoff", base.taxonomy.cv2_cutoff, 0.0, 1e9);

    r.integer("boost.rounds", base.boost.rounds, 1, 100000);
    r.integer("boost.max_depth", base.boost.max_depth, 1, 64);
    r.real("boost.learning_rate", base.boost.learning_rate, 0.0, 1.0, true);
    r.real("boost.focal_gamma", base.boost.focal_gamma, 0.0, 10.0);
    r.real("boost.lambda", base.boost.lambda, 0.0, 1e9);
    r.real("boost.min_leaf_weight", base.boost.min_leaf_weight, 0.0, 1e12);
    r.integer("boost.max_bins", base.boost.max_bins, 2, 65535);
    r.real("boost.row_subsample", base.boost.row_subsample, 0.0, 1.0, true);

    r.integer("forest.n_trees", base.forest.n_trees, 1, 100000);
    r.integer("forest.max_depth", base.forest.max_depth, 0, 64);
    r.real("forest.min_leaf_weight", base.forest.min_leaf_weight, 0.0, 1e12);
    r.real("forest.bootstrap_fraction", base.forest.bootstrap_fraction, 0.0, 1.0, true);
    r.real("forest.colsample", base.forest.colsample, 0.0, 1.0, true);

    r.integer("mlp.hidden", base.mlp.hidden, 1, 1000);
    r.integer("mlp.epochs", base.mlp.epochs, 1, 1000000);
    r.real("mlp.learning_rate", base.mlp.learning_rate, 0.0, 10.0, true);
    r.integer("mlp.window", base.mlp.window, 1, 100000);

    auto& syn = rc.synthetic;
    r.integer("synthetic.n_series", syn.n_series, 1, 1000000);
    if (const auto v = config.get("synthetic.start")) {
        try {
            syn.start = parse_date(*v);
        } catch (const InvalidInput& e) {
            throw ConfigError(std::string("synthetic.start: ") + e.what());
        }
    }
    r.integer("synthetic.span_days", syn.span_days, 14, 100000);
    r.real("synthetic.lumpy_fraction", syn.lumpy_fraction, 0.0, 1.0);
    r.real("synthetic.adi_median", syn.adi_median, 1.0, 1e6);
    r.real("synthetic.adi_sigma", syn.adi_sigma, 0.0, 10.0);
    r.real("synthetic.lumpy_adi_median", syn.lumpy_adi_median, 1.0, 1e6);
    r.real("synthetic.lumpy_adi_sigma", syn.lumpy_adi_sigma, 0.0, 10.0);
    r.real("synthetic.adi_min", syn.adi_min, 1.0, 1e6);
    r.real("synthetic.adi_max", syn.adi_max, 1.0, 1e6);
    r.real("synthetic.regularity", syn.regularity, 0.0, 1.0);
    r.real("synthetic.adi_tolerance", syn.adi_tolerance, 0.0, 1.0, true);
    try {
        syn.validate();
        base.validate();
    } catch (const InvalidInput& e) {
        throw ConfigError(e.what());
    }
    return rc;
}

std::string config_digest(const RunConfig& c) {
    std::ostringstream s;
    const auto& b = c.evaluation.base;
    s << b.seed << '|' << b.threshold << '|' << b.smoothing.alpha << '|' << b.smoothing.beta << '|'
      << b.boost.rounds << '|' << b.boost.max_depth << '|' << b.boost.learning_rate << '|' << b.boost.focal_gamma
      << '|' << b.boost.lambda << '|' << b.boost.min_leaf_weight << '|' << b.forest.n_trees << '|'
      << b.forest.max_depth << '|' << b.mlp.hidden << '|' << b.mlp.epochs << '|' << c.evaluation.test_days << '|'
      << c.evaluation.n_folds << '|' << c.evaluation.inner_days;
    for (int h : c.evaluation.horizons) s << "|h" << h;
    for (double g : c.evaluation.smoothing_grid) s << "|g" << g;
    for (const auto& e : c.experiments) s << "|e" << e;
    std::uint64_t h = 1469598103934665603ULL;
    for (char ch : s.str()) {
        h ^= static_cast<unsigned char>(ch);
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// ---------------------------------------------------------------------------
// Model files

namespace {

void write_header(std::ostream& out, const char* kind, const FeatureSchema& schema) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(schema_hash(schema)));
    out << "twofold-model " << kModelFormatVersion << "\nkind " << kind << "\nschema " << buf << '\n';
}

void read_header(std::istream& in, const char* kind, const FeatureSchema& schema) {
    std::string tag, value;
    int version = 0;
    if (!(in >> tag >> version) || tag != "twofold-model") throw InvalidInput("not a model file");
    if (version != kModelFormatVersion) {
        throw InvalidInput("unsupported model format version " + std::to_string(version));
    }
    if (!(in >> tag >> value) || tag != "kind") throw InvalidInput("model file lacks a kind line");
    if (value != kind) throw InvalidInput("model file holds a " + value + ", expected " + kind);
    if (!(in >> tag >> value) || tag != "schema") throw InvalidInput("model file lacks a schema line");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(schema_hash(schema)));
    if (value != buf) throw SchemaMismatch("model schema hash " + value + " does not match expected " + buf);
}

}  // namespace

void save_model(std::ostream& out, const BoostedClassifier& model) {
    write_header(out, "boosted-classifier", model.schema());
    model.save(out);
}

void save_model(std::ostream& out, const TreeEnsembleRegressor& model) {
    write_header(out, "tree-ensemble-regressor", model.schema());
    model.save(out);
}

BoostedClassifier load_classifier(std::istream& in, const FeatureSchema& schema) {
    read_header(in, "boosted-classifier", schema);
    return BoostedClassifier::load(in, schema);
}

TreeEnsembleRegressor load_regressor(std::istream& in, const FeatureSchema& schema) {
    read_header(in, "tree-ensemble-regressor", schema);
    return TreeEnsembleRegressor::load(in, schema);
}

}  // namespace twofold
