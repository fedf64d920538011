// Python bindings for the forecasters, metrics, taxonomy and evaluation harness.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "twofold/adida.hpp"
#include "twofold/errors.hpp"
#include "twofold/evaluation.hpp"
#include "twofold/forecasters.hpp"
#include "twofold/io.hpp"
#include "twofold/metrics.hpp"
#include "twofold/synthetic.hpp"
#include "twofold/taxonomy.hpp"

namespace py = pybind11;
using namespace twofold;

namespace {

DemandSeries single(const std::vector<double>& values, const std::string& start) {
    return DemandSeries({"", ""}, parse_date(start), values);
}

py::dict report_dict(const MetricReport& r) {
    py::dict d;
    d["id"] = r.id;
    d["horizon"] = r.horizon;
    d["auc_roc"] = r.auc_roc;
    d["auc_implied"] = r.auc_implied;
    d["auc_lumpy"] = r.auc_lumpy;
    d["auc_intermittent"] = r.auc_intermittent;
    d["mase_I"] = r.mase_I;
    d["mase_II"] = r.mase_II;
    d["spec_median"] = r.spec_median;
    d["points"] = r.points;
    d["positives"] = r.positives;
    d["flagged"] = r.flagged;
    d["error"] = r.error;
    return d;
}

}  // namespace

PYBIND11_MODULE(twofold_py, m) {
    m.doc() = "Two-fold intermittent demand forecasting";

    // Every library error surfaces as TwofoldError, a ValueError subclass.
    py::register_exception<Error>(m, "TwofoldError", PyExc_ValueError);

    m.def("croston", [](const std::vector<double>& v, double alpha) { return croston(v, {alpha}); },
          py::arg("values"), py::arg("alpha") = 0.1);
    m.def("sba", [](const std::vector<double>& v, double alpha) { return sba(v, {alpha}); }, py::arg("values"),
          py::arg("alpha") = 0.1);
    m.def("tsb", [](const std::vector<double>& v, double alpha, double beta) { return tsb(v, {alpha, beta}); },
          py::arg("values"), py::arg("alpha") = 0.1, py::arg("beta") = 0.1);
    m.def("ses", [](const std::vector<double>& v, double alpha) { return ses(v, alpha); }, py::arg("values"),
          py::arg("alpha") = 0.1);
    m.def("disaggregate", &disaggregate, py::arg("aggregate"), py::arg("bucket_length"));

    m.def("auc_roc", [](const std::vector<double>& s, const std::vector<std::uint8_t>& y) { return auc_roc(s, y); },
          py::arg("scores"), py::arg("labels"));
    m.def("naive_scale", [](const std::vector<double>& v) { return naive_scale(v); }, py::arg("training"));
    m.def("mase",
          [](const std::vector<double>& f, const std::vector<double>& y, double scale) { return mase(f, y, scale); },
          py::arg("forecasts"), py::arg("actuals"), py::arg("scale"));
    m.def("spec",
          [](const std::vector<double>& f, const std::vector<double>& y, double a1, double a2) {
              return spec(f, y, a1, a2);
          },
          py::arg("forecasts"), py::arg("actuals"), py::arg("alpha1") = 0.5, py::arg("alpha2") = 0.5);

    m.def("classify",
          [](const std::vector<double>& values, const std::string& start) {
              const PatternProfile p = classify(single(values, start));
              py::dict d;
              d["adi"] = p.adi;
              d["cv2"] = p.cv2;
              d["quadrant"] = to_string(p.quadrant);
              d["schema2"] = to_string(p.schema2);
              return d;
          },
          py::arg("values"), py::arg("start") = "2024-01-01");

    m.def("generate",
          [](std::size_t n_series, int span_days, std::uint64_t seed) {
              SyntheticSpec spec;
              spec.n_series = n_series;
              spec.span_days = span_days;
              spec.seed = seed;
              const auto data = generate_synthetic(spec);
              py::list out;
              for (const auto& s : data.series) {
                  py::dict d;
                  d["material"] = s.key().material;
                  d["client"] = s.key().client;
                  d["start"] = format_date(s.start());
                  d["values"] = std::vector<double>(s.values().begin(), s.values().end());
                  out.append(d);
              }
              return out;
          },
          py::arg("n_series") = 516, py::arg("span_days") = 1095, py::arg("seed") = 42);

    m.def("evaluate",
          [](const std::string& csv, const std::vector<std::string>& experiments, const std::string& config_path) {
              Config config = config_path.empty() ? Config{} : Config::load(config_path);
              const RunConfig run = load_run_config(config);
              const auto records = load_csv(csv);
              const auto series = build_series(records, span_of(records));
              std::vector<ExperimentSpec> specs;
              for (const auto& id : experiments.empty() ? run.experiments : experiments) {
                  specs.push_back(ExperimentSpec::parse(id));
              }
              const EvaluationReport report = [&] {
                  py::gil_scoped_release release;
                  return run_matrix(specs, series, run.evaluation);
              }();
              py::list rows;
              for (const auto& r : report.rows) rows.append(report_dict(r));
              return rows;
          },
          py::arg("csv"), py::arg("experiments") = std::vector<std::string>{}, py::arg("config") = "");
}
