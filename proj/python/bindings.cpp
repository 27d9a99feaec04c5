// Python bindings for the growthcast core: curve evaluation, data
// loading, sampling, forecasting, and model comparison.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "growthcast/cli.hpp"
#include "growthcast/curve.hpp"
#include "growthcast/data.hpp"
#include "growthcast/evaluation.hpp"
#include "growthcast/gibbs.hpp"
#include "growthcast/inference.hpp"
#include "growthcast/model.hpp"

namespace py = pybind11;
using namespace growthcast;

namespace {

RichardsParams make_params(double theta1, double theta2, double theta3,
                           double xi) {
  return RichardsParams{theta1, theta2, theta3, xi};
}

// Retained draws as a (draw_count, parameter_count) matrix, chain-major,
// columns in layout order.
Eigen::MatrixXd draws_matrix(const PosteriorDraws& draws) {
  const ParameterLayout layout = draws.layout();
  Eigen::MatrixXd out(static_cast<Eigen::Index>(draws.draw_count()),
                      static_cast<Eigen::Index>(layout.size()));
  for (std::size_t s = 0; s < draws.draw_count(); ++s) {
    out.row(static_cast<Eigen::Index>(s)) = layout.flatten(draws.draw(s));
  }
  return out;
}

std::vector<std::string> parameter_names(const PosteriorDraws& draws) {
  return draws.layout().names();
}

}  // namespace

PYBIND11_MODULE(_growthcast, m) {
  m.doc() = "Bayesian hierarchical growth-curve fitting";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<KernelError>(m, "KernelError", PyExc_RuntimeError);

  py::class_<RichardsParams>(m, "RichardsParams")
      .def(py::init(&make_params), py::arg("theta1"), py::arg("theta2"),
           py::arg("theta3"), py::arg("xi") = 1.0)
      .def_readwrite("theta1", &RichardsParams::theta1)
      .def_readwrite("theta2", &RichardsParams::theta2)
      .def_readwrite("theta3", &RichardsParams::theta3)
      .def_readwrite("xi", &RichardsParams::xi);

  m.def("richards", py::vectorize([](double t, double theta1, double theta2,
                                     double theta3, double xi) {
          return richards(t, RichardsParams{theta1, theta2, theta3, xi});
        }),
        py::arg("t"), py::arg("theta1"), py::arg("theta2"), py::arg("theta3"),
        py::arg("xi") = 1.0, "Cumulative growth curve at time t.");
  m.def("gompertz", py::vectorize(&gompertz), py::arg("t"), py::arg("theta1"),
        py::arg("theta2"), py::arg("theta3"),
        "Limit of the growth curve as the shape parameter tends to zero.");
  m.def(
      "flat_time_point",
      [](const RichardsParams& p, double gamma) {
        return flat_time_point(p, gamma);
      },
      py::arg("params"), py::arg("gamma"),
      "Time at which the curve reaches the fraction gamma of its final size.");

  py::class_<Trajectory>(m, "Trajectory")
      .def(py::init([](const std::string& unit_id, const std::string& start,
                       Eigen::VectorXd counts) {
             return Trajectory{unit_id, parse_date_iso(start),
                               std::move(counts)};
           }),
           py::arg("unit_id"), py::arg("start_date"), py::arg("counts"))
      .def_readwrite("unit_id", &Trajectory::unit_id)
      .def_readwrite("counts", &Trajectory::counts)
      .def_property(
          "start_date",
          [](const Trajectory& y) { return format_date(y.start_date); },
          [](Trajectory& y, const std::string& s) {
            y.start_date = parse_date_iso(s);
          })
      .def_property_readonly("days", &Trajectory::days);

  py::class_<CovariateTable>(m, "CovariateTable")
      .def(py::init([](std::vector<std::string> unit_ids,
                       std::vector<std::string> names, Eigen::MatrixXd values) {
             return CovariateTable{std::move(unit_ids), std::move(names),
                                   std::move(values)};
           }),
           py::arg("unit_ids"), py::arg("names"), py::arg("values"))
      .def_readwrite("unit_ids", &CovariateTable::unit_ids)
      .def_readwrite("names", &CovariateTable::names)
      .def_readwrite("values", &CovariateTable::values);

  py::class_<PanelDataset>(m, "PanelDataset")
      .def_readonly("trajectories", &PanelDataset::trajectories)
      .def_readonly("covariates", &PanelDataset::covariates)
      .def_property_readonly("units", &PanelDataset::units)
      .def_property_readonly("days", &PanelDataset::days)
      .def_property_readonly("covariate_count", &PanelDataset::covariate_count);

  m.def(
      "load_trajectories",
      [](const std::string& path, const std::string& format) {
        TrajectoryFormat f;
        if (format == "long") {
          f = TrajectoryFormat::kLong;
        } else if (format == "jhu_wide") {
          f = TrajectoryFormat::kJhuWide;
        } else {
          throw py::value_error("format must be 'long' or 'jhu_wide'");
        }
        return load_trajectories(path, f);
      },
      py::arg("path"), py::arg("format") = "long");
  m.def("load_covariates", &load_covariates, py::arg("path"));
  m.def(
      "standardize",
      [](const CovariateTable& raw) { return standardize(raw); },
      py::arg("table"),
      "Impute missing cells with column medians, center each column, and "
      "scale it to unit Euclidean norm.");
  m.def(
      "make_panel",
      [](std::vector<Trajectory> trajectories,
         std::optional<CovariateTable> covariates) {
        return make_panel(std::move(trajectories), std::move(covariates));
      },
      py::arg("trajectories"), py::arg("covariates") = std::nullopt);
  m.def("train_test_split", &train_test_split, py::arg("trajectory"),
        py::arg("test_days"));
  m.def("running_maximum", &running_maximum, py::arg("trajectory"));

  py::enum_<Variant>(m, "Variant")
      .value("M1", Variant::kM1)
      .value("M2", Variant::kM2)
      .value("M3", Variant::kM3);

  py::class_<ModelSpec>(m, "ModelSpec")
      .def(py::init([](Variant variant, std::optional<std::string> unit) {
             return ModelSpec{variant, std::move(unit)};
           }),
           py::arg("variant"), py::arg("unit") = std::nullopt)
      .def_readwrite("variant", &ModelSpec::variant)
      .def_readwrite("unit", &ModelSpec::unit);

  py::class_<SamplerConfig>(m, "SamplerConfig")
      .def(py::init<>())
      .def_static("desk_scale", &SamplerConfig::desk_scale)
      .def_readwrite("sweeps", &SamplerConfig::sweeps)
      .def_readwrite("burn_in", &SamplerConfig::burn_in)
      .def_readwrite("thin", &SamplerConfig::thin)
      .def_readwrite("chains", &SamplerConfig::chains)
      .def_readwrite("seed", &SamplerConfig::seed);

  py::class_<ScalarDiagnostic>(m, "ScalarDiagnostic")
      .def_readonly("name", &ScalarDiagnostic::name)
      .def_readonly("split_rhat", &ScalarDiagnostic::split_rhat)
      .def_readonly("bulk_ess", &ScalarDiagnostic::bulk_ess);

  py::class_<PosteriorDraws>(m, "PosteriorDraws")
      .def_property_readonly("draw_count", &PosteriorDraws::draw_count)
      .def_readonly("unit_ids", &PosteriorDraws::unit_ids)
      .def_readonly("covariate_names", &PosteriorDraws::covariate_names)
      .def_readonly("acceptance_rates", &PosteriorDraws::acceptance_rates)
      .def_property_readonly(
          "start_date",
          [](const PosteriorDraws& d) { return format_date(d.start_date); })
      .def_readonly("observed_days", &PosteriorDraws::observed_days)
      .def_property_readonly(
          "diagnostics",
          [](const PosteriorDraws& d) { return d.diagnostics.scalars; })
      .def("matrix", &draws_matrix,
           "Retained draws as a (draws, parameters) array, chain-major.")
      .def("parameter_names", &parameter_names);

  m.def(
      "run_chains",
      [](const PanelDataset& data, const ModelSpec& spec,
         const SamplerConfig& config, int max_workers) {
        return run_chains(data, spec, config, {}, max_workers);
      },
      py::arg("data"), py::arg("spec"), py::arg("config"),
      py::arg("max_workers") = 0,
      py::call_guard<py::gil_scoped_release>());

  py::class_<CredibleSummary>(m, "CredibleSummary")
      .def_readonly("mean", &CredibleSummary::mean)
      .def_readonly("lower", &CredibleSummary::lower)
      .def_readonly("upper", &CredibleSummary::upper)
      .def_readonly("level", &CredibleSummary::level);

  py::class_<ForecastBand>(m, "ForecastBand")
      .def_readonly("days", &ForecastBand::days)
      .def_property_readonly("dates",
                             [](const ForecastBand& b) {
                               std::vector<std::string> out;
                               out.reserve(b.dates.size());
                               for (const auto& d : b.dates) {
                                 out.push_back(format_date(d));
                               }
                               return out;
                             })
      .def_readonly("mean", &ForecastBand::mean)
      .def_readonly("lower", &ForecastBand::lower)
      .def_readonly("upper", &ForecastBand::upper)
      .def_readonly("level", &ForecastBand::level);

  m.def("percentile", &percentile, py::arg("values"), py::arg("q"));
  m.def(
      "summarize",
      [](const std::vector<double>& draws, double level) {
        return summarize(draws, level);
      },
      py::arg("draws"), py::arg("level") = 0.95);
  m.def("extrapolate", &extrapolate, py::arg("draws"), py::arg("unit"),
        py::arg("horizon"), py::arg("level") = 0.95,
        py::arg("include_observation_noise") = false,
        py::arg("noise_seed") = 0);
  m.def("flat_time_summary", &flat_time_summary, py::arg("draws"),
        py::arg("unit"), py::arg("gamma"), py::arg("level") = 0.95);
  m.def(
      "classify",
      [](double theta1_mean) { return static_cast<int>(classify(theta1_mean)); },
      py::arg("theta1_posterior_mean"),
      "Alert level 1, 2, or 3 from the posterior mean final size.");
  m.def(
      "classify_unit",
      [](const PosteriorDraws& draws, int unit) {
        return static_cast<int>(classify_unit(draws, unit));
      },
      py::arg("draws"), py::arg("unit"));
  m.def("grand_average_curve", &grand_average_curve, py::arg("draws"),
        py::arg("horizon"), py::arg("level") = 0.95,
        py::arg("fixed_xi") = std::nullopt);

  py::class_<RankedCovariate>(m, "RankedCovariate")
      .def_readonly("rank", &RankedCovariate::rank)
      .def_readonly("name", &RankedCovariate::name)
      .def_readonly("posterior_mean", &RankedCovariate::posterior_mean);
  m.def("rank_covariates", &rank_covariates, py::arg("draws"),
        py::arg("block"), py::arg("top_k"),
        "Top covariates of coefficient block 0, 1, or 2 by absolute "
        "posterior mean.");

  m.def("mse_horizon", &mse_horizon, py::arg("actual"), py::arg("forecast"));
  py::class_<BoxStats>(m, "BoxStats")
      .def_readonly("q1", &BoxStats::q1)
      .def_readonly("median", &BoxStats::median)
      .def_readonly("q3", &BoxStats::q3)
      .def_readonly("whisker_low", &BoxStats::whisker_low)
      .def_readonly("whisker_high", &BoxStats::whisker_high)
      .def_readonly("outliers", &BoxStats::outliers);
  m.def("box_stats", &box_stats, py::arg("values"));

  py::class_<MseCell>(m, "MseCell")
      .def_readonly("model", &MseCell::model)
      .def_readonly("test_days", &MseCell::test_days)
      .def_readonly("replicate", &MseCell::replicate)
      .def_readonly("mse", &MseCell::mse)
      .def_readonly("error", &MseCell::error);
  py::class_<MseReport>(m, "MseReport")
      .def_readonly("models", &MseReport::models)
      .def_readonly("test_days", &MseReport::test_days)
      .def_readonly("replicates", &MseReport::replicates)
      .def_readonly("cells", &MseReport::cells);
  m.def("compare_models", &compare_models, py::arg("data"), py::arg("models"),
        py::arg("test_days"), py::arg("replicates"), py::arg("base_seed"),
        py::arg("config"), py::arg("max_workers") = 0,
        py::call_guard<py::gil_scoped_release>());
  m.def("cell_values", &cell_values, py::arg("report"), py::arg("model"),
        py::arg("test_days"));

  m.def("write_draws_csv",
        [](const PosteriorDraws& draws, const std::string& path) {
          write_draws_csv(draws, path);
        },
        py::arg("draws"), py::arg("path"));
  m.def(
      "read_draws_csv",
      [](const std::string& path) { return read_draws_csv(path); },
      py::arg("path"));
}
