#pragma once

// Run configuration for the command-line tool. The file is YAML with one
// mapping per section; every key is optional and unknown keys are errors
// reported with their line number. docs/config.md lists the schema.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "netmon/chart.hpp"
#include "netmon/experiment.hpp"
#include "netmon/io.hpp"
#include "netmon/parallel.hpp"
#include "netmon/predictor.hpp"
#include "netmon/simulator.hpp"

namespace netmon {

enum class Scale { desk, paper };
std::string_view to_string(Scale scale) noexcept;
Scale parse_scale(std::string_view text);

struct ChartConfig {
  double lambda = 0.1;
  std::optional<double> l;  // calibrated multiplier; required by monitor
  std::optional<double> s;  // in-control sd of r-bar; estimated when absent
  LimitForm form = LimitForm::standard;
  std::optional<TimeIndex> start;            // first monitored t
  std::optional<TimeIndex> reference_end;    // last t of the reference window for s
};

struct CalibrationConfig {
  double target_arl0 = 200.0;
  std::vector<double> lambda_grid{0.05, 0.1, 0.2, 0.3};
  std::optional<std::size_t> reps;
  std::optional<std::size_t> horizon;
  std::size_t reference_length = 2000;
  double tolerance = 0.05;
  double l_min = 0.5;
  double l_max = 6.0;
  double l_initial = 2.5;
  double l_step = 0.25;
};

struct MethodChart {
  double lambda = 0.1;
  std::optional<double> l;
};

struct BenchmarkConfig {
  std::vector<EdgeFamily> families{EdgeFamily::bernoulli};
  std::vector<ChangeScenario> scenarios{ChangeScenario::global};
  std::vector<double> deltas{0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
  std::vector<Method> methods{Method::static_fit, Method::sliding, Method::dynamic};
  std::map<Method, MethodChart> charts;  // per method; missing l is calibrated first
  std::optional<std::size_t> reps;
  std::optional<std::size_t> horizon;
};

struct RunConfig {
  std::uint64_t seed = 1;
  Scale scale = Scale::desk;
  ExecutionPolicy policy = ExecutionPolicy::parallel;

  SimulationConfig simulation = default_simulation_config(EdgeFamily::bernoulli);
  std::optional<ChangeSpec> change;
  PredictorKind predictor;
  std::size_t warmup = 20;
  IrwlsOptions irwls;
  ChartConfig chart;
  CalibrationConfig calibration;
  BenchmarkConfig benchmark;
  IngestOptions ingest;

  /// Reps and horizon after applying the scale defaults (desk 500 x 2000,
  /// paper 2000 x 5000) to unset fields.
  std::size_t calibration_reps() const;
  std::size_t calibration_horizon() const;
  std::size_t benchmark_reps() const;
  std::size_t benchmark_horizon() const;

  ExperimentDesign design() const;
  CalibrationOptions calibration_options(double lambda_only = 0.0) const;
  void validate() const;
};

/// A model given with one coefficient is broadcast to `dim` (F = f I,
/// xi = x 1, Q = q I); otherwise the dimension must already match.
StateSpaceModel resolve_model(const StateSpaceModel& model, std::size_t dim);

/// Default method charts: dynamic and sliding at lambda 0.1, static at 0.3.
MethodChart default_method_chart(Method method);

RunConfig parse_config(const std::string& text, const std::string& source = "<config>");
RunConfig load_config(const std::filesystem::path& path);

/// YAML text with every field resolved; parse_config(dump_config(c)) == c.
std::string dump_config(const RunConfig& config);

}  // namespace netmon
