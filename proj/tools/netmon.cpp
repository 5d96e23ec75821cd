// netmon: simulate, ingest, fit, calibrate, monitor and benchmark attributed
// network streams. Exit status: 0 success, 1 error, 2 monitor raised an alarm.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "netmon/config.hpp"
#include "netmon/experiment.hpp"
#include "netmon/io.hpp"
#include "netmon/monitor.hpp"

namespace fs = std::filesystem;
using namespace netmon;

namespace {

struct Globals {
  std::string config_path;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> reps;
  std::optional<std::size_t> horizon;
  std::optional<std::string> scale;
  std::optional<std::string> policy;
};

std::ofstream create(const fs::path& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::io, "cannot write " + path.string());
  return out;
}

void echo_config(const RunConfig& config, const fs::path& dir) {
  create(dir / "config.yaml") << dump_config(config);
}

fs::path out_dir(const Globals& g) {
  const fs::path dir(g.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorCode::io, "cannot create " + dir.string() + ": " + ec.message());
  return dir;
}

void print_estimate(const ArlEstimate& e) {
  std::printf("%.4f (%s) reps=%zu censored=%zu discarded=%zu", e.arl,
              e.serl_available() ? format_real(e.serl).c_str() : "SERL unavailable", e.reps, e.censored,
              e.discarded);
}

// In-control s for a simulated design, from the reference stream.
double reference_s(const RunConfig& c, const ExperimentDesign& design) {
  if (c.chart.s) return *c.chart.s;
  const auto ref = reference_series(design, c.calibration.reference_length, reference_seed(c.seed));
  const SigmaEstimate est = estimate_sigma(ref);
  if (est.warning) std::cerr << "warning: " << *est.warning << "\n";
  return est.s;
}

int cmd_simulate(RunConfig& c, const Globals& g) {
  if (c.simulation.length == 0) fail(ErrorCode::invalid_argument, "simulation.length must be at least 1");
  const fs::path dir = out_dir(g);
  SimulationConfig sim = c.design().sim;
  const SimulatedStream s = simulate_stream(sim, c.change);
  write_snapshot_file(dir / "stream.csv", s.stream);
  write_beta_file(dir / "beta.csv", s.stream, s.beta);
  echo_config(c, dir);
  std::printf("wrote %zu snapshots (n=%zu, m=%zu) to %s\n", s.stream.size(), sim.n, s.stream.front().snapshot.m(),
              (dir / "stream.csv").string().c_str());
  return 0;
}

int cmd_ingest(RunConfig& c, const Globals& g, const std::string& events_path, const std::string& nodes_path) {
  const fs::path dir = out_dir(g);
  const IngestResult r = ingest_events(read_events(events_path), read_roles(nodes_path), c.ingest);
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
  write_snapshot_file(dir / "stream.csv", r.stream);
  {
    std::ofstream nodes = create(dir / "nodes.csv");
    nodes << "index,node_id\n";
    for (std::size_t k = 0; k < r.nodes.size(); ++k) nodes << k << "," << r.nodes[k] << "\n";
  }
  echo_config(c, dir);
  std::printf("wrote %zu snapshots over %zu nodes (p=%zu) to %s\n", r.stream.size(), r.nodes.size(),
              r.stream.front().attributes->p(), (dir / "stream.csv").string().c_str());
  return 0;
}

int cmd_fit_static(const RunConfig& c, const std::string& stream_path, std::optional<TimeIndex> t) {
  const NetworkStream stream = read_snapshot_file(stream_path);
  const std::size_t k = t ? stream.find(*t) : 0;
  if (k == stream.size()) fail(ErrorCode::invalid_argument, "no snapshot with t=" + std::to_string(*t));
  const StreamEntry& e = stream[k];
  const GlmFit fit = irwls_fit(e.attributes->values, e.snapshot.weights, e.snapshot.family, c.irwls);
  std::printf("t=%ld iterations=%zu converged=%d loglik=%s\n", e.snapshot.t, fit.iterations, fit.converged ? 1 : 0,
              format_real(fit.final_loglik).c_str());
  std::printf("coefficient,estimate,std_error\n");
  for (Eigen::Index j = 0; j < fit.beta_hat.size(); ++j) {
    const std::string name = j == 0 ? "intercept" : e.attributes->columns[static_cast<std::size_t>(j - 1)];
    std::printf("%s,%s,%s\n", name.c_str(), format_real(fit.beta_hat[j]).c_str(),
                format_real(std::sqrt(fit.covariance(j, j))).c_str());
  }
  return 0;
}

int cmd_calibrate(RunConfig& c, const Globals& g, bool only_lambda) {
  const fs::path dir = out_dir(g);
  const ExperimentDesign design = c.design();
  CalibrationOptions o = c.calibration_options(only_lambda ? c.chart.lambda : 0.0);
  o.s = reference_s(c, design);
  const auto rows = calibrate(design, o);
  {
    std::ofstream table = create(dir / "calibration.csv");
    write_calibration_table(table, std::string(to_string(c.predictor.method)), rows);
  }
  write_calibration_table(std::cout, std::string(to_string(c.predictor.method)), rows);
  echo_config(c, dir);
  return 0;
}

int cmd_monitor(RunConfig& c, const Globals& g, const std::string& stream_path) {
  const fs::path dir = out_dir(g);
  const NetworkStream stream = read_snapshot_file(stream_path);
  if (stream.size() < 2) fail(ErrorCode::invalid_argument, "monitoring needs at least two snapshots");
  if (!c.chart.l) fail(ErrorCode::invalid_argument, "chart.l (--l) is required; run calibrate first");
  StateSpaceModel model = resolve_model(c.simulation.model, stream.front().attributes->p() + 1);
  model.family = stream.front().snapshot.family;

  const auto predictor = make_predictor(c.predictor, model, c.irwls);
  const ResidualTrace trace = residual_trace(stream, *predictor);

  double s = 0.0;
  TimeIndex start = c.chart.start.value_or(stream[1].snapshot.t);
  if (c.chart.s) {
    s = *c.chart.s;
  } else {
    if (!c.chart.reference_end) {
      fail(ErrorCode::invalid_argument, "give chart.s (--s) or a reference window end (--reference-end)");
    }
    const auto ref = trace_window(trace, stream[1].snapshot.t, *c.chart.reference_end);
    const SigmaEstimate est = estimate_sigma(ref);
    if (est.warning) std::cerr << "warning: " << *est.warning << "\n";
    s = est.s;
    if (!c.chart.start) start = *c.chart.reference_end + 1;
    c.chart.s = s;
  }
  c.chart.start = start;

  const auto points = apply_chart(trace, make_chart(c.chart.lambda, *c.chart.l, s, c.chart.form), start);
  {
    std::ofstream csv = create(dir / "chart.csv");
    write_chart_csv(csv, points);
    std::ofstream svg = create(dir / "chart.svg");
    write_chart_svg(svg, points, "EWMA of mean Pearson residual (" + std::string(to_string(c.predictor.method)) + ")");
  }
  echo_config(c, dir);

  std::vector<TimeIndex> alarms;
  for (const ChartPoint& p : points) {
    if (p.signal) alarms.push_back(p.t);
  }
  std::printf("monitored %zu snapshots from t=%ld with s=%s\n", points.size(), start, format_real(s).c_str());
  if (alarms.empty()) {
    std::printf("no alarms\n");
    return 0;
  }
  std::printf("first alarm: %ld\nalarms (%zu):", alarms.front(), alarms.size());
  for (const TimeIndex t : alarms) std::printf(" %ld", t);
  std::printf("\n");
  return 2;
}

int cmd_benchmark(RunConfig& c, const Globals& g) {
  const fs::path dir = out_dir(g);
  const BenchmarkConfig& b = c.benchmark;
  for (const EdgeFamily family : b.families) {
    RunConfig fc = c;
    fc.simulation.family = family;
    fc.simulation.model.family = family;

    struct Calibrated {
      Method method;
      EwmaChart chart;
    };
    std::vector<Calibrated> charts;
    std::vector<CalibrationRow> used;
    for (const Method method : b.methods) {
      fc.predictor.method = method;
      const auto it = b.charts.find(method);
      MethodChart mc = it == b.charts.end() ? default_method_chart(method) : it->second;
      const ExperimentDesign design = fc.design();
      const double s = reference_s(fc, design);
      if (!mc.l) {
        CalibrationOptions o = fc.calibration_options(mc.lambda);
        o.s = s;
        const CalibrationRow row = calibrate(design, o).front();
        used.push_back(row);
        mc.l = row.l;
        std::printf("%s %s: calibrated l=%.4f lambda=%.2f s=%.6g ARL0=", std::string(to_string(family)).c_str(),
                    std::string(to_string(method)).c_str(), row.l, row.lambda, s);
        print_estimate(row.arl0);
        std::printf("\n");
      }
      c.benchmark.charts[method] = mc;
      charts.push_back({method, make_chart(mc.lambda, *mc.l, s, c.chart.form)});
    }

    for (const ChangeScenario scenario : b.scenarios) {
      std::vector<ArlRow> rows;
      std::vector<ArlSeries> series;
      for (const Calibrated& cal : charts) {
        fc.predictor.method = cal.method;
        const ExperimentDesign design = fc.design();
        ArlSeries line{std::string(to_string(cal.method)), {}, {}};
        for (const double delta : b.deltas) {
          ChangeSpec change = scenario_change(scenario, delta, c.change ? c.change->tau : 50);
          if (c.change) change.sigma_form = c.change->sigma_form;
          const ArlEstimate est = evaluate_arl(design, change, cal.chart, c.benchmark_horizon(), c.benchmark_reps(),
                                               c.seed, c.policy);
          rows.push_back({line.label, std::string(to_string(scenario)), delta, est});
          line.delta.push_back(delta);
          line.arl.push_back(est.arl);
          std::printf("%s %s %s delta=%.2f ARL1=", std::string(to_string(family)).c_str(),
                      std::string(to_string(scenario)).c_str(), line.label.c_str(), delta);
          print_estimate(est);
          std::printf("\n");
          std::fflush(stdout);
        }
        series.push_back(std::move(line));
      }
      const std::string stem = "benchmark_" + std::string(to_string(family)) + "_" + std::string(to_string(scenario));
      std::ofstream csv = create(dir / (stem + ".csv"));
      write_arl_table(csv, rows);
      std::ofstream svg = create(dir / (stem + ".svg"));
      write_arl_svg(svg, series,
                    "ARL1 vs delta, " + std::string(to_string(family)) + ", " + std::string(to_string(scenario)));
    }
    if (!used.empty()) {
      std::ofstream cal = create(dir / ("calibration_" + std::string(to_string(family)) + ".csv"));
      write_calibration_table(cal, "benchmark", used);
    }
  }
  echo_config(c, dir);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monitoring of attributed network streams with GLM state-space models and EWMA charts"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config_path, "YAML run configuration")->check(CLI::ExistingFile);
  app.add_option("--out", g.out, "Output directory")->capture_default_str();
  app.add_option("--seed", g.seed, "Base random seed");
  app.add_option("--reps", g.reps, "Monte Carlo replications (calibrate, benchmark)");
  app.add_option("--horizon", g.horizon, "Run-length censoring horizon");
  app.add_option("--scale", g.scale, "Replication defaults: desk (500 x 2000) or paper (2000 x 5000)")
      ->check(CLI::IsMember({"desk", "paper"}));
  app.add_option("--policy", g.policy, "Replication execution: serial or parallel")
      ->check(CLI::IsMember({"serial", "parallel"}));

  std::optional<std::string> method, family, scenario, sigma_form, form;
  std::optional<double> lambda, l, s, delta, period, target;
  std::optional<std::size_t> length, window, warmup, initial_window;
  std::optional<TimeIndex> tau, start, reference_end, fit_t;
  std::string stream_path, events_path, nodes_path;
  std::vector<std::string> keep_roles, roles;
  bool only_lambda = false;

  auto add_predictor = [&](CLI::App* cmd) {
    cmd->add_option("--method", method, "dynamic | approximate | static | sliding");
    cmd->add_option("--window", window, "Sliding window l_w");
    cmd->add_option("--warmup", warmup, "Snapshots observed before monitoring (simulated designs)");
  };
  auto add_change = [&](CLI::App* cmd) {
    cmd->add_option("--scenario", scenario, "global | local");
    cmd->add_option("--delta", delta, "Shift magnitude in units of sigma_i");
    cmd->add_option("--tau", tau, "Change time");
    cmd->add_option("--sigma-form", sigma_form, "printed | stationary");
  };

  auto* sim = app.add_subcommand("simulate", "Write a simulated stream and its latent coefficients");
  sim->add_option("--length", length, "Number of snapshots");
  sim->add_option("--family", family, "bernoulli | poisson");
  add_change(sim);

  auto* ing = app.add_subcommand("ingest", "Bin edge events into snapshots with role-pair attributes");
  ing->add_option("--events", events_path, "timestamp,src,dst[,weight]")->required()->check(CLI::ExistingFile);
  ing->add_option("--nodes", nodes_path, "node_id,role")->required()->check(CLI::ExistingFile);
  ing->add_option("--period", period, "Timestamp units per snapshot");
  ing->add_option("--initial-window", initial_window, "Periods collapsed into snapshot 0");
  ing->add_option("--keep-roles", keep_roles, "Only nodes with these roles")->delimiter(',');
  ing->add_option("--roles", roles, "Role order (first pair is the reference level)")->delimiter(',');
  ing->add_option("--family", family, "bernoulli | poisson");

  auto* fit = app.add_subcommand("fit-static", "IRWLS fit of one snapshot");
  fit->add_option("--stream", stream_path, "Snapshot file")->required()->check(CLI::ExistingFile);
  fit->add_option("--t", fit_t, "Time index (default: first snapshot)");

  auto* cal = app.add_subcommand("calibrate", "Find l for each lambda so that ARL0 hits the target");
  add_predictor(cal);
  cal->add_option("--family", family, "bernoulli | poisson");
  cal->add_option("--target", target, "Target in-control ARL");
  cal->add_option("--lambda", lambda, "Calibrate this lambda only");
  cal->add_option("--s", s, "In-control sd of r-bar (skips the reference stream)");
  cal->add_option("--form", form, "Limit form: standard | printed");

  auto* mon = app.add_subcommand("monitor", "Chart a snapshot file; exit status 2 when any alarm fires");
  mon->add_option("--stream", stream_path, "Snapshot file")->required()->check(CLI::ExistingFile);
  add_predictor(mon);
  mon->add_option("--lambda", lambda, "EWMA weight");
  mon->add_option("--l", l, "Control limit multiplier");
  mon->add_option("--s", s, "In-control sd of r-bar");
  mon->add_option("--start", start, "First monitored time index");
  mon->add_option("--reference-end", reference_end, "Estimate s from residuals up to this time index");
  mon->add_option("--form", form, "Limit form: standard | printed");

  auto* bench = app.add_subcommand("benchmark", "ARL1 over a families x scenarios x delta grid per method");
  bench->add_option("--sigma-form", sigma_form, "printed | stationary");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    RunConfig c = g.config_path.empty() ? RunConfig{} : load_config(g.config_path);
    if (g.seed) c.seed = *g.seed;
    if (g.scale) c.scale = parse_scale(*g.scale);
    if (g.policy) c.policy = parse_policy(*g.policy);
    if (g.reps) c.calibration.reps = c.benchmark.reps = *g.reps;
    if (g.horizon) c.calibration.horizon = c.benchmark.horizon = *g.horizon;
    if (method) c.predictor.method = parse_method(*method);
    if (window) c.predictor.window = *window;
    if (warmup) c.warmup = *warmup;
    if (family) {
      c.simulation.family = c.simulation.model.family = c.ingest.family = parse_family(*family);
    }
    if (length) c.simulation.length = *length;
    if (lambda) c.chart.lambda = *lambda;
    if (l) c.chart.l = *l;
    if (s) c.chart.s = *s;
    if (form) c.chart.form = parse_limit_form(*form);
    if (start) c.chart.start = *start;
    if (reference_end) c.chart.reference_end = *reference_end;
    if (target) c.calibration.target_arl0 = *target;
    if (period) c.ingest.period = *period;
    if (initial_window) c.ingest.initial_window = *initial_window;
    if (!keep_roles.empty()) c.ingest.keep_roles = keep_roles;
    if (!roles.empty()) c.ingest.roles = roles;
    if (scenario || delta || tau || sigma_form) {
      ChangeSpec ch = c.change.value_or(ChangeSpec{});
      const ChangeScenario sc = scenario ? parse_scenario(*scenario) : ch.scenario;
      ChangeSpec next = scenario_change(sc, delta.value_or(ch.delta), tau.value_or(ch.tau));
      next.sigma_form = sigma_form ? parse_sigma_form(*sigma_form) : ch.sigma_form;
      c.change = next;
    }
    only_lambda = lambda.has_value();
    c.validate();

    if (*sim) return cmd_simulate(c, g);
    if (*ing) return cmd_ingest(c, g, events_path, nodes_path);
    if (*fit) return cmd_fit_static(c, stream_path, fit_t);
    if (*cal) return cmd_calibrate(c, g, only_lambda);
    if (*mon) return cmd_monitor(c, g, stream_path);
    if (*bench) return cmd_benchmark(c, g);
  } catch (const Error& e) {
    std::cerr << "netmon: " << to_string(e.code()) << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "netmon: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
