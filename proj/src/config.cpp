#include "netmon/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace netmon {

std::string_view to_string(Scale scale) noexcept { return scale == Scale::desk ? "desk" : "paper"; }

Scale parse_scale(std::string_view text) {
  if (text == "desk") return Scale::desk;
  if (text == "paper") return Scale::paper;
  fail(ErrorCode::parse, "unknown scale '" + std::string(text) + "' (expected desk|paper)");
}

MethodChart default_method_chart(Method method) {
  return MethodChart{method == Method::static_fit ? 0.3 : 0.1, std::nullopt};
}

std::size_t RunConfig::calibration_reps() const {
  return calibration.reps.value_or(scale == Scale::desk ? 500 : 2000);
}
std::size_t RunConfig::calibration_horizon() const {
  return calibration.horizon.value_or(scale == Scale::desk ? 2000 : 5000);
}
std::size_t RunConfig::benchmark_reps() const { return benchmark.reps.value_or(scale == Scale::desk ? 500 : 2000); }
std::size_t RunConfig::benchmark_horizon() const {
  return benchmark.horizon.value_or(scale == Scale::desk ? 2000 : 5000);
}

ExperimentDesign RunConfig::design() const {
  ExperimentDesign d;
  d.sim = simulation;
  d.sim.seed = seed;
  d.sim.model.family = simulation.family;
  d.predictor = predictor;
  d.warmup = warmup;
  d.irwls = irwls;
  return d;
}

CalibrationOptions RunConfig::calibration_options(double lambda_only) const {
  CalibrationOptions o;
  o.target_arl0 = calibration.target_arl0;
  o.lambda_grid = lambda_only > 0.0 ? std::vector<double>{lambda_only} : calibration.lambda_grid;
  o.reps = calibration_reps();
  o.horizon = calibration_horizon();
  o.reference_length = calibration.reference_length;
  o.tolerance = calibration.tolerance;
  o.l_min = calibration.l_min;
  o.l_max = calibration.l_max;
  o.l_initial = calibration.l_initial;
  o.l_step = calibration.l_step;
  o.seed = seed;
  o.form = chart.form;
  o.s = chart.s;
  o.policy = policy;
  return o;
}

void RunConfig::validate() const {
  // A model whose dimension differs from beta0 is meant for monitoring a
  // file (it is broadcast to the design); simulation commands check again.
  if (simulation.model.dim() == static_cast<std::size_t>(simulation.beta0.size())) {
    design().validate();
  } else {
    simulation.model.validate();
  }
  if (change) change->validate();
  calibration_options().validate();
  if (benchmark.deltas.empty() || benchmark.methods.empty() || benchmark.families.empty() ||
      benchmark.scenarios.empty()) {
    fail(ErrorCode::invalid_argument, "benchmark grid has an empty axis");
  }
  if (benchmark_reps() < 1 || benchmark_horizon() < 1) {
    fail(ErrorCode::invalid_argument, "benchmark reps and horizon must be positive");
  }
  if (!(ingest.period > 0.0)) fail(ErrorCode::invalid_argument, "ingest period must be positive");
}

StateSpaceModel resolve_model(const StateSpaceModel& model, std::size_t dim) {
  if (model.dim() == dim) return model;
  if (model.dim() != 1 || model.F.size() != 1 || model.Q.size() != 1) {
    fail(ErrorCode::dimension_mismatch, "model has dimension " + std::to_string(model.dim()) + ", design needs " +
                                            std::to_string(dim));
  }
  const auto d = static_cast<Eigen::Index>(dim);
  StateSpaceModel out;
  out.F = model.F(0, 0) * Eigen::MatrixXd::Identity(d, d);
  out.xi = Eigen::VectorXd::Constant(d, model.xi[0]);
  out.Q = model.Q(0, 0) * Eigen::MatrixXd::Identity(d, d);
  out.family = model.family;
  return out;
}

namespace {

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void error(const YAML::Node& node, const std::string& what) const {
    const auto mark = node.Mark();
    const std::string line = mark.line >= 0 ? std::to_string(mark.line + 1) : "?";
    fail(ErrorCode::parse, source_ + ":" + line + ": " + what);
  }

  // Iterates a section, rejecting keys that no handler claims.
  template <class Handler>
  void section(const YAML::Node& root, const std::string& name, Handler&& handle) const {
    const YAML::Node node = root[name];
    if (!node) return;
    if (node.IsNull()) return;
    if (!node.IsMap()) error(node, name + ": expected a mapping");
    for (const auto& kv : node) {
      const std::string key = kv.first.as<std::string>();
      if (!handle(key, kv.second)) error(kv.first, "unknown key '" + name + "." + key + "'");
    }
  }

  template <class T>
  T scalar(const YAML::Node& node, const std::string& key, const char* kind) const {
    if (!node.IsScalar()) error(node, key + ": expected " + kind);
    try {
      return node.as<T>();
    } catch (const YAML::Exception&) {
      error(node, key + ": expected " + kind + ", got '" + node.Scalar() + "'");
    }
  }

  double real(const YAML::Node& n, const std::string& k) const { return scalar<double>(n, k, "a number"); }
  bool flag(const YAML::Node& n, const std::string& k) const { return scalar<bool>(n, k, "true or false"); }
  std::string text(const YAML::Node& n, const std::string& k) const { return scalar<std::string>(n, k, "a string"); }

  std::size_t count(const YAML::Node& n, const std::string& k) const {
    const long long v = scalar<long long>(n, k, "a non-negative integer");
    if (v < 0) error(n, k + ": expected a non-negative integer");
    return static_cast<std::size_t>(v);
  }

  template <class F>
  auto parsed(const YAML::Node& n, const std::string& k, F&& parse) const {
    try {
      return parse(text(n, k));
    } catch (const Error& e) {
      error(n, k + ": " + e.what());
    }
  }

  std::optional<double> optional_real(const YAML::Node& n, const std::string& k) const {
    if (n.IsNull()) return std::nullopt;
    return real(n, k);
  }

  template <class T, class F>
  std::vector<T> list(const YAML::Node& n, const std::string& k, F&& item) const {
    std::vector<T> out;
    if (n.IsScalar()) {
      out.push_back(item(n));
      return out;
    }
    if (!n.IsSequence()) error(n, k + ": expected a list");
    for (const auto& e : n) out.push_back(item(e));
    return out;
  }

  std::vector<double> reals(const YAML::Node& n, const std::string& k) const {
    return list<double>(n, k, [&](const YAML::Node& e) { return real(e, k); });
  }

  Eigen::VectorXd vector(const YAML::Node& n, const std::string& k) const {
    const auto v = reals(n, k);
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
  }

  // A scalar, a list (diagonal) or a list of rows.
  Eigen::MatrixXd matrix(const YAML::Node& n, const std::string& k) const {
    if (n.IsSequence() && n.size() > 0 && n[0].IsSequence()) {
      const auto rows = static_cast<Eigen::Index>(n.size());
      Eigen::MatrixXd M(rows, rows);
      for (Eigen::Index r = 0; r < rows; ++r) {
        const auto row = reals(n[static_cast<std::size_t>(r)], k);
        if (static_cast<Eigen::Index>(row.size()) != rows) error(n, k + ": matrix must be square");
        for (Eigen::Index c = 0; c < rows; ++c) M(r, c) = row[static_cast<std::size_t>(c)];
      }
      return M;
    }
    return vector(n, k).asDiagonal();
  }

 private:
  std::string source_;
};

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    fail(ErrorCode::parse, source + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  RunConfig c;
  const Reader r(source);
  if (!root || root.IsNull()) return c;
  if (!root.IsMap()) r.error(root, "top level must be a mapping of sections");

  static const std::set<std::string> sections{"run",   "simulation", "model",       "change",    "predictor",
                                              "chart", "irwls",      "calibration", "benchmark", "ingest"};
  for (const auto& kv : root) {
    if (!sections.count(kv.first.as<std::string>())) {
      r.error(kv.first, "unknown section '" + kv.first.as<std::string>() + "'");
    }
  }

  r.section(root, "run", [&](const std::string& k, const YAML::Node& v) {
    if (k == "seed") c.seed = r.scalar<std::uint64_t>(v, "run.seed", "an unsigned integer");
    else if (k == "scale") c.scale = r.parsed(v, "run.scale", parse_scale);
    else if (k == "policy") c.policy = r.parsed(v, "run.policy", parse_policy);
    else return false;
    return true;
  });

  SimulationConfig& s = c.simulation;
  r.section(root, "simulation", [&](const std::string& k, const YAML::Node& v) {
    if (k == "n") s.n = r.count(v, "simulation.n");
    else if (k == "directed") s.directed = r.flag(v, "simulation.directed");
    else if (k == "family") s.family = r.parsed(v, "simulation.family", parse_family);
    else if (k == "length") s.length = r.count(v, "simulation.length");
    else if (k == "member_count") s.member_count = r.count(v, "simulation.member_count");
    else if (k == "age_low") s.age_low = r.scalar<int>(v, "simulation.age_low", "an integer");
    else if (k == "age_high") s.age_high = r.scalar<int>(v, "simulation.age_high", "an integer");
    else if (k == "beta0") s.beta0 = r.vector(v, "simulation.beta0");
    else return false;
    return true;
  });
  r.section(root, "model", [&](const std::string& k, const YAML::Node& v) {
    if (k == "F") s.model.F = r.matrix(v, "model.F");
    else if (k == "xi") s.model.xi = r.vector(v, "model.xi");
    else if (k == "Q") s.model.Q = r.matrix(v, "model.Q");
    else return false;
    return true;
  });
  {
    // Scalars given next to vector-valued entries are shared by every coordinate.
    const Eigen::Index d = std::max({s.model.F.rows(), s.model.xi.size(), s.model.Q.rows()});
    if (s.model.F.size() == 1 && d > 1) s.model.F = s.model.F(0, 0) * Eigen::MatrixXd::Identity(d, d);
    if (s.model.xi.size() == 1 && d > 1) s.model.xi = Eigen::VectorXd::Constant(d, s.model.xi[0]);
    if (s.model.Q.size() == 1 && d > 1) s.model.Q = s.model.Q(0, 0) * Eigen::MatrixXd::Identity(d, d);
  }
  s.model.family = s.family;

  if (const YAML::Node node = root["change"]; node && !node.IsNull()) {
    ChangeSpec ch;
    bool enabled = true;
    r.section(root, "change", [&](const std::string& k, const YAML::Node& v) {
      if (k == "enabled") enabled = r.flag(v, "change.enabled");
      else if (k == "scenario") ch.scenario = r.parsed(v, "change.scenario", parse_scenario);
      else if (k == "tau") ch.tau = r.scalar<TimeIndex>(v, "change.tau", "an integer");
      else if (k == "delta") ch.delta = r.real(v, "change.delta");
      else if (k == "sigma_form") ch.sigma_form = r.parsed(v, "change.sigma_form", parse_sigma_form);
      else return false;
      return true;
    });
    if (enabled) {
      ChangeSpec full = scenario_change(ch.scenario, ch.delta, ch.tau);
      full.sigma_form = ch.sigma_form;
      c.change = full;
    }
  }

  r.section(root, "predictor", [&](const std::string& k, const YAML::Node& v) {
    if (k == "method") c.predictor.method = r.parsed(v, "predictor.method", parse_method);
    else if (k == "window") c.predictor.window = r.count(v, "predictor.window");
    else if (k == "warmup") c.warmup = r.count(v, "predictor.warmup");
    else return false;
    return true;
  });
  r.section(root, "irwls", [&](const std::string& k, const YAML::Node& v) {
    if (k == "tol") c.irwls.tol = r.real(v, "irwls.tol");
    else if (k == "max_iter") c.irwls.max_iter = r.count(v, "irwls.max_iter");
    else if (k == "separation_bound") c.irwls.separation_bound = r.real(v, "irwls.separation_bound");
    else return false;
    return true;
  });
  r.section(root, "chart", [&](const std::string& k, const YAML::Node& v) {
    if (k == "lambda") c.chart.lambda = r.real(v, "chart.lambda");
    else if (k == "l") c.chart.l = r.optional_real(v, "chart.l");
    else if (k == "s") c.chart.s = r.optional_real(v, "chart.s");
    else if (k == "form") c.chart.form = r.parsed(v, "chart.form", parse_limit_form);
    else if (k == "start") {
      if (!v.IsNull()) c.chart.start = r.scalar<TimeIndex>(v, "chart.start", "an integer");
    } else if (k == "reference_end") {
      if (!v.IsNull()) c.chart.reference_end = r.scalar<TimeIndex>(v, "chart.reference_end", "an integer");
    } else return false;
    return true;
  });
  CalibrationConfig& cal = c.calibration;
  r.section(root, "calibration", [&](const std::string& k, const YAML::Node& v) {
    if (k == "target_arl0") cal.target_arl0 = r.real(v, "calibration.target_arl0");
    else if (k == "lambda_grid") cal.lambda_grid = r.reals(v, "calibration.lambda_grid");
    else if (k == "reps") cal.reps = r.count(v, "calibration.reps");
    else if (k == "horizon") cal.horizon = r.count(v, "calibration.horizon");
    else if (k == "reference_length") cal.reference_length = r.count(v, "calibration.reference_length");
    else if (k == "tolerance") cal.tolerance = r.real(v, "calibration.tolerance");
    else if (k == "l_min") cal.l_min = r.real(v, "calibration.l_min");
    else if (k == "l_max") cal.l_max = r.real(v, "calibration.l_max");
    else if (k == "l_initial") cal.l_initial = r.real(v, "calibration.l_initial");
    else if (k == "l_step") cal.l_step = r.real(v, "calibration.l_step");
    else return false;
    return true;
  });
  BenchmarkConfig& b = c.benchmark;
  r.section(root, "benchmark", [&](const std::string& k, const YAML::Node& v) {
    if (k == "families") {
      b.families = r.list<EdgeFamily>(v, k, [&](const YAML::Node& e) { return r.parsed(e, "benchmark.families", parse_family); });
    } else if (k == "scenarios") {
      b.scenarios = r.list<ChangeScenario>(
          v, k, [&](const YAML::Node& e) { return r.parsed(e, "benchmark.scenarios", parse_scenario); });
    } else if (k == "deltas") {
      b.deltas = r.reals(v, "benchmark.deltas");
    } else if (k == "methods") {
      b.methods = r.list<Method>(v, k, [&](const YAML::Node& e) { return r.parsed(e, "benchmark.methods", parse_method); });
    } else if (k == "reps") {
      b.reps = r.count(v, "benchmark.reps");
    } else if (k == "horizon") {
      b.horizon = r.count(v, "benchmark.horizon");
    } else if (k == "charts") {
      if (!v.IsMap()) r.error(v, "benchmark.charts: expected a mapping of method to {lambda, l}");
      for (const auto& m : v) {
        const Method method = r.parsed(m.first, "benchmark.charts", parse_method);
        MethodChart mc = default_method_chart(method);
        if (!m.second.IsMap()) r.error(m.second, "benchmark.charts: expected {lambda, l}");
        for (const auto& f : m.second) {
          const std::string key = f.first.as<std::string>();
          if (key == "lambda") mc.lambda = r.real(f.second, "benchmark.charts.lambda");
          else if (key == "l") mc.l = r.optional_real(f.second, "benchmark.charts.l");
          else r.error(f.first, "unknown key 'benchmark.charts." + key + "'");
        }
        b.charts[method] = mc;
      }
    } else {
      return false;
    }
    return true;
  });
  IngestOptions& in = c.ingest;
  r.section(root, "ingest", [&](const std::string& k, const YAML::Node& v) {
    if (k == "period") in.period = r.real(v, "ingest.period");
    else if (k == "origin") in.origin = r.optional_real(v, "ingest.origin");
    else if (k == "roles") in.roles = r.list<std::string>(v, k, [&](const YAML::Node& e) { return r.text(e, "ingest.roles"); });
    else if (k == "keep_roles") {
      in.keep_roles = r.list<std::string>(v, k, [&](const YAML::Node& e) { return r.text(e, "ingest.keep_roles"); });
    } else if (k == "directed") in.directed = r.flag(v, "ingest.directed");
    else if (k == "family") in.family = r.parsed(v, "ingest.family", parse_family);
    else if (k == "initial_window") in.initial_window = r.count(v, "ingest.initial_window");
    else return false;
    return true;
  });

  try {
    c.validate();
  } catch (const Error& e) {
    fail(e.code(), source + ": " + e.what());
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

namespace {

YAML::Emitter& real(YAML::Emitter& out, double x) { return out << YAML::Value << format_real(x); }

void emit_reals(YAML::Emitter& out, const std::vector<double>& v) {
  out << YAML::Flow << YAML::BeginSeq;
  for (const double x : v) out << format_real(x);
  out << YAML::EndSeq;
}

void emit_vector(YAML::Emitter& out, const Eigen::VectorXd& v) {
  emit_reals(out, std::vector<double>(v.data(), v.data() + v.size()));
}

void emit_matrix(YAML::Emitter& out, const Eigen::MatrixXd& M) {
  const Eigen::MatrixXd off = M - Eigen::MatrixXd(M.diagonal().asDiagonal());
  if (off.size() == 0 || off.cwiseAbs().maxCoeff() == 0.0) {
    emit_vector(out, M.diagonal());
    return;
  }
  out << YAML::BeginSeq;
  for (Eigen::Index r = 0; r < M.rows(); ++r) emit_vector(out, M.row(r).transpose());
  out << YAML::EndSeq;
}

template <class T>
void opt(YAML::Emitter& out, const char* key, const std::optional<T>& v) {
  out << YAML::Key << key << YAML::Value;
  if (!v) {
    out << YAML::Null;
  } else if constexpr (std::is_floating_point_v<T>) {
    out << format_real(*v);
  } else {
    out << *v;
  }
}

}  // namespace

std::string dump_config(const RunConfig& c) {
  YAML::Emitter out;
  out << YAML::BeginMap;

  out << YAML::Key << "run" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "seed" << YAML::Value << c.seed;
  out << YAML::Key << "scale" << YAML::Value << std::string(to_string(c.scale));
  out << YAML::Key << "policy" << YAML::Value << std::string(to_string(c.policy));
  out << YAML::EndMap;

  const SimulationConfig& s = c.simulation;
  out << YAML::Key << "simulation" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "n" << YAML::Value << s.n;
  out << YAML::Key << "directed" << YAML::Value << s.directed;
  out << YAML::Key << "family" << YAML::Value << std::string(to_string(s.family));
  out << YAML::Key << "length" << YAML::Value << s.length;
  out << YAML::Key << "member_count" << YAML::Value << s.member_count;
  out << YAML::Key << "age_low" << YAML::Value << s.age_low;
  out << YAML::Key << "age_high" << YAML::Value << s.age_high;
  out << YAML::Key << "beta0" << YAML::Value;
  emit_vector(out, s.beta0);
  out << YAML::EndMap;

  out << YAML::Key << "model" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "F" << YAML::Value;
  emit_matrix(out, s.model.F);
  out << YAML::Key << "xi" << YAML::Value;
  emit_vector(out, s.model.xi);
  out << YAML::Key << "Q" << YAML::Value;
  emit_matrix(out, s.model.Q);
  out << YAML::EndMap;

  out << YAML::Key << "change" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "enabled" << YAML::Value << c.change.has_value();
  const ChangeSpec ch = c.change.value_or(ChangeSpec{});
  out << YAML::Key << "scenario" << YAML::Value << std::string(to_string(ch.scenario));
  out << YAML::Key << "tau" << YAML::Value << ch.tau;
  out << YAML::Key << "delta";
  real(out, ch.delta);
  out << YAML::Key << "sigma_form" << YAML::Value << std::string(to_string(ch.sigma_form));
  out << YAML::EndMap;

  out << YAML::Key << "predictor" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "method" << YAML::Value << std::string(to_string(c.predictor.method));
  out << YAML::Key << "window" << YAML::Value << c.predictor.window;
  out << YAML::Key << "warmup" << YAML::Value << c.warmup;
  out << YAML::EndMap;

  out << YAML::Key << "irwls" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "tol";
  real(out, c.irwls.tol);
  out << YAML::Key << "max_iter" << YAML::Value << c.irwls.max_iter;
  out << YAML::Key << "separation_bound";
  real(out, c.irwls.separation_bound);
  out << YAML::EndMap;

  out << YAML::Key << "chart" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "lambda";
  real(out, c.chart.lambda);
  opt(out, "l", c.chart.l);
  opt(out, "s", c.chart.s);
  out << YAML::Key << "form" << YAML::Value << std::string(to_string(c.chart.form));
  opt(out, "start", c.chart.start);
  opt(out, "reference_end", c.chart.reference_end);
  out << YAML::EndMap;

  const CalibrationConfig& cal = c.calibration;
  out << YAML::Key << "calibration" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "target_arl0";
  real(out, cal.target_arl0);
  out << YAML::Key << "lambda_grid" << YAML::Value;
  emit_reals(out, cal.lambda_grid);
  out << YAML::Key << "reps" << YAML::Value << c.calibration_reps();
  out << YAML::Key << "horizon" << YAML::Value << c.calibration_horizon();
  out << YAML::Key << "reference_length" << YAML::Value << cal.reference_length;
  out << YAML::Key << "tolerance";
  real(out, cal.tolerance);
  out << YAML::Key << "l_min";
  real(out, cal.l_min);
  out << YAML::Key << "l_max";
  real(out, cal.l_max);
  out << YAML::Key << "l_initial";
  real(out, cal.l_initial);
  out << YAML::Key << "l_step";
  real(out, cal.l_step);
  out << YAML::EndMap;

  const BenchmarkConfig& b = c.benchmark;
  out << YAML::Key << "benchmark" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "families" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (const auto f : b.families) out << std::string(to_string(f));
  out << YAML::EndSeq;
  out << YAML::Key << "scenarios" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (const auto sc : b.scenarios) out << std::string(to_string(sc));
  out << YAML::EndSeq;
  out << YAML::Key << "deltas" << YAML::Value;
  emit_reals(out, b.deltas);
  out << YAML::Key << "methods" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (const auto m : b.methods) out << std::string(to_string(m));
  out << YAML::EndSeq;
  out << YAML::Key << "reps" << YAML::Value << c.benchmark_reps();
  out << YAML::Key << "horizon" << YAML::Value << c.benchmark_horizon();
  out << YAML::Key << "charts" << YAML::Value << YAML::BeginMap;
  for (const auto m : b.methods) {
    const auto it = b.charts.find(m);
    const MethodChart mc = it == b.charts.end() ? default_method_chart(m) : it->second;
    out << YAML::Key << std::string(to_string(m)) << YAML::Value << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "lambda";
    real(out, mc.lambda);
    opt(out, "l", mc.l);
    out << YAML::EndMap;
  }
  out << YAML::EndMap;
  out << YAML::EndMap;

  const IngestOptions& in = c.ingest;
  out << YAML::Key << "ingest" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "period";
  real(out, in.period);
  opt(out, "origin", in.origin);
  out << YAML::Key << "roles" << YAML::Value << YAML::Flow << in.roles;
  out << YAML::Key << "keep_roles" << YAML::Value << YAML::Flow << in.keep_roles;
  out << YAML::Key << "directed" << YAML::Value << in.directed;
  out << YAML::Key << "family" << YAML::Value << std::string(to_string(in.family));
  out << YAML::Key << "initial_window" << YAML::Value << in.initial_window;
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace netmon
