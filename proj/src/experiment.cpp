#include "netmon/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace netmon {

std::string_view to_string(ExecutionPolicy policy) noexcept {
  return policy == ExecutionPolicy::serial ? "serial" : "parallel";
}

ExecutionPolicy parse_policy(std::string_view text) {
  if (text == "serial") return ExecutionPolicy::serial;
  if (text == "parallel") return ExecutionPolicy::parallel;
  fail(ErrorCode::parse, "unknown execution policy '" + std::string(text) + "'");
}

void ExperimentDesign::validate() const {
  sim.validate();
  predictor.validate();
  if (warmup < 1) fail(ErrorCode::invalid_argument, "warm-up must contain at least one snapshot");
}

namespace {

// A simulated stream with its predictor, advanced one monitored snapshot at
// a time after the warm-up.
class MonitoredRun {
 public:
  MonitoredRun(const ExperimentDesign& design, const std::optional<ChangeSpec>& change, std::uint64_t seed)
      : gen_(design.sim, change, seed), predictor_(make_predictor(design.predictor, design.sim.model, design.irwls)) {
    for (std::size_t k = 0; k < design.warmup; ++k) predictor_->observe(gen_.next(), gen_.attributes());
  }

  TimeIndex t() const { return gen_.t(); }

  double step() {
    const NetworkSnapshot& snap = gen_.next();
    const double r_bar = mean_pearson_residual(snap.weights, predictor_->predict(*gen_.attributes()), snap.family);
    predictor_->observe(snap, gen_.attributes());
    return r_bar;
  }

 private:
  StreamGenerator gen_;
  std::unique_ptr<Predictor> predictor_;
};

EwmaChart fresh(const EwmaChart& chart) {
  EwmaChart c = chart;
  c.z = 0.0;
  c.steps = 0;
  c.validate();
  return c;
}

}  // namespace

RunLengthResult run_length(const ExperimentDesign& design, const std::optional<ChangeSpec>& change,
                           const EwmaChart& chart, std::size_t horizon, std::uint64_t base_seed,
                           std::uint64_t replication, std::size_t max_attempts) {
  design.validate();
  if (horizon < 1) fail(ErrorCode::invalid_argument, "horizon must be at least 1");
  if (change) {
    change->validate();
    if (change->tau < design.start()) {
      fail(ErrorCode::invalid_argument, "change time precedes the monitoring start");
    }
  }
  RunLengthResult out;
  out.horizon = horizon;
  const TimeIndex origin = change ? change->tau : design.start();

  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    MonitoredRun run(design, change, replication_seed(base_seed, replication, attempt));
    EwmaChart c = fresh(chart);
    bool false_alarm = false;
    while (true) {
      const double r_bar = run.step();
      const ChartPoint pt = advance(c, r_bar, run.t());
      if (pt.t < origin) {
        if (pt.signal) {
          false_alarm = true;
          break;
        }
        continue;
      }
      const auto k = static_cast<std::size_t>(pt.t - origin + 1);
      if (pt.signal) {
        out.rl = k;
        return out;
      }
      if (k >= horizon) {
        out.rl = horizon;
        out.censored = true;
        return out;
      }
    }
    if (false_alarm) ++out.discarded;
  }
  fail(ErrorCode::invalid_argument, "every one of " + std::to_string(max_attempts) +
                                        " attempts alarmed before the change time");
}

ArlEstimate summarize(const std::vector<RunLengthResult>& runs) {
  ArlEstimate est;
  est.reps = runs.size();
  if (runs.empty()) return est;
  double sum = 0.0;
  for (const auto& r : runs) {
    sum += static_cast<double>(r.rl);
    est.censored += r.censored ? 1 : 0;
    est.discarded += r.discarded;
  }
  const double n = static_cast<double>(runs.size());
  est.arl = sum / n;
  if (runs.size() >= 2) {
    double ss = 0.0;
    for (const auto& r : runs) ss += (static_cast<double>(r.rl) - est.arl) * (static_cast<double>(r.rl) - est.arl);
    est.serl = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  return est;
}

ArlEstimate evaluate_arl(const ExperimentDesign& design, const std::optional<ChangeSpec>& change,
                         const EwmaChart& chart, std::size_t horizon, std::size_t reps, std::uint64_t base_seed,
                         ExecutionPolicy policy) {
  if (reps < 1) fail(ErrorCode::invalid_argument, "need at least one replication");
  std::vector<RunLengthResult> runs(reps);
  for_each_index(policy, reps,
                 [&](std::size_t i) { runs[i] = run_length(design, change, chart, horizon, base_seed, i); });
  return summarize(runs);
}

std::vector<double> reference_series(const ExperimentDesign& design, std::size_t length, std::uint64_t seed) {
  design.validate();
  MonitoredRun run(design, std::nullopt, seed);
  std::vector<double> out(length);
  for (double& r : out) r = run.step();
  return out;
}

std::uint64_t reference_seed(std::uint64_t base_seed) { return base_seed + 0x9E3779B97F4A7C15ULL; }

struct ReplicationPool::Replication {
  std::unique_ptr<MonitoredRun> run;
  std::vector<double> r_bar;
};

ReplicationPool::ReplicationPool(const ExperimentDesign& design, std::size_t reps, std::size_t horizon,
                                 std::uint64_t base_seed)
    : design_(design), horizon_(horizon), base_seed_(base_seed), reps_(reps) {
  design_.validate();
  if (reps < 1 || horizon < 1) fail(ErrorCode::invalid_argument, "pool needs reps >= 1 and horizon >= 1");
}

ReplicationPool::~ReplicationPool() = default;

std::size_t ReplicationPool::simulated_steps() const {
  std::size_t total = 0;
  for (const auto& r : reps_) total += r.r_bar.size();
  return total;
}

ArlEstimate ReplicationPool::evaluate(const EwmaChart& chart, ExecutionPolicy policy) {
  std::vector<RunLengthResult> runs(reps_.size());
  const TimeIndex start = design_.start();
  for_each_index(policy, reps_.size(), [&](std::size_t i) {
    Replication& rep = reps_[i];
    EwmaChart c = fresh(chart);
    RunLengthResult& out = runs[i];
    out.horizon = horizon_;
    for (std::size_t k = 0; k < horizon_; ++k) {
      if (k == rep.r_bar.size()) {
        if (!rep.run) rep.run = std::make_unique<MonitoredRun>(design_, std::nullopt, replication_seed(base_seed_, i));
        rep.r_bar.push_back(rep.run->step());
        if (rep.r_bar.size() == horizon_) rep.run.reset();
      }
      if (advance(c, rep.r_bar[k], start + static_cast<TimeIndex>(k)).signal) {
        out.rl = k + 1;
        return;
      }
    }
    out.rl = horizon_;
    out.censored = true;
  });
  return summarize(runs);
}

void CalibrationOptions::validate() const {
  if (!(target_arl0 >= 1.0) || !std::isfinite(target_arl0)) {
    fail(ErrorCode::invalid_argument, "target ARL0 must be finite and >= 1");
  }
  if (reps < 100) fail(ErrorCode::invalid_argument, "calibration needs at least 100 replications");
  if (static_cast<double>(horizon) < target_arl0) {
    fail(ErrorCode::invalid_argument, "horizon must not be shorter than the target ARL0");
  }
  if (lambda_grid.empty()) fail(ErrorCode::invalid_argument, "lambda grid is empty");
  for (const double lambda : lambda_grid) {
    if (!(lambda > 0.0 && lambda <= 1.0)) fail(ErrorCode::invalid_argument, "lambda must lie in (0, 1]");
  }
  if (!(l_min > 0.0 && l_min < l_max)) fail(ErrorCode::invalid_argument, "invalid l search range");
  if (!(tolerance > 0.0)) fail(ErrorCode::invalid_argument, "tolerance must be positive");
  if (!(l_step > 0.0)) fail(ErrorCode::invalid_argument, "l step must be positive");
}

namespace {

CalibrationRow search_l(ReplicationPool& pool, double lambda, double s, const CalibrationOptions& o) {
  CalibrationRow best;
  best.lambda = lambda;
  best.s = s;
  double best_gap = std::numeric_limits<double>::infinity();
  const double band = o.tolerance * o.target_arl0;

  auto eval = [&](double l) {
    const ArlEstimate est = pool.evaluate(make_chart(lambda, l, s, o.form), o.policy);
    const double gap = std::abs(est.arl - o.target_arl0);
    if (gap < best_gap) {
      best_gap = gap;
      best.l = l;
      best.arl0 = est;
      best.within_tolerance = gap <= band;
    }
    return est.arl;
  };
  auto range_error = [&](const char* side) {
    fail(ErrorCode::calibration_range, std::string("target ARL0 is not bracketed: ") + side +
                                           " end of [" + std::to_string(o.l_min) + ", " + std::to_string(o.l_max) +
                                           "] at lambda=" + std::to_string(lambda));
  };

  double l = std::clamp(o.l_initial, o.l_min, o.l_max);
  double arl = eval(l);
  if (best.within_tolerance) return best;

  double lo = o.l_min;
  double hi = o.l_max;
  if (arl < o.target_arl0) {
    lo = l;
    while (true) {
      const double next = std::min(l + o.l_step, o.l_max);
      arl = eval(next);
      if (best.within_tolerance) return best;
      if (arl >= o.target_arl0) {
        hi = next;
        break;
      }
      if (next >= o.l_max) range_error("upper");
      lo = l = next;
    }
  } else {
    hi = l;
    while (true) {
      const double next = std::max(l - o.l_step, o.l_min);
      arl = eval(next);
      if (best.within_tolerance) return best;
      if (arl < o.target_arl0) {
        lo = next;
        break;
      }
      if (next <= o.l_min) range_error("lower");
      hi = l = next;
    }
  }

  for (int iter = 0; iter < 60 && hi - lo > 1e-5; ++iter) {
    const double mid = 0.5 * (lo + hi);
    arl = eval(mid);
    if (best.within_tolerance) return best;
    (arl < o.target_arl0 ? lo : hi) = mid;
  }
  return best;
}

}  // namespace

std::vector<CalibrationRow> calibrate(const ExperimentDesign& design, const CalibrationOptions& options) {
  options.validate();
  design.validate();
  double s = 0.0;
  if (options.s) {
    s = *options.s;
  } else {
    const auto ref = reference_series(design, options.reference_length, reference_seed(options.seed));
    s = estimate_sigma(ref).s;
  }
  ReplicationPool pool(design, options.reps, options.horizon, options.seed);
  std::vector<CalibrationRow> rows;
  for (const double lambda : options.lambda_grid) rows.push_back(search_l(pool, lambda, s, options));
  return rows;
}

}  // namespace netmon
