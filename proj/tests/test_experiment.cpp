#include <doctest.h>

#include "netmon/experiment.hpp"
#include "netmon/monitor.hpp"

using namespace netmon;

namespace {

// Smaller networks keep these tests quick. n = 24 gives m = 552, past the
// sequential-update threshold; below it the m x m batch solve dominates.
ExperimentDesign small_design(Method method, EdgeFamily family = EdgeFamily::bernoulli) {
  ExperimentDesign d;
  d.sim = default_simulation_config(family);
  d.sim.n = 24;
  d.predictor.method = method;
  d.predictor.window = 5;
  return d;
}

double small_sigma(const ExperimentDesign& d) { return estimate_sigma(reference_series(d, 400, 99)).s; }

}  // namespace

TEST_CASE("zero-width limits signal immediately") {
  const ExperimentDesign d = small_design(Method::dynamic);
  const EwmaChart chart = make_chart(0.1, 2.44, 0.0);
  const RunLengthResult a = run_length(d, std::nullopt, chart, 100, 1, 0);
  CHECK(a.rl == 1);
  CHECK_FALSE(a.censored);
}

TEST_CASE("censoring at the horizon") {
  const ExperimentDesign d = small_design(Method::dynamic);
  const EwmaChart chart = make_chart(0.1, 50.0, 1.0);
  const RunLengthResult r = run_length(d, std::nullopt, chart, 30, 1, 0);
  CHECK(r.censored);
  CHECK(r.rl == 30);
  CHECK(r.horizon == 30);
}

TEST_CASE("run lengths with a change are conditioned on no earlier alarm") {
  const ExperimentDesign d = small_design(Method::dynamic);
  // A tight chart makes pre-change alarms common so that regeneration is exercised.
  const EwmaChart chart = make_chart(0.2, 1.6, small_sigma(d));
  const ChangeSpec change = scenario_change(ChangeScenario::global, 1.0, 50);
  std::size_t total_discarded = 0;
  for (std::uint64_t rep = 0; rep < 12; ++rep) {
    const RunLengthResult r = run_length(d, change, chart, 200, 7, rep);
    total_discarded += r.discarded;
    REQUIRE(r.rl >= 1);
    for (std::size_t attempt = 0; attempt <= r.discarded; ++attempt) {
      SimulationConfig sim = d.sim;
      sim.seed = replication_seed(7, rep, attempt);
      sim.length = static_cast<std::size_t>(change.tau) + r.rl - 1;
      const SimulatedStream s = simulate_stream(sim, change);
      const auto points = monitor_stream(s.stream, d.predictor, sim.model, chart, d.start());
      bool early = false;
      for (const ChartPoint& p : points) early = early || (p.t < change.tau && p.signal);
      if (attempt < r.discarded) {
        CHECK(early);
        continue;
      }
      CHECK_FALSE(early);
      if (!r.censored) {
        CHECK(points.back().t == change.tau + static_cast<TimeIndex>(r.rl) - 1);
        CHECK(points.back().signal);
        for (std::size_t k = 0; k + 1 < points.size(); ++k) CHECK_FALSE((points[k].t >= change.tau && points[k].signal));
      }
    }
  }
  CHECK(total_discarded > 0);
}

TEST_CASE("serial and parallel replications agree exactly") {
  for (Method method : {Method::dynamic, Method::static_fit, Method::sliding, Method::approximate}) {
    const ExperimentDesign d = small_design(method);
    const EwmaChart chart = make_chart(0.1, 2.0, small_sigma(d));
    const auto change = scenario_change(ChangeScenario::global, 1.5, 30);
    const ArlEstimate a = evaluate_arl(d, change, chart, 100, 12, 3, ExecutionPolicy::serial);
    const ArlEstimate b = evaluate_arl(d, change, chart, 100, 12, 3, ExecutionPolicy::parallel);
    CHECK(a.arl == b.arl);
    CHECK(a.serl == b.serl);
    CHECK(a.discarded == b.discarded);
    CHECK(a.censored == b.censored);
  }
}

TEST_CASE("replication pool reproduces independent in-control runs") {
  const ExperimentDesign d = small_design(Method::dynamic);
  const double s = small_sigma(d);
  ReplicationPool pool(d, 20, 150, 11);
  for (double l : {1.5, 2.5, 2.0}) {
    const EwmaChart chart = make_chart(0.1, l, s);
    const ArlEstimate pooled = pool.evaluate(chart, ExecutionPolicy::serial);
    const ArlEstimate direct = evaluate_arl(d, std::nullopt, chart, 150, 20, 11, ExecutionPolicy::serial);
    CHECK(pooled.arl == direct.arl);
    CHECK(pooled.censored == direct.censored);
  }
}

TEST_CASE("in-control ARL increases with the limit multiplier") {
  const ExperimentDesign d = small_design(Method::dynamic);
  const double s = small_sigma(d);
  ReplicationPool pool(d, 100, 600, 5);
  double prev = 0.0;
  for (double l : {1.0, 2.0, 3.0, 4.0}) {
    const double arl = pool.evaluate(make_chart(0.1, l, s)).arl;
    MESSAGE("l=" << l << " ARL0=" << arl);
    CHECK(arl > prev);
    prev = arl;
  }
}

TEST_CASE("summaries") {
  std::vector<RunLengthResult> runs{{4, false, 10, 0}, {10, true, 10, 2}, {1, false, 10, 1}};
  const ArlEstimate e = summarize(runs);
  CHECK(e.arl == doctest::Approx(5.0));
  CHECK(e.serl == doctest::Approx(std::sqrt(21.0) / std::sqrt(3.0)));
  CHECK(e.censored == 1);
  CHECK(e.discarded == 3);
  const ArlEstimate single = summarize({runs[0]});
  CHECK_FALSE(single.serl_available());
  CHECK(std::isnan(single.serl));
}

TEST_CASE("calibration reaches the target on a small problem") {
  const ExperimentDesign d = small_design(Method::dynamic);
  CalibrationOptions o;
  o.target_arl0 = 40;
  o.lambda_grid = {0.3};
  o.reps = 100;
  o.horizon = 400;
  o.reference_length = 300;
  o.seed = 8;
  o.tolerance = 0.1;
  const auto rows = calibrate(d, o);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].within_tolerance);
  CHECK(std::abs(rows[0].arl0.arl - 40) <= 4.0);
  CHECK(rows[0].l > o.l_min);
  CHECK(rows[0].l < o.l_max);

  o.target_arl0 = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(calibrate(d, o), Error);
  o.target_arl0 = 40;
  o.reps = 50;
  CHECK_THROWS_AS(calibrate(d, o), Error);
  o.reps = 100;
  o.l_max = 0.6;
  o.s = 1.0;
  try {
    calibrate(d, o);
    FAIL("unreachable target accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::calibration_range);
  }
}

TEST_CASE("design validation") {
  ExperimentDesign d = small_design(Method::dynamic);
  const EwmaChart chart = make_chart(0.1, 2.0, 1.0);
  CHECK_THROWS_AS(run_length(d, scenario_change(ChangeScenario::global, 1.0, 10), chart, 100, 1, 0), Error);
  d.warmup = 0;
  CHECK_THROWS_AS(d.validate(), Error);
}
