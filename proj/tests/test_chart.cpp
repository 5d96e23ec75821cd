#include <doctest.h>

#include <random>

#include "netmon/chart.hpp"
#include "netmon/experiment.hpp"
#include "netmon/monitor.hpp"
#include "oracles.hpp"

using namespace netmon;

TEST_CASE("mean_residual examples") {
  CHECK(mean_residual(std::vector<double>{1, -1}) == 0.0);
  CHECK(mean_residual(std::vector<double>{1, 1, 1}) == 1.0);
  CHECK_THROWS_AS(mean_residual(std::vector<double>{}), Error);
  std::mt19937_64 rng(8);
  std::normal_distribution<double> normal;
  for (int k = 0; k < 50; ++k) {
    Eigen::VectorXd r(2450);
    for (auto& v : r) v = normal(rng);
    CHECK(std::abs(mean_residual(r)) < 4.0 / std::sqrt(2450.0));
  }
}

TEST_CASE("ewma_step examples") {
  const EwmaChart chart = make_chart(0.1, 3.0, 1.0);
  const StepResult first = ewma_step(chart, 1.0, 1);
  CHECK(first.point.z == doctest::Approx(0.1));
  CHECK(first.chart.steps == 1);
  CHECK(chart.steps == 0);

  EwmaChart shewhart = make_chart(1.0, 3.0, 1.0);
  advance(shewhart, 0.7, 1);
  CHECK(advance(shewhart, -1.25, 2).z == -1.25);

  EwmaChart far = make_chart(0.1, 2.44, 1.0);
  ChartPoint pt;
  for (int k = 0; k < 2000; ++k) pt = advance(far, 0.0, k + 1);
  CHECK(pt.ucl == doctest::Approx(2.44 * std::sqrt(0.1 / 1.9)).epsilon(1e-12));
  CHECK(pt.ucl == doctest::Approx(0.5598).epsilon(1e-4));
  CHECK(pt.lcl == -pt.ucl);
}

TEST_CASE("limit forms") {
  CHECK(limit_factor(0.1, 1, LimitForm::standard) == doctest::Approx(0.1));
  CHECK(limit_factor(0.1, 1, LimitForm::printed) == doctest::Approx(std::sqrt(0.1 / 0.9 * (1 - 0.81))));
  CHECK(parse_limit_form("printed") == LimitForm::printed);
  CHECK_THROWS_AS(make_chart(1.0, 3.0, 1.0, LimitForm::printed), Error);
  CHECK_THROWS_AS(make_chart(0.0, 3.0, 1.0), Error);
  CHECK_THROWS_AS(make_chart(0.1, 0.0, 1.0), Error);
  CHECK_THROWS_AS(make_chart(0.1, 3.0, -1.0), Error);
}

TEST_CASE("EWMA recursion matches a direct evaluation and is linear") {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> normal(0.0, 0.05);
  std::vector<double> r(300);
  for (auto& v : r) v = normal(rng);
  for (double lambda : {0.05, 0.1, 0.3, 1.0}) {
    const std::vector<double> expect = oracle::ewma(r, lambda);
    for (double c : {0.5, 3.0, 17.0}) {
      EwmaChart base = make_chart(lambda, 2.5, 0.05);
      EwmaChart scaled = make_chart(lambda, 2.5, 0.05 * c);
      for (std::size_t t = 0; t < r.size(); ++t) {
        const ChartPoint a = advance(base, r[t], static_cast<TimeIndex>(t));
        const ChartPoint b = advance(scaled, c * r[t], static_cast<TimeIndex>(t));
        CHECK(a.z == doctest::Approx(expect[t]).epsilon(1e-12));
        CHECK(b.z == doctest::Approx(c * a.z).epsilon(1e-10));
        if (std::abs(std::abs(a.z) - a.ucl) > 1e-9 * a.ucl) CHECK(a.signal == b.signal);
      }
    }
  }
}

TEST_CASE("control limits grow monotonically to their asymptote") {
  for (LimitForm form : {LimitForm::standard, LimitForm::printed}) {
    for (double lambda : {0.05, 0.1, 0.2, 0.3, 0.9}) {
      const double asym = std::sqrt((form == LimitForm::standard ? lambda / (2 - lambda) : lambda / (1 - lambda)));
      double prev = 0.0;
      for (std::size_t k = 1; k <= 3000; ++k) {
        const double f = limit_factor(lambda, k, form);
        CHECK(f >= prev);
        CHECK(f <= asym * (1 + 1e-15));
        prev = f;
      }
      CHECK(limit_factor(lambda, 1, form) < asym);
      CHECK(prev == doctest::Approx(asym).epsilon(1e-12));
    }
  }
}

TEST_CASE("estimate_sigma examples") {
  const std::vector<double> constant(40, 0.25);
  const SigmaEstimate flat = estimate_sigma(constant);
  CHECK(flat.s == 0.0);
  CHECK(flat.warning.has_value());

  std::vector<double> alt;
  for (int k = 0; k < 30; ++k) alt.push_back(k % 2 ? -1.0 : 1.0);
  CHECK(estimate_sigma(alt).s == doctest::Approx(oracle::sample_sd(alt)).epsilon(1e-14));
  // The four-point example from the definition, checked through the oracle
  // because the estimator itself refuses series shorter than 30.
  CHECK(oracle::sample_sd({1, -1, 1, -1}) == doctest::Approx(1.1547).epsilon(1e-4));
  try {
    estimate_sigma(std::vector<double>{1, -1, 1, -1});
    FAIL("short reference accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::insufficient_reference);
  }

  std::mt19937_64 rng(21);
  std::normal_distribution<double> normal;
  std::vector<double> iid(10000);
  for (auto& v : iid) v = normal(rng);
  const double s = estimate_sigma(iid).s;
  CHECK(s >= 0.97);
  CHECK(s <= 1.03);
}

TEST_CASE("a residual-free trace never signals") {
  ResidualTrace trace;
  for (TimeIndex t = 1; t <= 100; ++t) {
    trace.t.push_back(t);
    trace.r_bar.push_back(0.0);
  }
  const auto points = apply_chart(trace, make_chart(0.1, 2.44, 0.01), 21);
  REQUIRE(points.size() == 80);
  CHECK(points.front().t == 21);
  for (const ChartPoint& p : points) {
    CHECK(p.z == 0.0);
    CHECK_FALSE(p.signal);
  }
}

TEST_CASE("a sustained global shift is detected soon after it starts") {
  ExperimentDesign design;
  design.sim = default_simulation_config(EdgeFamily::bernoulli);
  design.predictor.method = Method::dynamic;
  const double s = estimate_sigma(reference_series(design, 1000, 5)).s;
  const EwmaChart chart = make_chart(0.1, 2.44, s);

  int quick = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    SimulationConfig sim = design.sim;
    sim.length = 80;
    sim.seed = seed;
    const SimulatedStream stream = simulate_stream(sim, scenario_change(ChangeScenario::global, 2.0, 50));
    const auto points = monitor_stream(stream.stream, design.predictor, sim.model, chart, design.start());
    for (const ChartPoint& p : points) {
      if (p.t >= 50 && p.signal) {
        quick += p.t <= 60;
        break;
      }
    }
  }
  CHECK(quick >= 9);
}
