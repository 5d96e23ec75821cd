// Serial reference vs OpenMP replication loop, and the two EKF update paths.
// Results are identical by construction; only wall time differs.

#include <benchmark/benchmark.h>

#include "netmon/experiment.hpp"
#include "netmon/simulator.hpp"

using namespace netmon;

namespace {

ExperimentDesign small_design(Method method) {
  ExperimentDesign d;
  d.sim = default_simulation_config(EdgeFamily::bernoulli);
  d.sim.n = 24;
  d.predictor.method = method;
  d.predictor.window = 5;
  return d;
}

void run_lengths(benchmark::State& state, ExecutionPolicy policy) {
  const auto method = static_cast<Method>(state.range(0));
  const ExperimentDesign d = small_design(method);
  const EwmaChart chart = make_chart(0.1, 3.0, estimate_sigma(reference_series(d, 300, 1)).s);
  const auto change = scenario_change(ChangeScenario::global, 1.0, 50);
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_arl(d, change, chart, 100, 8, 17, policy));
  }
  state.SetLabel(std::string(to_string(method)) + ", " + std::to_string(parallel_threads()) + " thread(s)");
}

void BM_ArlSerial(benchmark::State& state) { run_lengths(state, ExecutionPolicy::serial); }
void BM_ArlParallel(benchmark::State& state) { run_lengths(state, ExecutionPolicy::parallel); }

void ekf(benchmark::State& state, UpdateStrategy strategy) {
  SimulationConfig c = default_simulation_config(EdgeFamily::bernoulli);
  c.n = static_cast<std::size_t>(state.range(0));
  Rng rng(5);
  const AttributeMatrix X = gen_attributes(c, rng);
  const FilterState prior{1, c.beta0, 0.05 * Eigen::MatrixXd::Identity(3, 3), FilterPhase::predicted};
  const PredictedObservation pred = predict_observation(prior, X.values, EdgeFamily::bernoulli);
  const Eigen::VectorXd w = sample_weights(pred.w_pred, EdgeFamily::bernoulli, rng);
  for (auto _ : state) benchmark::DoNotOptimize(ekf_update(prior, pred, w, strategy));
  state.counters["m"] = static_cast<double>(X.values.rows());
}

void BM_EkfBatch(benchmark::State& state) { ekf(state, UpdateStrategy::batch); }
void BM_EkfSequential(benchmark::State& state) { ekf(state, UpdateStrategy::sequential); }

}  // namespace

BENCHMARK(BM_ArlSerial)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ArlParallel)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EkfBatch)->Arg(10)->Arg(20)->Arg(30)->Arg(50)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_EkfSequential)->Arg(10)->Arg(20)->Arg(30)->Arg(50)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
