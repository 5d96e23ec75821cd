#pragma once

// Monte Carlo run-length machinery: in-control sigma from a reference
// stream, ARL estimation with and without an injected change, and the
// (l, lambda) calibration that hits a target in-control ARL.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "netmon/chart.hpp"
#include "netmon/parallel.hpp"
#include "netmon/predictor.hpp"
#include "netmon/simulator.hpp"

namespace netmon {

/// A simulated monitoring setup. Replications draw their own streams from
/// `sim` (its seed is ignored); the predictor observes `warmup` snapshots
/// before the chart starts at t = warmup + 1.
struct ExperimentDesign {
  SimulationConfig sim;
  PredictorKind predictor;
  std::size_t warmup = 20;
  IrwlsOptions irwls;

  TimeIndex start() const { return static_cast<TimeIndex>(warmup) + 1; }
  void validate() const;
};

struct RunLengthResult {
  std::size_t rl = 0;
  bool censored = false;
  std::size_t horizon = 0;
  std::size_t discarded = 0;  // regenerated replications that alarmed before the change
};

/// One replication. Without a change the run length counts from the
/// monitoring start; with one it is (first signal at or after tau) - tau + 1,
/// regenerating the stream whenever the chart alarms before tau. Run lengths
/// are censored at `horizon`.
RunLengthResult run_length(const ExperimentDesign& design, const std::optional<ChangeSpec>& change,
                           const EwmaChart& chart, std::size_t horizon, std::uint64_t base_seed,
                           std::uint64_t replication, std::size_t max_attempts = 10000);

struct ArlEstimate {
  double arl = 0.0;
  double serl = std::numeric_limits<double>::quiet_NaN();  // NaN when reps < 2
  std::size_t reps = 0;
  std::size_t censored = 0;
  std::size_t discarded = 0;

  bool serl_available() const { return reps >= 2; }
};

ArlEstimate summarize(const std::vector<RunLengthResult>& runs);

/// Mean and standard error of run_length over `reps` replications.
/// Replication i uses seed replication_seed(base_seed, i).
ArlEstimate evaluate_arl(const ExperimentDesign& design, const std::optional<ChangeSpec>& change,
                         const EwmaChart& chart, std::size_t horizon, std::size_t reps, std::uint64_t base_seed,
                         ExecutionPolicy policy = ExecutionPolicy::parallel);

/// In-control r-bar series of one long stream (after warm-up).
std::vector<double> reference_series(const ExperimentDesign& design, std::size_t length, std::uint64_t seed);

/// Seed of the reference stream associated with a calibration base seed.
std::uint64_t reference_seed(std::uint64_t base_seed);

struct CalibrationOptions {
  double target_arl0 = 200.0;
  std::vector<double> lambda_grid{0.05, 0.1, 0.2, 0.3};
  std::size_t reps = 500;
  std::size_t horizon = 2000;
  std::size_t reference_length = 2000;
  double tolerance = 0.05;  // relative band around the target
  double l_min = 0.5;
  double l_max = 6.0;
  double l_initial = 2.5;
  double l_step = 0.25;
  std::uint64_t seed = 1;
  LimitForm form = LimitForm::standard;
  std::optional<double> s;  // skip the reference stream when given
  ExecutionPolicy policy = ExecutionPolicy::parallel;

  void validate() const;
};

struct CalibrationRow {
  double lambda = 0.0;
  double l = 0.0;
  double s = 0.0;
  ArlEstimate arl0;
  bool within_tolerance = false;
};

/// For each lambda: bracket then bisect l on [l_min, l_max] until the
/// estimated ARL0 is within tolerance of the target. All l values are
/// evaluated on the same replications, so the estimate is monotone in l.
std::vector<CalibrationRow> calibrate(const ExperimentDesign& design, const CalibrationOptions& options);

/// Resumable in-control replications shared across chart settings. The
/// r-bar sequence of a replication does not depend on (l, lambda), so each
/// replication is simulated once, only as far as the longest run requested.
class ReplicationPool {
 public:
  ReplicationPool(const ExperimentDesign& design, std::size_t reps, std::size_t horizon, std::uint64_t base_seed);
  ~ReplicationPool();
  ReplicationPool(const ReplicationPool&) = delete;
  ReplicationPool& operator=(const ReplicationPool&) = delete;

  ArlEstimate evaluate(const EwmaChart& chart, ExecutionPolicy policy = ExecutionPolicy::parallel);
  std::size_t simulated_steps() const;

 private:
  struct Replication;
  ExperimentDesign design_;
  std::size_t horizon_;
  std::uint64_t base_seed_;
  std::vector<Replication> reps_;
};

}  // namespace netmon
