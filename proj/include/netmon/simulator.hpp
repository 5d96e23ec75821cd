#pragma once

// Generative engine for simulated attributed network streams: time-invariant
// age-gap / association-membership attributes, AR(1) coefficient dynamics,
// an optional sustained coefficient shift, and per-edge Bernoulli or Poisson
// sampling.

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "netmon/filter.hpp"
#include "netmon/network.hpp"

namespace netmon {

using Rng = std::mt19937_64;

struct SimulationConfig {
  std::size_t n = 50;
  bool directed = true;
  EdgeFamily family = EdgeFamily::bernoulli;
  Eigen::VectorXd beta0;
  StateSpaceModel model;
  std::size_t length = 100;
  std::size_t member_count = 5;
  int age_low = 20;
  int age_high = 40;
  std::uint64_t seed = 1;

  void validate() const;
};

/// beta0 = [-1, 0.05, 0], F = 0.7 I, xi = [-0.6, 0.03, 0],
/// Q = diag(0.01, 0.0001, 0.05), 50 nodes, 5 association members, ages 20-40.
SimulationConfig default_simulation_config(EdgeFamily family);

enum class ChangeScenario { global, local };
enum class SigmaForm { printed, stationary };

std::string_view to_string(ChangeScenario scenario) noexcept;
ChangeScenario parse_scenario(std::string_view text);
std::string_view to_string(SigmaForm form) noexcept;
SigmaForm parse_sigma_form(std::string_view text);

struct ChangeSpec {
  ChangeScenario scenario = ChangeScenario::global;
  TimeIndex tau = 50;
  double delta = 0.0;
  int sign = -1;
  SigmaForm sigma_form = SigmaForm::printed;

  /// 0-based coefficient index: 1 (age-gap effect) for global, 2 (membership) for local.
  std::size_t param_index() const { return scenario == ChangeScenario::global ? 1 : 2; }
  void validate() const;
};

/// Global changes lower the age-gap coefficient, local ones raise the
/// membership coefficient.
ChangeSpec scenario_change(ChangeScenario scenario, double delta, TimeIndex tau = 50);

/// sqrt(Q_ii) / (1 - F_ii) in printed form, sqrt(Q_ii / (1 - F_ii^2)) in
/// stationary form. Requires |F_ii| < 1.
double sigma_param(double q_ii, double f_ii, SigmaForm form = SigmaForm::printed);

/// Offset added to the state at tau and every later step.
Eigen::VectorXd change_offset(const ChangeSpec& change, const StateSpaceModel& model);

/// Ages uniform on the integer range; columns [1, |a_i - a_j|, member adjacency].
AttributeMatrix gen_attributes(const SimulationConfig& config, Rng& rng);
AttributeMatrix gen_attributes(const SimulationConfig& config);

class GaussianNoise {
 public:
  explicit GaussianNoise(const Eigen::MatrixXd& covariance);
  Eigen::VectorXd draw(Rng& rng) const;

 private:
  Eigen::MatrixXd factor_;
  bool diagonal_ = true;
};

/// F beta_prev + xi + eps (+ offset when given).
Eigen::VectorXd evolve_state(const Eigen::VectorXd& beta_prev, const StateSpaceModel& model,
                             const Eigen::VectorXd* offset, Rng& rng);
Eigen::VectorXd evolve_state(const Eigen::VectorXd& beta_prev, const StateSpaceModel& model,
                             const Eigen::VectorXd* offset, const GaussianNoise& noise, Rng& rng);

/// Independent draws per edge from the family with the given means.
Eigen::VectorXd sample_weights(const Eigen::VectorXd& theta, EdgeFamily family, Rng& rng);
Eigen::VectorXd sample_snapshot(const Eigen::VectorXd& beta, const Eigen::MatrixXd& X, EdgeFamily family, Rng& rng);

/// Seeds for one replication. Attempt > 0 is used when a replication is
/// regenerated after a pre-change false alarm.
std::uint64_t replication_seed(std::uint64_t base_seed, std::uint64_t replication, std::uint64_t attempt = 0);

/// Step-wise stream source; snapshot times run 1, 2, ...
class StreamGenerator {
 public:
  StreamGenerator(SimulationConfig config, std::optional<ChangeSpec> change, std::uint64_t seed);

  const NetworkSnapshot& next();

  const std::shared_ptr<const AttributeMatrix>& attributes() const { return attributes_; }
  const Eigen::VectorXd& beta() const { return beta_; }
  const NetworkSnapshot& current() const { return snapshot_; }
  TimeIndex t() const { return t_; }
  const SimulationConfig& config() const { return config_; }

 private:
  SimulationConfig config_;
  std::optional<ChangeSpec> change_;
  Eigen::VectorXd offset_;
  GaussianNoise noise_;
  Rng state_rng_;
  Rng sample_rng_;
  std::shared_ptr<const AttributeMatrix> attributes_;
  Eigen::VectorXd beta_;
  NetworkSnapshot snapshot_;
  TimeIndex t_ = 0;
};

struct SimulatedStream {
  NetworkStream stream;
  std::vector<Eigen::VectorXd> beta;  // true beta_t aligned with the snapshots
};

SimulatedStream simulate_stream(const SimulationConfig& config, const std::optional<ChangeSpec>& change = {});

}  // namespace netmon
