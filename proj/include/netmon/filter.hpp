#pragma once

// State-space model over GLM coefficients and the Kalman-type recursions
// that track them: the extended Kalman filter with exact per-family
// Jacobians, and the linear filter that treats per-snapshot GLM estimates
// as noisy measurements of the state.

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "netmon/glm.hpp"
#include "netmon/network.hpp"

namespace netmon {

/// beta_t = F beta_{t-1} + xi + eps_t,  eps_t ~ N(0, Q).
struct StateSpaceModel {
  Eigen::MatrixXd F;
  Eigen::VectorXd xi;
  Eigen::MatrixXd Q;
  EdgeFamily family = EdgeFamily::bernoulli;

  std::size_t dim() const { return static_cast<std::size_t>(xi.size()); }
  /// Throws unless shapes agree and Q is symmetric PSD.
  void validate() const;
};

/// Random walk: F = I, xi = 0.
StateSpaceModel random_walk_model(std::size_t dim, const Eigen::MatrixXd& Q, EdgeFamily family);

enum class FilterPhase { predicted, updated };

struct FilterState {
  TimeIndex t = 0;
  Eigen::VectorXd beta;
  Eigen::MatrixXd P;
  FilterPhase phase = FilterPhase::updated;
};

struct PredictedObservation {
  Eigen::VectorXd w_pred;
  Eigen::VectorXd R_diag;
  Eigen::MatrixXd G;  // (p+1) x m
};

FilterState predict_state(const StateSpaceModel& model, const FilterState& state);

/// (p+1) x m Jacobian of the mean response with respect to beta.
Eigen::MatrixXd jacobian(const Eigen::MatrixXd& X, const Eigen::VectorXd& beta_pred, EdgeFamily family);

PredictedObservation predict_observation(const FilterState& state, const Eigen::MatrixXd& X, EdgeFamily family);

enum class UpdateStrategy {
  automatic,   // sequential when m > kSequentialThreshold
  batch,       // forms the m x m innovation covariance
  sequential,  // m scalar updates with the linearization fixed at beta_{t|t-1}
};

inline constexpr std::size_t kSequentialThreshold = 512;

FilterState ekf_update(const FilterState& state, const PredictedObservation& pred, const Eigen::VectorXd& w_obs,
                       UpdateStrategy strategy = UpdateStrategy::automatic);

/// Linear update with the static fit as the measurement and its covariance
/// as the measurement noise.
FilterState kf_update_approx(const FilterState& state, const GlmFit& static_fit);

struct TransitionFit {
  StateSpaceModel model;
  std::vector<std::string> warnings;
};

/// Per-coordinate AR(1) least squares (diagonal F and Q).
TransitionFit fit_transition(const std::vector<Eigen::VectorXd>& beta_series, EdgeFamily family);

FilterState initialize_filter(const GlmFit& fit, TimeIndex t);

}  // namespace netmon
