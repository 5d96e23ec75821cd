#pragma once

// Canonical-link GLM machinery for the two edge families: response
// functions, log-likelihood, IRWLS fitting and Pearson residuals.

#include <cstddef>
#include <optional>

#include <Eigen/Dense>

#include "netmon/network.hpp"

namespace netmon {

inline constexpr double kMeanFloor = 1e-9;       // Bernoulli clamp [1e-9, 1-1e-9]; Poisson floor
inline constexpr double kVarianceFloor = 1e-12;

/// g(eta): logistic for Bernoulli, exp for Poisson, clamped away from the
/// boundary of the mean space.
double mean_response(double eta, EdgeFamily family);
Eigen::VectorXd mean_response(const Eigen::VectorXd& eta, EdgeFamily family);

/// d theta / d eta at eta (unclamped): theta(1-theta) or exp(eta).
double response_derivative(double eta, EdgeFamily family);

/// Var(w) as a function of the predicted mean, floored at kVarianceFloor.
double variance_function(double theta, EdgeFamily family);
Eigen::VectorXd variance_function(const Eigen::VectorXd& theta, EdgeFamily family);

/// Bernoulli: sum w log(theta) + (1-w) log(1-theta).
/// Poisson: sum w log(theta) - theta (the log w! term is dropped).
double log_likelihood(const Eigen::VectorXd& beta, const Eigen::MatrixXd& X, const Eigen::VectorXd& w,
                      EdgeFamily family);

/// Score X^T (w - theta).
Eigen::VectorXd score(const Eigen::VectorXd& beta, const Eigen::MatrixXd& X, const Eigen::VectorXd& w,
                      EdgeFamily family);

/// (w_obs - w_pred) / sqrt(var(w_pred)).
Eigen::VectorXd pearson_residuals(const Eigen::VectorXd& w_obs, const Eigen::VectorXd& w_pred,
                                  EdgeFamily family);

/// Mean of the Pearson residuals without materializing them.
double mean_pearson_residual(const Eigen::VectorXd& w_obs, const Eigen::VectorXd& w_pred, EdgeFamily family);

struct IrwlsOptions {
  double tol = 1e-8;
  std::size_t max_iter = 100;
  /// Bernoulli fits whose max |beta| exceeds this are treated as separated.
  double separation_bound = 50.0;
  /// Every row counts this many times in the likelihood. Fitting the window
  /// mean of k snapshots that share one design with prior_weight = k is the
  /// same fit as stacking the k snapshots.
  double prior_weight = 1.0;
  std::optional<Eigen::VectorXd> initial_beta;
};

struct GlmFit {
  Eigen::VectorXd beta_hat;
  Eigen::MatrixXd covariance;
  std::size_t iterations = 0;
  bool converged = false;
  double final_loglik = 0.0;
};

/// Per-iteration quantities (exposed for tests and diagnostics).
struct IrwlsWorkset {
  Eigen::VectorXd eta;
  Eigen::VectorXd theta_hat;
  Eigen::VectorXd z_working;
  Eigen::VectorXd q_weights;
};

IrwlsWorkset irwls_workset(const Eigen::VectorXd& beta, const Eigen::MatrixXd& X, const Eigen::VectorXd& w,
                           EdgeFamily family);

GlmFit irwls_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& w, EdgeFamily family,
                 const IrwlsOptions& options = {});

}  // namespace netmon
