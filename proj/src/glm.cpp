#include "netmon/glm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace netmon {

namespace {

constexpr double kMaxEta = 700.0;  // exp overflow guard for the Poisson mean

void check_dims(const Eigen::VectorXd& beta, const Eigen::MatrixXd& X, const Eigen::VectorXd& w) {
  if (X.cols() != beta.size() || X.rows() != w.size()) {
    fail(ErrorCode::dimension_mismatch, "design is " + std::to_string(X.rows()) + "x" + std::to_string(X.cols()) +
                                            ", beta has " + std::to_string(beta.size()) + " entries, w has " +
                                            std::to_string(w.size()));
  }
}

double logistic(double eta) {
  const double e = std::exp(-std::abs(eta));
  return eta >= 0 ? 1.0 / (1.0 + e) : e / (1.0 + e);
}

}  // namespace

double mean_response(double eta, EdgeFamily family) {
  if (family == EdgeFamily::bernoulli) return std::clamp(logistic(eta), kMeanFloor, 1.0 - kMeanFloor);
  return std::max(std::exp(std::min(eta, kMaxEta)), kMeanFloor);
}

Eigen::VectorXd mean_response(const Eigen::VectorXd& eta, EdgeFamily family) {
  Eigen::VectorXd out(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) out[i] = mean_response(eta[i], family);
  return out;
}

double response_derivative(double eta, EdgeFamily family) {
  if (family == EdgeFamily::bernoulli) {
    const double th = logistic(eta);
    return th * (1.0 - th);
  }
  return std::exp(std::min(eta, kMaxEta));
}

double variance_function(double theta, EdgeFamily family) {
  const double v = family == EdgeFamily::bernoulli ? theta * (1.0 - theta) : theta;
  return std::max(v, kVarianceFloor);
}

Eigen::VectorXd variance_function(const Eigen::VectorXd& theta, EdgeFamily family) {
  Eigen::VectorXd out(theta.size());
  for (Eigen::Index i = 0; i < theta.size(); ++i) out[i] = variance_function(theta[i], family);
  return out;
}

namespace {

// Terms with zero weight are skipped so that sparse binary and count
// networks need one logarithm per edge at most.
double log_likelihood_at(const Eigen::VectorXd& theta, const Eigen::VectorXd& w, EdgeFamily family) {
  double ll = 0.0;
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    const double th = theta[i];
    if (family == EdgeFamily::bernoulli) {
      if (w[i] != 0.0) ll += w[i] * std::log(th);
      if (w[i] != 1.0) ll += (1.0 - w[i]) * std::log1p(-th);
    } else {
      if (w[i] != 0.0) ll += w[i] * std::log(th);
      ll -= th;
    }
  }
  return ll;
}

}  // namespace

double log_likelihood(const Eigen::VectorXd& beta, const Eigen::MatrixXd& X, const Eigen::VectorXd& w,
                      EdgeFamily family) {
  check_dims(beta, X, w);
  return log_likelihood_at(mean_response(X * beta, family), w, family);
}

Eigen::VectorXd score(const Eigen::VectorXd& beta, const Eigen::MatrixXd& X, const Eigen::VectorXd& w,
                      EdgeFamily family) {
  check_dims(beta, X, w);
  return X.transpose() * (w - mean_response(X * beta, family));
}

Eigen::VectorXd pearson_residuals(const Eigen::VectorXd& w_obs, const Eigen::VectorXd& w_pred,
                                  EdgeFamily family) {
  if (w_obs.size() != w_pred.size()) fail(ErrorCode::dimension_mismatch, "observed and predicted lengths differ");
  Eigen::VectorXd r(w_obs.size());
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    r[i] = (w_obs[i] - w_pred[i]) / std::sqrt(variance_function(w_pred[i], family));
  }
  return r;
}

double mean_pearson_residual(const Eigen::VectorXd& w_obs, const Eigen::VectorXd& w_pred, EdgeFamily family) {
  if (w_obs.size() != w_pred.size()) fail(ErrorCode::dimension_mismatch, "observed and predicted lengths differ");
  if (w_obs.size() == 0) fail(ErrorCode::invalid_argument, "mean residual of an empty network");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < w_obs.size(); ++i) {
    sum += (w_obs[i] - w_pred[i]) / std::sqrt(variance_function(w_pred[i], family));
  }
  return sum / static_cast<double>(w_obs.size());
}

namespace {

IrwlsWorkset workset_at(Eigen::VectorXd eta, Eigen::VectorXd theta, const Eigen::VectorXd& w, EdgeFamily family) {
  IrwlsWorkset ws;
  ws.eta = std::move(eta);
  ws.theta_hat = std::move(theta);
  // Canonical link with unit dispersion: q = d theta / d eta = Var(theta).
  ws.q_weights = variance_function(ws.theta_hat, family);
  ws.z_working = ws.eta.array() + (w - ws.theta_hat).array() / ws.q_weights.array();
  return ws;
}

}  // namespace

IrwlsWorkset irwls_workset(const Eigen::VectorXd& beta, const Eigen::MatrixXd& X, const Eigen::VectorXd& w,
                           EdgeFamily family) {
  check_dims(beta, X, w);
  Eigen::VectorXd eta = X * beta;
  Eigen::VectorXd theta = mean_response(eta, family);
  return workset_at(std::move(eta), std::move(theta), w, family);
}

namespace {

struct NormalEquations {
  Eigen::LDLT<Eigen::MatrixXd> ldlt;
  Eigen::VectorXd rhs;
};

NormalEquations weighted_normal_equations(const Eigen::MatrixXd& X, const IrwlsWorkset& ws, double prior_weight) {
  const Eigen::MatrixXd A = prior_weight * (X.transpose() * ws.q_weights.asDiagonal() * X);
  NormalEquations ne{Eigen::LDLT<Eigen::MatrixXd>(A),
                     prior_weight * (X.transpose() * (ws.q_weights.array() * ws.z_working.array()).matrix())};
  const Eigen::VectorXd d = ne.ldlt.vectorD().cwiseAbs();
  if (ne.ldlt.info() != Eigen::Success || !ne.ldlt.isPositive() || d.minCoeff() <= 1e-13 * d.maxCoeff() ||
      !std::isfinite(d.maxCoeff())) {
    fail(ErrorCode::singular_design, "design matrix is rank deficient at the current weights");
  }
  return ne;
}

Eigen::VectorXd initial_beta(const Eigen::MatrixXd& X, const Eigen::VectorXd& w, EdgeFamily family) {
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(X.cols());
  if (X.cols() > 0 && (X.col(0).array() == 1.0).all()) {
    const double mean = w.size() > 0 ? w.mean() : 0.0;
    if (family == EdgeFamily::bernoulli) {
      const double pbar = std::clamp(mean, kMeanFloor, 1.0 - kMeanFloor);
      beta[0] = std::log(pbar / (1.0 - pbar));
    } else {
      beta[0] = std::log(std::max(mean, kMeanFloor));
    }
  }
  return beta;
}

}  // namespace

GlmFit irwls_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& w, EdgeFamily family,
                 const IrwlsOptions& options) {
  if (X.rows() != w.size()) fail(ErrorCode::dimension_mismatch, "design rows and response length differ");
  if (X.rows() < X.cols()) {
    fail(ErrorCode::singular_design, "fewer observations (" + std::to_string(X.rows()) + ") than coefficients (" +
                                         std::to_string(X.cols()) + ")");
  }
  if (!(options.prior_weight > 0.0)) fail(ErrorCode::invalid_argument, "prior weight must be positive");

  GlmFit fit;
  Eigen::VectorXd beta = options.initial_beta ? *options.initial_beta : initial_beta(X, w, family);
  if (beta.size() != X.cols()) fail(ErrorCode::dimension_mismatch, "initial beta has the wrong length");

  struct Point {
    Eigen::VectorXd eta, theta;
    double ll;
  };
  auto evaluate = [&](const Eigen::VectorXd& b) {
    Point pt{X * b, {}, 0.0};
    pt.theta = mean_response(pt.eta, family);
    pt.ll = options.prior_weight * log_likelihood_at(pt.theta, w, family);
    return pt;
  };
  Point cur = evaluate(beta);

  for (std::size_t iter = 1; iter <= options.max_iter; ++iter) {
    const IrwlsWorkset ws = workset_at(cur.eta, cur.theta, w, family);
    const NormalEquations ne = weighted_normal_equations(X, ws, options.prior_weight);
    Eigen::VectorXd next = ne.ldlt.solve(ne.rhs);

    Point trial = evaluate(next);
    for (int halving = 0; halving < 30 && !(trial.ll >= cur.ll - 1e-12 * (1.0 + std::abs(cur.ll))); ++halving) {
      next = 0.5 * (beta + next);
      trial = evaluate(next);
    }

    const double change = (next - beta).cwiseAbs().maxCoeff() / (1.0 + next.cwiseAbs().maxCoeff());
    fit.iterations = iter;
    // Steps that lose likelihood only to rounding near the optimum are kept.
    beta = std::move(next);
    cur = std::move(trial);
    if (family == EdgeFamily::bernoulli && beta.cwiseAbs().maxCoeff() > options.separation_bound) {
      fail(ErrorCode::separation, "coefficients exceed " + std::to_string(options.separation_bound) +
                                      " (perfect or quasi-complete separation)");
    }
    if (change < options.tol) {
      fit.converged = true;
      break;
    }
  }

  const NormalEquations ne = weighted_normal_equations(X, workset_at(cur.eta, cur.theta, w, family), options.prior_weight);
  fit.covariance = ne.ldlt.solve(Eigen::MatrixXd::Identity(X.cols(), X.cols()));
  fit.covariance = 0.5 * (fit.covariance + fit.covariance.transpose()).eval();
  fit.beta_hat = std::move(beta);
  fit.final_loglik = cur.ll;
  return fit;
}

}  // namespace netmon
