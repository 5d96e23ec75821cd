#include "netmon/filter.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace netmon {

namespace {

void symmetrize(Eigen::MatrixXd& P) { P = 0.5 * (P + P.transpose()).eval(); }

std::string shape(const Eigen::MatrixXd& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

void StateSpaceModel::validate() const {
  const auto d = xi.size();
  if (F.rows() != d || F.cols() != d || Q.rows() != d || Q.cols() != d) {
    fail(ErrorCode::dimension_mismatch, "state-space model shapes disagree: F " + shape(F) + ", Q " + shape(Q) +
                                            ", xi " + std::to_string(d));
  }
  if (d > 0 && (Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, Q.cwiseAbs().maxCoeff())) {
    fail(ErrorCode::invalid_argument, "process noise covariance Q is not symmetric");
  }
  if (d > 0) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-12 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff())) {
      fail(ErrorCode::invalid_argument, "process noise covariance Q is not positive semidefinite");
    }
  }
}

StateSpaceModel random_walk_model(std::size_t dim, const Eigen::MatrixXd& Q, EdgeFamily family) {
  const auto d = static_cast<Eigen::Index>(dim);
  StateSpaceModel model{Eigen::MatrixXd::Identity(d, d), Eigen::VectorXd::Zero(d), Q, family};
  model.validate();
  return model;
}

FilterState predict_state(const StateSpaceModel& model, const FilterState& state) {
  if (state.phase != FilterPhase::updated) fail(ErrorCode::invalid_argument, "predict_state needs an updated state");
  if (state.beta.size() != model.xi.size() || state.P.rows() != model.xi.size() || state.P.cols() != model.xi.size() ||
      model.F.rows() != model.xi.size() || model.F.cols() != model.xi.size()) {
    fail(ErrorCode::dimension_mismatch, "filter state and model dimensions differ");
  }
  FilterState out;
  out.t = state.t + 1;
  out.beta = model.F * state.beta + model.xi;
  out.P = model.F * state.P * model.F.transpose() + model.Q;
  symmetrize(out.P);
  out.phase = FilterPhase::predicted;
  return out;
}

Eigen::MatrixXd jacobian(const Eigen::MatrixXd& X, const Eigen::VectorXd& beta_pred, EdgeFamily family) {
  if (X.cols() != beta_pred.size()) fail(ErrorCode::dimension_mismatch, "design and state dimensions differ");
  const Eigen::VectorXd eta = X * beta_pred;
  Eigen::VectorXd scale(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) scale[i] = response_derivative(eta[i], family);
  return X.transpose() * scale.asDiagonal();
}

PredictedObservation predict_observation(const FilterState& state, const Eigen::MatrixXd& X, EdgeFamily family) {
  if (state.phase != FilterPhase::predicted) {
    fail(ErrorCode::invalid_argument, "predict_observation needs a predicted state");
  }
  if (X.cols() != state.beta.size()) fail(ErrorCode::dimension_mismatch, "design and state dimensions differ");
  PredictedObservation out;
  const Eigen::VectorXd eta = X * state.beta;
  out.w_pred.resize(eta.size());
  Eigen::VectorXd scale(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    out.w_pred[i] = mean_response(eta[i], family);
    scale[i] = response_derivative(eta[i], family);
  }
  out.R_diag = variance_function(out.w_pred, family);
  out.G = X.transpose() * scale.asDiagonal();
  return out;
}

namespace {

FilterState batch_update(const FilterState& state, const PredictedObservation& pred, const Eigen::VectorXd& w_obs) {
  const Eigen::MatrixXd PG = state.P * pred.G;  // (p+1) x m
  Eigen::MatrixXd S = pred.G.transpose() * PG;
  S.diagonal() += pred.R_diag;
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(S);
  if (ldlt.info() != Eigen::Success) fail(ErrorCode::numerically_singular, "innovation covariance solve failed");
  const Eigen::MatrixXd K = ldlt.solve(PG.transpose()).transpose();  // (p+1) x m
  FilterState out;
  out.t = state.t;
  out.beta = state.beta + K * (w_obs - pred.w_pred);
  const auto d = state.P.rows();
  out.P = (Eigen::MatrixXd::Identity(d, d) - K * pred.G.transpose()) * state.P;
  symmetrize(out.P);
  out.phase = FilterPhase::updated;
  if (!out.beta.allFinite()) fail(ErrorCode::numerically_singular, "EKF update produced non-finite coefficients");
  return out;
}

// Diagonal R and a linearization fixed at beta_{t|t-1} make the batch update
// equal to m scalar updates; each one sees the innovation corrected by the
// state change accumulated so far.
FilterState sequential_update(const FilterState& state, const PredictedObservation& pred,
                              const Eigen::VectorXd& w_obs) {
  // Plain loops: the state is small and m is large, so per-edge Eigen
  // expression overhead would dominate.
  const auto d = static_cast<std::size_t>(state.beta.size());
  Eigen::VectorXd delta = Eigen::VectorXd::Zero(state.beta.size());
  Eigen::MatrixXd P = state.P;
  std::vector<double> Pg(d);
  double* pm = P.data();  // column-major, symmetric
  for (Eigen::Index i = 0; i < pred.G.cols(); ++i) {
    const double* g = pred.G.data() + i * pred.G.rows();
    double s = pred.R_diag[i];
    double gd = 0.0;
    for (std::size_t r = 0; r < d; ++r) {
      double acc = 0.0;
      for (std::size_t c = 0; c < d; ++c) acc += pm[c * d + r] * g[c];
      Pg[r] = acc;
      s += g[r] * acc;
      gd += g[r] * delta[static_cast<Eigen::Index>(r)];
    }
    if (!(s > 0.0)) fail(ErrorCode::numerically_singular, "non-positive innovation variance");
    const double gain = (w_obs[i] - pred.w_pred[i] - gd) / s;
    for (std::size_t r = 0; r < d; ++r) delta[static_cast<Eigen::Index>(r)] += Pg[r] * gain;
    for (std::size_t c = 0; c < d; ++c) {
      const double f = Pg[c] / s;
      for (std::size_t r = 0; r < d; ++r) pm[c * d + r] -= Pg[r] * f;
    }
  }
  FilterState out;
  out.t = state.t;
  out.beta = state.beta + delta;
  out.P = std::move(P);
  symmetrize(out.P);
  out.phase = FilterPhase::updated;
  if (!out.beta.allFinite()) fail(ErrorCode::numerically_singular, "EKF update produced non-finite coefficients");
  return out;
}

}  // namespace

FilterState ekf_update(const FilterState& state, const PredictedObservation& pred, const Eigen::VectorXd& w_obs,
                       UpdateStrategy strategy) {
  if (state.phase != FilterPhase::predicted) fail(ErrorCode::invalid_argument, "ekf_update needs a predicted state");
  const auto m = pred.w_pred.size();
  if (w_obs.size() != m || pred.R_diag.size() != m || pred.G.cols() != m || pred.G.rows() != state.beta.size() ||
      state.P.rows() != state.beta.size()) {
    fail(ErrorCode::dimension_mismatch, "EKF update dimensions disagree (G " + shape(pred.G) + ", m " +
                                            std::to_string(w_obs.size()) + ")");
  }
  if (strategy == UpdateStrategy::automatic) {
    strategy = static_cast<std::size_t>(m) > kSequentialThreshold ? UpdateStrategy::sequential : UpdateStrategy::batch;
  }
  return strategy == UpdateStrategy::batch ? batch_update(state, pred, w_obs) : sequential_update(state, pred, w_obs);
}

FilterState kf_update_approx(const FilterState& state, const GlmFit& static_fit) {
  if (state.phase != FilterPhase::predicted) {
    fail(ErrorCode::invalid_argument, "kf_update_approx needs a predicted state");
  }
  const auto d = state.beta.size();
  if (static_fit.beta_hat.size() != d || static_fit.covariance.rows() != d) {
    fail(ErrorCode::dimension_mismatch, "static fit and filter dimensions differ");
  }
  const Eigen::MatrixXd S = state.P + static_fit.covariance;
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(S);
  const Eigen::VectorXd D = ldlt.vectorD().cwiseAbs();
  if (ldlt.info() != Eigen::Success || D.minCoeff() <= 1e-300 ||
      D.minCoeff() <= 1e-14 * std::max(D.maxCoeff(), 1e-300)) {
    fail(ErrorCode::numerically_singular, "P + R is singular");
  }
  const Eigen::MatrixXd K = ldlt.solve(state.P).transpose();  // P (P+R)^-1, S symmetric
  FilterState out;
  out.t = state.t;
  out.beta = state.beta + K * (static_fit.beta_hat - state.beta);
  out.P = (Eigen::MatrixXd::Identity(d, d) - K) * state.P;
  symmetrize(out.P);
  out.phase = FilterPhase::updated;
  return out;
}

TransitionFit fit_transition(const std::vector<Eigen::VectorXd>& beta_series, EdgeFamily family) {
  if (beta_series.size() < 10) {
    fail(ErrorCode::invalid_argument, "transition fit needs at least 10 states, got " +
                                          std::to_string(beta_series.size()));
  }
  const auto d = beta_series.front().size();
  for (const auto& b : beta_series) {
    if (b.size() != d) fail(ErrorCode::dimension_mismatch, "state series has inconsistent dimension");
  }
  TransitionFit out;
  out.model = StateSpaceModel{Eigen::MatrixXd::Zero(d, d), Eigen::VectorXd::Zero(d), Eigen::MatrixXd::Zero(d, d),
                              family};
  const auto pairs = static_cast<double>(beta_series.size() - 1);
  for (Eigen::Index c = 0; c < d; ++c) {
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t t = 1; t < beta_series.size(); ++t) {
      mx += beta_series[t - 1][c];
      my += beta_series[t][c];
    }
    mx /= pairs;
    my /= pairs;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t t = 1; t < beta_series.size(); ++t) {
      const double dx = beta_series[t - 1][c] - mx;
      sxx += dx * dx;
      sxy += dx * (beta_series[t][c] - my);
    }
    if (sxx <= 1e-300 * pairs) {
      out.model.xi[c] = my;
      out.warnings.push_back("coordinate " + std::to_string(c) + " is constant; F=0, Q=0");
      continue;
    }
    const double f = sxy / sxx;
    const double xi = my - f * mx;
    double sse = 0.0;
    for (std::size_t t = 1; t < beta_series.size(); ++t) {
      const double e = beta_series[t][c] - f * beta_series[t - 1][c] - xi;
      sse += e * e;
    }
    out.model.F(c, c) = f;
    out.model.xi[c] = xi;
    out.model.Q(c, c) = pairs > 2 ? sse / (pairs - 2.0) : 0.0;
  }
  return out;
}

FilterState initialize_filter(const GlmFit& fit, TimeIndex t) {
  if (!fit.converged) fail(ErrorCode::initialization, "cannot initialize the filter from a non-converged fit");
  return FilterState{t, fit.beta_hat, fit.covariance, FilterPhase::updated};
}

}  // namespace netmon
