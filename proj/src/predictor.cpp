#include "netmon/predictor.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace netmon {

std::string_view to_string(Method method) noexcept {
  switch (method) {
    case Method::dynamic: return "dynamic";
    case Method::approximate: return "approximate";
    case Method::static_fit: return "static";
    case Method::sliding: return "sliding";
  }
  return "unknown";
}

Method parse_method(std::string_view text) {
  if (text == "dynamic" || text == "ekf") return Method::dynamic;
  if (text == "approximate" || text == "kf") return Method::approximate;
  if (text == "static") return Method::static_fit;
  if (text == "sliding" || text == "sliding-static") return Method::sliding;
  fail(ErrorCode::parse, "unknown method '" + std::string(text) + "' (expected dynamic|approximate|static|sliding)");
}

void PredictorKind::validate() const {
  if (method == Method::sliding && window < 1) fail(ErrorCode::invalid_argument, "sliding window must be >= 1");
}

std::unique_ptr<Predictor> make_predictor(const PredictorKind& kind, const StateSpaceModel& model,
                                          const IrwlsOptions& irwls) {
  kind.validate();
  switch (kind.method) {
    case Method::dynamic: return std::make_unique<DynamicPredictor>(model, irwls, false);
    case Method::approximate: return std::make_unique<DynamicPredictor>(model, irwls, true);
    case Method::static_fit: return std::make_unique<StaticPredictor>(model.family, irwls, 1);
    case Method::sliding: return std::make_unique<StaticPredictor>(model.family, irwls, kind.window);
  }
  fail(ErrorCode::invalid_argument, "unhandled predictor kind");
}

DynamicPredictor::DynamicPredictor(StateSpaceModel model, IrwlsOptions irwls, bool approximate)
    : model_(std::move(model)), irwls_(std::move(irwls)), approximate_(approximate) {
  model_.validate();
}

const Eigen::VectorXd& DynamicPredictor::predict(const AttributeMatrix& X) {
  if (!state_) fail(ErrorCode::initialization, "predictor has not observed any snapshot yet");
  if (X.values.cols() != static_cast<Eigen::Index>(model_.dim())) {
    fail(ErrorCode::dimension_mismatch, "design has " + std::to_string(X.values.cols()) +
                                            " columns but the state has " + std::to_string(model_.dim()));
  }
  predicted_ = predict_state(model_, *state_);
  if (approximate_) {
    observation_.w_pred = mean_response(X.values * predicted_->beta, model_.family);
  } else {
    observation_ = predict_observation(*predicted_, X.values, model_.family);
  }
  return observation_.w_pred;
}

void DynamicPredictor::observe(const NetworkSnapshot& snapshot, const std::shared_ptr<const AttributeMatrix>& X) {
  if (snapshot.family != model_.family) fail(ErrorCode::invalid_argument, "snapshot family differs from the model");
  if (!state_) {
    const GlmFit fit = irwls_fit(X->values, snapshot.weights, model_.family, irwls_);
    if (fit.beta_hat.size() != static_cast<Eigen::Index>(model_.dim())) {
      fail(ErrorCode::dimension_mismatch, "initial fit and model dimensions differ");
    }
    state_ = initialize_filter(fit, snapshot.t);
    return;
  }
  if (!predicted_) predict(*X);
  if (approximate_) {
    IrwlsOptions opts = irwls_;
    opts.initial_beta = predicted_->beta;
    state_ = kf_update_approx(*predicted_, irwls_fit(X->values, snapshot.weights, model_.family, opts));
  } else {
    state_ = ekf_update(*predicted_, observation_, snapshot.weights);
  }
  state_->t = snapshot.t;
  predicted_.reset();
  observation_.G.resize(0, 0);
}

Eigen::VectorXd DynamicPredictor::coefficients() const {
  if (!state_) fail(ErrorCode::initialization, "predictor has not observed any snapshot yet");
  return state_->beta;
}

StaticPredictor::StaticPredictor(EdgeFamily family, IrwlsOptions irwls, std::size_t window)
    : family_(family), irwls_(std::move(irwls)), window_(window) {
  if (window_ < 1) fail(ErrorCode::invalid_argument, "window must be >= 1");
}

void StaticPredictor::observe(const NetworkSnapshot& snapshot, const std::shared_ptr<const AttributeMatrix>& X) {
  if (snapshot.family != family_) fail(ErrorCode::invalid_argument, "snapshot family differs from the predictor");
  history_.push_back(StreamEntry{snapshot, X});
  while (history_.size() > window_) history_.pop_front();

  IrwlsOptions opts = irwls_;
  if (fit_) opts.initial_beta = fit_->beta_hat;

  const bool shared_design = std::all_of(history_.begin(), history_.end(),
                                         [&](const StreamEntry& e) { return e.attributes == X; });
  if (shared_design) {
    // Identical designs: the stacked likelihood is k times the likelihood of
    // the window-mean response, so fit that with prior weight k.
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(snapshot.weights.size());
    for (const StreamEntry& e : history_) mean += e.snapshot.weights;
    const auto k = static_cast<double>(history_.size());
    mean /= k;
    opts.prior_weight = k;
    fit_ = irwls_fit(X->values, mean, family_, opts);
  } else {
    const std::vector<StreamEntry> window(history_.begin(), history_.end());
    const PooledDesign pooled = aggregate_window(window);
    fit_ = irwls_fit(pooled.design, pooled.weights, family_, opts);
  }
}

const Eigen::VectorXd& StaticPredictor::predict(const AttributeMatrix& X) {
  if (!fit_) fail(ErrorCode::initialization, "predictor has not observed any snapshot yet");
  prediction_ = mean_response(X.values * fit_->beta_hat, family_);
  return prediction_;
}

Eigen::VectorXd StaticPredictor::coefficients() const {
  if (!fit_) fail(ErrorCode::initialization, "predictor has not observed any snapshot yet");
  return fit_->beta_hat;
}

}  // namespace netmon
