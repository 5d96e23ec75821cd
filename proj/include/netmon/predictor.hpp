#pragma once

// One-step-ahead network predictors compared by the monitoring procedure:
//   dynamic      EKF over the GLM coefficients
//   approximate  linear Kalman filter fed with per-snapshot GLM estimates
//   static       GLM fitted to the previous snapshot only
//   sliding      GLM fitted to the pooled last l_w snapshots

#include <cstddef>
#include <deque>
#include <memory>
#include <optional>
#include <string_view>

#include <Eigen/Dense>

#include "netmon/filter.hpp"
#include "netmon/glm.hpp"
#include "netmon/network.hpp"

namespace netmon {

enum class Method { dynamic, approximate, static_fit, sliding };

std::string_view to_string(Method method) noexcept;
Method parse_method(std::string_view text);

struct PredictorKind {
  Method method = Method::dynamic;
  std::size_t window = 5;  // l_w, sliding only

  void validate() const;
};

class Predictor {
 public:
  virtual ~Predictor() = default;

  /// Absorbs an observed snapshot. The first call initializes the predictor
  /// from a static fit.
  virtual void observe(const NetworkSnapshot& snapshot, const std::shared_ptr<const AttributeMatrix>& X) = 0;

  /// Predicted mean of the next snapshot with design X.
  virtual const Eigen::VectorXd& predict(const AttributeMatrix& X) = 0;

  virtual bool ready() const = 0;
  virtual Eigen::VectorXd coefficients() const = 0;
};

std::unique_ptr<Predictor> make_predictor(const PredictorKind& kind, const StateSpaceModel& model,
                                          const IrwlsOptions& irwls = {});

class DynamicPredictor final : public Predictor {
 public:
  DynamicPredictor(StateSpaceModel model, IrwlsOptions irwls, bool approximate);

  void observe(const NetworkSnapshot& snapshot, const std::shared_ptr<const AttributeMatrix>& X) override;
  const Eigen::VectorXd& predict(const AttributeMatrix& X) override;
  bool ready() const override { return state_.has_value(); }
  Eigen::VectorXd coefficients() const override;
  const std::optional<FilterState>& state() const { return state_; }

 private:
  StateSpaceModel model_;
  IrwlsOptions irwls_;
  bool approximate_;
  std::optional<FilterState> state_;
  std::optional<FilterState> predicted_;
  PredictedObservation observation_;
};

class StaticPredictor final : public Predictor {
 public:
  StaticPredictor(EdgeFamily family, IrwlsOptions irwls, std::size_t window);

  void observe(const NetworkSnapshot& snapshot, const std::shared_ptr<const AttributeMatrix>& X) override;
  const Eigen::VectorXd& predict(const AttributeMatrix& X) override;
  bool ready() const override { return fit_.has_value(); }
  Eigen::VectorXd coefficients() const override;
  const std::optional<GlmFit>& fit() const { return fit_; }

 private:
  EdgeFamily family_;
  IrwlsOptions irwls_;
  std::size_t window_;
  std::deque<StreamEntry> history_;
  std::optional<GlmFit> fit_;
  Eigen::VectorXd prediction_;
};

}  // namespace netmon
