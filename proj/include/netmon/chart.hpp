#pragma once

// EWMA chart on the mean Pearson residual.

#include <cstddef>
#include <optional>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "netmon/network.hpp"

namespace netmon {

/// Variance factor of the time-varying limits.
///   standard: lambda/(2-lambda) * (1 - (1-lambda)^(2k))
///   printed:  lambda/(1-lambda) * (1 - (1-lambda)^(2k))
/// The calibrated multiplier l is specific to the form it was calibrated with.
enum class LimitForm { standard, printed };

LimitForm parse_limit_form(std::string_view text);
std::string_view to_string(LimitForm form) noexcept;

struct EwmaChart {
  double lambda = 0.1;
  double l = 3.0;
  double s = 1.0;
  double z = 0.0;
  std::size_t steps = 0;
  LimitForm form = LimitForm::standard;

  /// Throws on lambda outside (0, 1], l <= 0 or s < 0.
  void validate() const;
};

EwmaChart make_chart(double lambda, double l, double s, LimitForm form = LimitForm::standard);

struct ChartPoint {
  TimeIndex t = 0;
  double r_bar = 0.0;
  double z = 0.0;
  double ucl = 0.0;
  double lcl = 0.0;
  bool signal = false;
};

double mean_residual(std::span<const double> r);
double mean_residual(const Eigen::VectorXd& r);

/// sqrt of the variance factor after `steps` updates.
double limit_factor(double lambda, std::size_t steps, LimitForm form = LimitForm::standard);

struct StepResult {
  EwmaChart chart;
  ChartPoint point;
};

StepResult ewma_step(const EwmaChart& chart, double r_bar, TimeIndex t);

/// In-place variant used by the simulation loops.
ChartPoint advance(EwmaChart& chart, double r_bar, TimeIndex t);

struct SigmaEstimate {
  double s = 0.0;
  std::optional<std::string> warning;
};

/// Sample standard deviation (n-1) of an in-control r-bar series, length >= 30.
SigmaEstimate estimate_sigma(std::span<const double> reference);

}  // namespace netmon
