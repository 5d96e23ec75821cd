#include "netmon/chart.hpp"

#include <cmath>
#include <numeric>

namespace netmon {

LimitForm parse_limit_form(std::string_view text) {
  if (text == "standard") return LimitForm::standard;
  if (text == "printed") return LimitForm::printed;
  fail(ErrorCode::parse, "unknown limit form '" + std::string(text) + "' (expected standard|printed)");
}

std::string_view to_string(LimitForm form) noexcept {
  return form == LimitForm::standard ? "standard" : "printed";
}

void EwmaChart::validate() const {
  if (!(lambda > 0.0 && lambda <= 1.0)) fail(ErrorCode::invalid_argument, "EWMA lambda must lie in (0, 1]");
  if (!(l > 0.0) || !std::isfinite(l)) fail(ErrorCode::invalid_argument, "limit multiplier l must be positive");
  if (!(s >= 0.0) || !std::isfinite(s)) fail(ErrorCode::invalid_argument, "in-control sd s must be non-negative");
  if (form == LimitForm::printed && lambda == 1.0) {
    fail(ErrorCode::invalid_argument, "the printed limit form is undefined at lambda = 1");
  }
}

EwmaChart make_chart(double lambda, double l, double s, LimitForm form) {
  EwmaChart chart;
  chart.lambda = lambda;
  chart.l = l;
  chart.s = s;
  chart.form = form;
  chart.validate();
  return chart;
}

double mean_residual(std::span<const double> r) {
  if (r.empty()) fail(ErrorCode::invalid_argument, "mean residual of an empty vector");
  return std::accumulate(r.begin(), r.end(), 0.0) / static_cast<double>(r.size());
}

double mean_residual(const Eigen::VectorXd& r) {
  return mean_residual(std::span<const double>(r.data(), static_cast<std::size_t>(r.size())));
}

double limit_factor(double lambda, std::size_t steps, LimitForm form) {
  const double base = form == LimitForm::standard ? lambda / (2.0 - lambda) : lambda / (1.0 - lambda);
  const double decay = std::pow(1.0 - lambda, 2.0 * static_cast<double>(steps));
  return std::sqrt(base * (1.0 - decay));
}

ChartPoint advance(EwmaChart& chart, double r_bar, TimeIndex t) {
  chart.z = chart.lambda * r_bar + (1.0 - chart.lambda) * chart.z;
  ++chart.steps;
  ChartPoint pt;
  pt.t = t;
  pt.r_bar = r_bar;
  pt.z = chart.z;
  pt.ucl = chart.l * chart.s * limit_factor(chart.lambda, chart.steps, chart.form);
  pt.lcl = -pt.ucl;
  pt.signal = pt.z >= pt.ucl || pt.z <= pt.lcl;
  return pt;
}

StepResult ewma_step(const EwmaChart& chart, double r_bar, TimeIndex t) {
  StepResult out{chart, {}};
  out.point = advance(out.chart, r_bar, t);
  return out;
}

SigmaEstimate estimate_sigma(std::span<const double> reference) {
  if (reference.size() < 30) {
    fail(ErrorCode::insufficient_reference, "reference series has " + std::to_string(reference.size()) +
                                                " points; at least 30 are required");
  }
  const double n = static_cast<double>(reference.size());
  const double mean = std::accumulate(reference.begin(), reference.end(), 0.0) / n;
  double ss = 0.0;
  for (const double x : reference) ss += (x - mean) * (x - mean);
  SigmaEstimate out;
  out.s = std::sqrt(ss / (n - 1.0));
  if (out.s == 0.0) out.warning = "reference series is constant; the chart is degenerate (zero-width limits)";
  return out;
}

}  // namespace netmon
