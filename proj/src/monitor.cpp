#include "netmon/monitor.hpp"

namespace netmon {

ResidualTrace residual_trace(const NetworkStream& stream, Predictor& predictor) {
  ResidualTrace trace;
  trace.t.reserve(stream.size());
  trace.r_bar.reserve(stream.size());
  for (const StreamEntry& e : stream) {
    if (predictor.ready()) {
      const Eigen::VectorXd& w_pred = predictor.predict(*e.attributes);
      trace.t.push_back(e.snapshot.t);
      trace.r_bar.push_back(mean_pearson_residual(e.snapshot.weights, w_pred, e.snapshot.family));
    }
    predictor.observe(e.snapshot, e.attributes);
  }
  return trace;
}

std::vector<double> trace_window(const ResidualTrace& trace, TimeIndex first, TimeIndex last) {
  std::vector<double> out;
  for (std::size_t k = 0; k < trace.t.size(); ++k) {
    if (trace.t[k] >= first && trace.t[k] <= last) out.push_back(trace.r_bar[k]);
  }
  return out;
}

std::vector<ChartPoint> apply_chart(const ResidualTrace& trace, EwmaChart chart, TimeIndex start) {
  chart.validate();
  chart.z = 0.0;
  chart.steps = 0;
  std::vector<ChartPoint> points;
  for (std::size_t k = 0; k < trace.t.size(); ++k) {
    if (trace.t[k] < start) continue;
    points.push_back(advance(chart, trace.r_bar[k], trace.t[k]));
  }
  return points;
}

std::vector<ChartPoint> monitor_stream(const NetworkStream& stream, const PredictorKind& predictor,
                                       const StateSpaceModel& model, const EwmaChart& chart, TimeIndex start,
                                       const IrwlsOptions& irwls) {
  if (stream.empty() || stream.front().snapshot.t >= start) {
    fail(ErrorCode::initialization, "monitoring needs at least one snapshot before the start index");
  }
  const auto p = make_predictor(predictor, model, irwls);
  return apply_chart(residual_trace(stream, *p), chart, start);
}

}  // namespace netmon
