#pragma once

// Phase II monitoring of an observed stream: one-step-ahead prediction,
// mean Pearson residual, EWMA chart.

#include <cstddef>
#include <vector>

#include "netmon/chart.hpp"
#include "netmon/filter.hpp"
#include "netmon/predictor.hpp"

namespace netmon {

/// Mean Pearson residual of every snapshot after the first one, which only
/// initializes the predictor.
struct ResidualTrace {
  std::vector<TimeIndex> t;
  std::vector<double> r_bar;
};

ResidualTrace residual_trace(const NetworkStream& stream, Predictor& predictor);

/// Reference series for estimate_sigma: the trace restricted to [first, last].
std::vector<double> trace_window(const ResidualTrace& trace, TimeIndex first, TimeIndex last);

/// Runs the chart over the trace entries with t >= start.
std::vector<ChartPoint> apply_chart(const ResidualTrace& trace, EwmaChart chart, TimeIndex start);

/// Predictor initialized on the snapshots before `start`, then charted.
std::vector<ChartPoint> monitor_stream(const NetworkStream& stream, const PredictorKind& predictor,
                                       const StateSpaceModel& model, const EwmaChart& chart, TimeIndex start,
                                       const IrwlsOptions& irwls = {});

}  // namespace netmon
