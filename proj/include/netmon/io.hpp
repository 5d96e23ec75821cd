#pragma once

// Text formats: sparse snapshot files with a companion attribute table,
// edge-event ingestion, latent trajectories and result tables.
//
// Snapshot file:
//   #netmon n=50 directed=1 family=bernoulli p=2 columns=age_gap;member attributes=x.attributes.csv
//   #times 1,2,3,...
//   t,i,j,weight
//   1,0,4,1
// Only nonzero weights are listed. The attribute file holds one row per
// potential edge: i,j,<column values>.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "netmon/chart.hpp"
#include "netmon/experiment.hpp"
#include "netmon/network.hpp"

namespace netmon {

/// Shortest decimal that reads back to the same double.
std::string format_real(double x);

/// Writes `path` and its attribute companion (`<stem>.attributes.csv` next
/// to it). Every snapshot must share one attribute matrix.
void write_snapshot_file(const std::filesystem::path& path, const NetworkStream& stream);
NetworkStream read_snapshot_file(const std::filesystem::path& path);

void write_beta_file(const std::filesystem::path& path, const NetworkStream& stream,
                     const std::vector<Eigen::VectorXd>& beta);

struct EdgeEvent {
  double timestamp = 0.0;
  std::string src;
  std::string dst;
  double weight = 1.0;
};

/// `timestamp,src,dst[,weight]`; a header line is skipped when its first
/// field is not numeric. Blank lines and lines starting with '#' are ignored.
std::vector<EdgeEvent> read_events(const std::filesystem::path& path);

/// `node_id,role`, first occurrence order kept.
std::vector<std::pair<std::string, std::string>> read_roles(const std::filesystem::path& path);

struct IngestOptions {
  double period = 7.0;                 // timestamp units per snapshot
  std::optional<double> origin;        // defaults to the earliest timestamp
  std::vector<std::string> roles;      // role order; empty = order of first appearance
  std::vector<std::string> keep_roles; // nodes with other roles are dropped; empty keeps all
  bool directed = true;
  EdgeFamily family = EdgeFamily::bernoulli;
  std::size_t initial_window = 0;      // T0; when > 0 snapshot t=0 aggregates periods 1..T0
};

struct IngestResult {
  NetworkStream stream;
  std::vector<std::string> nodes;  // node ids by index
  std::vector<std::string> warnings;
};

/// Bins events into periods (period k covers [origin + (k-1) period,
/// origin + k period)), one snapshot per period including empty ones.
/// Attributes are role-pair dummies. With an initial window the first T0
/// periods are collapsed into snapshot 0 and the stream continues at T0+1.
IngestResult ingest_events(std::vector<EdgeEvent> events,
                           const std::vector<std::pair<std::string, std::string>>& node_roles,
                           const IngestOptions& options);

struct ArlRow {
  std::string method;
  std::string scenario;
  double delta = 0.0;
  ArlEstimate estimate;
};

void write_arl_table(std::ostream& out, const std::vector<ArlRow>& rows);
void write_calibration_table(std::ostream& out, const std::string& method,
                             const std::vector<CalibrationRow>& rows);

/// t,r_bar,z,ucl,lcl,signal
void write_chart_csv(std::ostream& out, const std::vector<ChartPoint>& points);

/// Static line chart of z against t with the control limits and alarms.
void write_chart_svg(std::ostream& out, const std::vector<ChartPoint>& points, const std::string& title);

struct ArlSeries {
  std::string label;
  std::vector<double> delta;
  std::vector<double> arl;
};

/// ARL1 against delta, one line per method, log-scaled ARL axis.
void write_arl_svg(std::ostream& out, const std::vector<ArlSeries>& series, const std::string& title);

}  // namespace netmon
