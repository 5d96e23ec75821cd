#pragma once

// Attributed network snapshots and the fixed vectorization order that maps
// an adjacency matrix (diagonal excluded) onto the rows of a design matrix.

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "netmon/error.hpp"

namespace netmon {

enum class EdgeFamily { bernoulli, poisson };

std::string_view to_string(EdgeFamily family) noexcept;
EdgeFamily parse_family(std::string_view text);

using NodeId = std::size_t;
using TimeIndex = long;

/// Number of potential edges: n(n-1) directed, n(n-1)/2 undirected.
std::size_t edge_count(std::size_t n, bool directed);

/// Row of edge (i, j) in the vectorized adjacency. Directed edges are
/// ordered row-major with the diagonal skipped; undirected edges use the
/// canonical pair (min, max), also row-major.
std::size_t edge_index(NodeId i, NodeId j, std::size_t n, bool directed);

/// Inverse of edge_index. Undirected rows return the canonical i < j pair.
std::pair<NodeId, NodeId> edge_at(std::size_t row, std::size_t n, bool directed);

/// n x n adjacency (diagonal ignored) to length-m vector and back.
Eigen::VectorXd vectorize(const Eigen::MatrixXd& adjacency, bool directed);
Eigen::MatrixXd devectorize(const Eigen::VectorXd& weights, std::size_t n, bool directed);

/// Checks the family invariant: {0,1} for Bernoulli, non-negative integers
/// for Poisson.
bool weights_valid(const Eigen::VectorXd& weights, EdgeFamily family);

struct NetworkSnapshot {
  TimeIndex t = 0;
  std::size_t n = 0;
  bool directed = true;
  EdgeFamily family = EdgeFamily::bernoulli;
  Eigen::VectorXd weights;

  std::size_t m() const { return static_cast<std::size_t>(weights.size()); }
};

/// Validates the size and family invariants; throws on violation.
NetworkSnapshot make_snapshot(TimeIndex t, std::size_t n, bool directed, EdgeFamily family,
                              Eigen::VectorXd weights);

/// m x (p+1) design with a leading intercept column. Rows follow edge_index.
struct AttributeMatrix {
  std::size_t n = 0;
  bool directed = true;
  Eigen::MatrixXd values;
  std::vector<std::string> columns;  // attribute names, excluding the intercept

  std::size_t rows() const { return static_cast<std::size_t>(values.rows()); }
  std::size_t p() const { return static_cast<std::size_t>(values.cols()) - 1; }
};

using EdgeKey = std::pair<NodeId, NodeId>;
using EdgeAttributes = std::map<EdgeKey, std::vector<double>>;
using EdgeAttributeFn = std::function<std::vector<double>(NodeId, NodeId)>;

/// Builds the design from per-edge attribute vectors. For undirected
/// networks either orientation may be supplied; if both are, they must agree.
AttributeMatrix build_attribute_matrix(const EdgeAttributes& attrs, std::size_t n, bool directed,
                                       std::vector<std::string> columns = {});
AttributeMatrix build_attribute_matrix(const EdgeAttributeFn& attr, std::size_t p, std::size_t n,
                                       bool directed, std::vector<std::string> columns = {});

/// Dummy coding of (source role, destination role). The first pair in
/// role order is the reference level and encodes as all zeros.
class RolePairEncoder {
 public:
  RolePairEncoder(std::vector<std::string> roles, bool directed = true);

  std::size_t pair_count() const;
  std::size_t width() const { return pair_count() - 1; }
  std::size_t role_index(std::string_view role) const;
  std::vector<double> encode(std::string_view src_role, std::string_view dst_role) const;
  std::vector<std::string> column_names() const;
  const std::vector<std::string>& roles() const { return roles_; }

 private:
  std::size_t pair_index(std::size_t a, std::size_t b) const;

  std::vector<std::string> roles_;
  bool directed_;
};

std::vector<double> encode_role_pairs(std::string_view src_role, std::string_view dst_role,
                                      const std::vector<std::string>& role_set);

struct StreamEntry {
  NetworkSnapshot snapshot;
  std::shared_ptr<const AttributeMatrix> attributes;
};

/// Ordered snapshots sharing n, directedness, family and attribute width.
class NetworkStream {
 public:
  NetworkStream() = default;

  void push_back(NetworkSnapshot snapshot, std::shared_ptr<const AttributeMatrix> attributes);

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const StreamEntry& operator[](std::size_t k) const { return entries_[k]; }
  const StreamEntry& front() const { return entries_.front(); }
  const StreamEntry& back() const { return entries_.back(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  /// Position of the snapshot with time index t, or size() when absent.
  std::size_t find(TimeIndex t) const;

 private:
  std::vector<StreamEntry> entries_;
};

/// Stacked observations of several snapshots for one pooled GLM fit.
struct PooledDesign {
  Eigen::VectorXd weights;
  Eigen::MatrixXd design;
};

PooledDesign aggregate_window(std::span<const StreamEntry> window);

/// Collapses the first snapshots of a window into one: union of edges for
/// Bernoulli, summed counts for Poisson.
NetworkSnapshot accumulate_initial_window(std::span<const NetworkSnapshot> window, TimeIndex t);

}  // namespace netmon
