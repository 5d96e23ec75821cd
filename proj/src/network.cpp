#include "netmon/network.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace netmon {

std::string_view to_string(EdgeFamily family) noexcept {
  return family == EdgeFamily::bernoulli ? "bernoulli" : "poisson";
}

EdgeFamily parse_family(std::string_view text) {
  if (text == "bernoulli" || text == "binary") return EdgeFamily::bernoulli;
  if (text == "poisson" || text == "weighted") return EdgeFamily::poisson;
  fail(ErrorCode::parse, "unknown edge family '" + std::string(text) + "'");
}

std::size_t edge_count(std::size_t n, bool directed) {
  if (n < 2) return 0;
  return directed ? n * (n - 1) : n * (n - 1) / 2;
}

std::size_t edge_index(NodeId i, NodeId j, std::size_t n, bool directed) {
  if (i == j) fail(ErrorCode::invalid_edge, "self-edge (" + std::to_string(i) + ", " + std::to_string(i) + ")");
  if (i >= n || j >= n) {
    fail(ErrorCode::invalid_edge, "edge (" + std::to_string(i) + ", " + std::to_string(j) +
                                      ") outside node range " + std::to_string(n));
  }
  if (directed) return i * (n - 1) + (j < i ? j : j - 1);
  if (i > j) std::swap(i, j);
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

std::pair<NodeId, NodeId> edge_at(std::size_t row, std::size_t n, bool directed) {
  if (row >= edge_count(n, directed)) {
    fail(ErrorCode::invalid_edge, "row " + std::to_string(row) + " outside edge range");
  }
  if (directed) {
    const NodeId i = row / (n - 1);
    const std::size_t r = row % (n - 1);
    return {i, r < i ? r : r + 1};
  }
  NodeId i = 0;
  std::size_t offset = 0;
  while (offset + (n - i - 1) <= row) {
    offset += n - i - 1;
    ++i;
  }
  return {i, i + 1 + (row - offset)};
}

Eigen::VectorXd vectorize(const Eigen::MatrixXd& adjacency, bool directed) {
  const auto n = static_cast<std::size_t>(adjacency.rows());
  if (adjacency.cols() != adjacency.rows()) fail(ErrorCode::dimension_mismatch, "adjacency must be square");
  Eigen::VectorXd w(static_cast<Eigen::Index>(edge_count(n, directed)));
  Eigen::Index k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = directed ? 0 : i + 1; j < n; ++j) {
      if (i == j) continue;
      w[k++] = adjacency(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return w;
}

Eigen::MatrixXd devectorize(const Eigen::VectorXd& weights, std::size_t n, bool directed) {
  if (static_cast<std::size_t>(weights.size()) != edge_count(n, directed)) {
    fail(ErrorCode::dimension_mismatch, "weight vector length does not match node count");
  }
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index r = 0; r < weights.size(); ++r) {
    const auto [i, j] = edge_at(static_cast<std::size_t>(r), n, directed);
    a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = weights[r];
    if (!directed) a(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = weights[r];
  }
  return a;
}

bool weights_valid(const Eigen::VectorXd& weights, EdgeFamily family) {
  for (const double w : weights) {
    if (family == EdgeFamily::bernoulli) {
      if (w != 0.0 && w != 1.0) return false;
    } else if (!(w >= 0.0) || w != std::floor(w) || !std::isfinite(w)) {
      return false;
    }
  }
  return true;
}

NetworkSnapshot make_snapshot(TimeIndex t, std::size_t n, bool directed, EdgeFamily family,
                              Eigen::VectorXd weights) {
  if (static_cast<std::size_t>(weights.size()) != edge_count(n, directed)) {
    fail(ErrorCode::dimension_mismatch, "snapshot " + std::to_string(t) + ": expected " +
                                            std::to_string(edge_count(n, directed)) + " edges, got " +
                                            std::to_string(weights.size()));
  }
  if (!weights_valid(weights, family)) {
    fail(ErrorCode::invalid_argument, "snapshot " + std::to_string(t) + ": weights violate the " +
                                          std::string(to_string(family)) + " support");
  }
  return NetworkSnapshot{t, n, directed, family, std::move(weights)};
}

namespace {

std::string pair_label(NodeId i, NodeId j) {
  std::ostringstream os;
  os << '(' << i << ", " << j << ')';
  return os.str();
}

}  // namespace

AttributeMatrix build_attribute_matrix(const EdgeAttributes& attrs, std::size_t n, bool directed,
                                       std::vector<std::string> columns) {
  const std::size_t m = edge_count(n, directed);
  std::size_t p = attrs.empty() ? 0 : attrs.begin()->second.size();
  if (!columns.empty() && attrs.empty()) p = columns.size();

  AttributeMatrix out;
  out.n = n;
  out.directed = directed;
  out.values.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(p + 1));
  std::vector<bool> seen(m, false);

  for (const auto& [key, vec] : attrs) {
    const auto [i, j] = key;
    if (vec.size() != p) {
      fail(ErrorCode::dimension_mismatch, "edge " + pair_label(i, j) + " has " + std::to_string(vec.size()) +
                                              " attributes, expected " + std::to_string(p));
    }
    const auto row = static_cast<Eigen::Index>(edge_index(i, j, n, directed));
    if (seen[static_cast<std::size_t>(row)]) {
      for (std::size_t c = 0; c < p; ++c) {
        if (out.values(row, static_cast<Eigen::Index>(c + 1)) != vec[c]) {
          fail(ErrorCode::invalid_argument, "undirected edge " + pair_label(i, j) + " has asymmetric attributes");
        }
      }
      continue;
    }
    seen[static_cast<std::size_t>(row)] = true;
    out.values(row, 0) = 1.0;
    for (std::size_t c = 0; c < p; ++c) out.values(row, static_cast<Eigen::Index>(c + 1)) = vec[c];
  }

  const auto missing = std::find(seen.begin(), seen.end(), false);
  if (missing != seen.end() && p > 0) {
    const auto [i, j] = edge_at(static_cast<std::size_t>(missing - seen.begin()), n, directed);
    fail(ErrorCode::incomplete_attributes, "no attributes for edge " + pair_label(i, j));
  }
  if (p == 0) out.values.col(0).setOnes();
  if (columns.empty()) {
    for (std::size_t c = 0; c < p; ++c) columns.push_back("x" + std::to_string(c + 1));
  }
  if (columns.size() != p) fail(ErrorCode::dimension_mismatch, "column names do not match attribute width");
  out.columns = std::move(columns);
  return out;
}

AttributeMatrix build_attribute_matrix(const EdgeAttributeFn& attr, std::size_t p, std::size_t n,
                                       bool directed, std::vector<std::string> columns) {
  const std::size_t m = edge_count(n, directed);
  AttributeMatrix out;
  out.n = n;
  out.directed = directed;
  out.values.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(p + 1));
  for (std::size_t row = 0; row < m; ++row) {
    const auto [i, j] = edge_at(row, n, directed);
    const std::vector<double> vec = attr(i, j);
    if (vec.size() != p) {
      fail(ErrorCode::incomplete_attributes, "edge " + pair_label(i, j) + " yielded " +
                                                 std::to_string(vec.size()) + " attributes, expected " +
                                                 std::to_string(p));
    }
    const auto r = static_cast<Eigen::Index>(row);
    out.values(r, 0) = 1.0;
    for (std::size_t c = 0; c < p; ++c) out.values(r, static_cast<Eigen::Index>(c + 1)) = vec[c];
  }
  if (columns.empty()) {
    for (std::size_t c = 0; c < p; ++c) columns.push_back("x" + std::to_string(c + 1));
  }
  if (columns.size() != p) fail(ErrorCode::dimension_mismatch, "column names do not match attribute width");
  out.columns = std::move(columns);
  return out;
}

RolePairEncoder::RolePairEncoder(std::vector<std::string> roles, bool directed)
    : roles_(std::move(roles)), directed_(directed) {
  if (roles_.empty()) fail(ErrorCode::invalid_argument, "role set is empty");
  for (std::size_t a = 0; a < roles_.size(); ++a) {
    for (std::size_t b = a + 1; b < roles_.size(); ++b) {
      if (roles_[a] == roles_[b]) fail(ErrorCode::invalid_argument, "duplicate role '" + roles_[a] + "'");
    }
  }
}

std::size_t RolePairEncoder::pair_count() const {
  const std::size_t r = roles_.size();
  return directed_ ? r * r : r * (r + 1) / 2;
}

std::size_t RolePairEncoder::role_index(std::string_view role) const {
  const auto it = std::find(roles_.begin(), roles_.end(), role);
  if (it == roles_.end()) fail(ErrorCode::unknown_category, "unknown role '" + std::string(role) + "'");
  return static_cast<std::size_t>(it - roles_.begin());
}

std::size_t RolePairEncoder::pair_index(std::size_t a, std::size_t b) const {
  const std::size_t r = roles_.size();
  if (directed_) return a * r + b;
  if (a > b) std::swap(a, b);
  return a * r - a * (a + 1) / 2 + b;
}

std::vector<double> RolePairEncoder::encode(std::string_view src_role, std::string_view dst_role) const {
  const std::size_t k = pair_index(role_index(src_role), role_index(dst_role));
  std::vector<double> out(width(), 0.0);
  if (k > 0) out[k - 1] = 1.0;
  return out;
}

std::vector<std::string> RolePairEncoder::column_names() const {
  std::vector<std::string> names(width());
  const std::size_t r = roles_.size();
  for (std::size_t a = 0; a < r; ++a) {
    for (std::size_t b = directed_ ? 0 : a; b < r; ++b) {
      const std::size_t k = pair_index(a, b);
      if (k > 0) names[k - 1] = roles_[a] + "-" + roles_[b];
    }
  }
  return names;
}

std::vector<double> encode_role_pairs(std::string_view src_role, std::string_view dst_role,
                                      const std::vector<std::string>& role_set) {
  return RolePairEncoder(role_set).encode(src_role, dst_role);
}

void NetworkStream::push_back(NetworkSnapshot snapshot, std::shared_ptr<const AttributeMatrix> attributes) {
  if (!attributes) fail(ErrorCode::invalid_argument, "snapshot without attributes");
  if (attributes->rows() != snapshot.m() || attributes->n != snapshot.n ||
      attributes->directed != snapshot.directed) {
    fail(ErrorCode::dimension_mismatch, "snapshot " + std::to_string(snapshot.t) +
                                            " does not match its attribute matrix");
  }
  if (!entries_.empty()) {
    const StreamEntry& last = entries_.back();
    if (snapshot.t <= last.snapshot.t) {
      fail(ErrorCode::inhomogeneous_stream, "snapshot times must be strictly increasing (" +
                                                std::to_string(snapshot.t) + " after " +
                                                std::to_string(last.snapshot.t) + ")");
    }
    if (snapshot.n != last.snapshot.n || snapshot.directed != last.snapshot.directed ||
        snapshot.family != last.snapshot.family || attributes->p() != last.attributes->p()) {
      fail(ErrorCode::inhomogeneous_stream, "snapshot " + std::to_string(snapshot.t) +
                                                " differs from the stream in nodes, direction, family or attributes");
    }
  }
  entries_.push_back(StreamEntry{std::move(snapshot), std::move(attributes)});
}

std::size_t NetworkStream::find(TimeIndex t) const {
  const auto it = std::lower_bound(entries_.begin(), entries_.end(), t,
                                   [](const StreamEntry& e, TimeIndex v) { return e.snapshot.t < v; });
  if (it == entries_.end() || it->snapshot.t != t) return entries_.size();
  return static_cast<std::size_t>(it - entries_.begin());
}

PooledDesign aggregate_window(std::span<const StreamEntry> window) {
  if (window.empty()) fail(ErrorCode::empty_window, "cannot aggregate an empty window");
  const std::size_t m = window.front().snapshot.m();
  const Eigen::Index cols = window.front().attributes->values.cols();
  for (const StreamEntry& e : window) {
    if (e.snapshot.m() != m || e.attributes->values.cols() != cols ||
        e.snapshot.family != window.front().snapshot.family) {
      fail(ErrorCode::inhomogeneous_stream, "window mixes snapshot shapes");
    }
  }
  const auto rows = static_cast<Eigen::Index>(m * window.size());
  PooledDesign out{Eigen::VectorXd(rows), Eigen::MatrixXd(rows, cols)};
  Eigen::Index offset = 0;
  for (const StreamEntry& e : window) {
    const auto mm = static_cast<Eigen::Index>(m);
    out.weights.segment(offset, mm) = e.snapshot.weights;
    out.design.middleRows(offset, mm) = e.attributes->values;
    offset += mm;
  }
  return out;
}

NetworkSnapshot accumulate_initial_window(std::span<const NetworkSnapshot> window, TimeIndex t) {
  if (window.empty()) fail(ErrorCode::empty_window, "initial window must contain at least one snapshot");
  const NetworkSnapshot& first = window.front();
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(first.weights.size());
  for (const NetworkSnapshot& s : window) {
    if (s.n != first.n || s.directed != first.directed || s.family != first.family) {
      fail(ErrorCode::inhomogeneous_stream, "initial window mixes snapshot shapes");
    }
    if (first.family == EdgeFamily::bernoulli) {
      acc = acc.cwiseMax(s.weights);
    } else {
      acc += s.weights;
    }
  }
  return NetworkSnapshot{t, first.n, first.directed, first.family, std::move(acc)};
}

}  // namespace netmon
