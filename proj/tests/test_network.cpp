#include <doctest.h>

#include <random>
#include <set>

#include "netmon/glm.hpp"
#include "netmon/network.hpp"
#include "netmon/simulator.hpp"

using namespace netmon;

namespace {

template <class Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::invalid_argument;
}

std::shared_ptr<const AttributeMatrix> intercept_only(std::size_t n, bool directed) {
  return std::make_shared<AttributeMatrix>(
      build_attribute_matrix([](NodeId, NodeId) { return std::vector<double>{}; }, 0, n, directed));
}

}  // namespace

TEST_CASE("edge_index examples") {
  CHECK(edge_index(0, 1, 3, true) == 0);
  CHECK(edge_index(1, 0, 3, true) == 2);
  CHECK(edge_index(2, 1, 3, false) == edge_index(1, 2, 3, false));
  CHECK(edge_count(50, true) == 2450);
  CHECK(edge_count(50, false) == 1225);
  CHECK(code_of([] { edge_index(1, 1, 3, true); }) == ErrorCode::invalid_edge);
  CHECK(code_of([] { edge_index(0, 3, 3, true); }) == ErrorCode::invalid_edge);
}

TEST_CASE("edge_index is a bijection onto 0..m-1") {
  for (bool directed : {true, false}) {
    for (std::size_t n = 2; n <= 9; ++n) {
      std::multiset<std::size_t> seen;
      for (NodeId i = 0; i < n; ++i) {
        for (NodeId j = directed ? 0 : i + 1; j < n; ++j) {
          if (i == j) continue;
          const std::size_t row = edge_index(i, j, n, directed);
          seen.insert(row);
          CHECK(edge_at(row, n, directed) == std::pair<NodeId, NodeId>{i, j});
        }
      }
      const std::size_t m = edge_count(n, directed);
      REQUIRE(seen.size() == m);
      std::size_t expect = 0;
      for (std::size_t r : seen) CHECK(r == expect++);
    }
  }
}

TEST_CASE("vectorize and devectorize round-trip") {
  std::mt19937_64 rng(11);
  std::bernoulli_distribution coin(0.4);
  std::uniform_int_distribution<int> count(0, 6);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 7;
    const bool directed = trial % 2 == 0;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        A(i, j) = trial % 3 == 0 ? count(rng) : (coin(rng) ? 1.0 : 0.0);
      }
    }
    if (!directed) A = A.triangularView<Eigen::StrictlyUpper>().toDenseMatrix() +
                       A.triangularView<Eigen::StrictlyUpper>().toDenseMatrix().transpose();
    const Eigen::VectorXd w = vectorize(A, directed);
    CHECK(static_cast<std::size_t>(w.size()) == edge_count(n, directed));
    CHECK(devectorize(w, n, directed) == A);
    CHECK(vectorize(devectorize(w, n, directed), directed) == w);
  }
}

TEST_CASE("snapshot family invariants") {
  Eigen::VectorXd ok(6);
  ok << 0, 1, 0, 0, 1, 1;
  CHECK_NOTHROW(make_snapshot(1, 3, true, EdgeFamily::bernoulli, ok));
  Eigen::VectorXd counts(6);
  counts << 0, 2, 0, 7, 1, 1;
  CHECK(code_of([&] { make_snapshot(1, 3, true, EdgeFamily::bernoulli, counts); }) == ErrorCode::invalid_argument);
  CHECK_NOTHROW(make_snapshot(1, 3, true, EdgeFamily::poisson, counts));
  counts[0] = 0.5;
  CHECK_FALSE(weights_valid(counts, EdgeFamily::poisson));
  counts[0] = -1;
  CHECK_FALSE(weights_valid(counts, EdgeFamily::poisson));
  CHECK(code_of([&] { make_snapshot(1, 3, false, EdgeFamily::bernoulli, ok); }) ==
        ErrorCode::dimension_mismatch);
}

TEST_CASE("build_attribute_matrix examples") {
  const AttributeMatrix a = build_attribute_matrix(EdgeAttributes{{{0, 1}, {3.0}}, {{1, 0}, {3.0}}}, 2, true);
  Eigen::MatrixXd expect(2, 2);
  expect << 1, 3, 1, 3;
  CHECK(a.values == expect);
  CHECK(a.p() == 1);

  const AttributeMatrix none = *intercept_only(4, true);
  CHECK(none.values.rows() == 12);
  CHECK(none.values.cols() == 1);
  CHECK((none.values.array() == 1.0).all());

  SimulationConfig sim = default_simulation_config(EdgeFamily::bernoulli);
  const AttributeMatrix paper = gen_attributes(sim);
  CHECK(paper.values.rows() == 2450);
  CHECK(paper.values.cols() == 3);
  CHECK((paper.values.col(0).array() == 1.0).all());

  CHECK(code_of([] { build_attribute_matrix(EdgeAttributes{{{0, 1}, {3.0}}}, 2, true); }) ==
        ErrorCode::incomplete_attributes);
}

TEST_CASE("undirected attributes accept either orientation") {
  const AttributeMatrix a = build_attribute_matrix(
      EdgeAttributes{{{1, 0}, {2.0}}, {{0, 2}, {5.0}}, {{2, 1}, {7.0}}}, 3, false);
  CHECK(a.values(edge_index(0, 1, 3, false), 1) == 2.0);
  CHECK(a.values(edge_index(2, 0, 3, false), 1) == 5.0);
  CHECK(a.values(edge_index(1, 2, 3, false), 1) == 7.0);
  CHECK_THROWS_AS(build_attribute_matrix(EdgeAttributes{{{1, 0}, {2.0}}, {{0, 1}, {3.0}}, {{0, 2}, {5.0}},
                                                        {{2, 1}, {7.0}}},
                                         3, false),
                  Error);
}

TEST_CASE("role-pair encoding") {
  const std::vector<std::string> roles{"CEO", "P", "MR"};
  const auto ref = encode_role_pairs("CEO", "CEO", roles);
  CHECK(ref.size() == 8);
  for (double v : ref) CHECK(v == 0.0);
  const auto pm = encode_role_pairs("P", "MR", roles);
  CHECK(std::count(pm.begin(), pm.end(), 1.0) == 1);

  RolePairEncoder enc(roles, true);
  CHECK(enc.pair_count() == 9);
  CHECK(enc.width() + 1 == 9);
  CHECK(enc.column_names().size() == 8);
  std::set<std::vector<double>> distinct;
  for (const auto& a : roles) {
    for (const auto& b : roles) {
      const auto v = enc.encode(a, b);
      double sum = 0.0;
      for (double x : v) {
        CHECK((x == 0.0 || x == 1.0));
        sum += x;
      }
      CHECK((sum == 0.0 || sum == 1.0));
      distinct.insert(v);
    }
  }
  CHECK(distinct.size() == 9);
  CHECK(code_of([&] { encode_role_pairs("CEO", "VP", roles); }) == ErrorCode::unknown_category);
}

TEST_CASE("aggregate_window") {
  const std::size_t n = 3;
  auto X = intercept_only(n, true);
  Eigen::VectorXd w1(6), w2(6);
  w1 << 1, 0, 0, 1, 0, 0;
  w2 << 1, 1, 0, 1, 0, 0;
  std::vector<StreamEntry> entries{{make_snapshot(1, n, true, EdgeFamily::bernoulli, w1), X},
                                   {make_snapshot(2, n, true, EdgeFamily::bernoulli, w2), X}};

  SUBCASE("window of one is the snapshot itself") {
    const PooledDesign one = aggregate_window(std::span<const StreamEntry>(entries.data(), 1));
    CHECK(one.weights == w1);
    CHECK(one.design == X->values);
  }
  SUBCASE("stacked rows") {
    const PooledDesign two = aggregate_window(entries);
    CHECK(two.weights.size() == 12);
    CHECK(two.design.rows() == 12);
  }
  SUBCASE("pooled intercept MLE is the logit of the pooled frequency") {
    const PooledDesign two = aggregate_window(entries);
    const GlmFit fit = irwls_fit(two.design, two.weights, EdgeFamily::bernoulli);
    const double freq = 5.0 / 12.0;
    CHECK(fit.beta_hat[0] == doctest::Approx(std::log(freq / (1 - freq))).epsilon(1e-10));
  }
  SUBCASE("empty window") {
    CHECK(code_of([] { aggregate_window(std::span<const StreamEntry>{}); }) == ErrorCode::empty_window);
  }
}

TEST_CASE("sliding window of 2450-edge snapshots stacks 12250 rows") {
  SimulationConfig sim = default_simulation_config(EdgeFamily::bernoulli);
  sim.length = 5;
  const SimulatedStream s = simulate_stream(sim);
  std::vector<StreamEntry> entries(s.stream.begin(), s.stream.end());
  CHECK(aggregate_window(entries).design.rows() == 12250);
}

TEST_CASE("window-of-one fit is bit-identical to the single-snapshot fit") {
  SimulationConfig sim = default_simulation_config(EdgeFamily::bernoulli);
  sim.length = 3;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    sim.seed = seed;
    const SimulatedStream s = simulate_stream(sim);
    for (const StreamEntry& e : s.stream) {
      const PooledDesign pd = aggregate_window(std::span<const StreamEntry>(&e, 1));
      const GlmFit a = irwls_fit(pd.design, pd.weights, EdgeFamily::bernoulli);
      const GlmFit b = irwls_fit(e.attributes->values, e.snapshot.weights, EdgeFamily::bernoulli);
      CHECK(a.beta_hat == b.beta_hat);
      CHECK(a.covariance == b.covariance);
    }
  }
}

TEST_CASE("accumulate_initial_window") {
  const std::size_t n = 3;
  std::vector<NetworkSnapshot> weeks;
  for (int k = 1; k <= 30; ++k) {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(6);
    if (k == 3) w[4] = 1;
    weeks.push_back(make_snapshot(k, n, true, EdgeFamily::bernoulli, w));
  }
  const NetworkSnapshot agg = accumulate_initial_window(weeks, 0);
  CHECK(agg.weights[4] == 1.0);
  CHECK(agg.weights.sum() == 1.0);
  CHECK(agg.t == 0);

  Eigen::VectorXd a = Eigen::VectorXd::Zero(6), b = Eigen::VectorXd::Zero(6);
  a[1] = 2;
  b[1] = 3;
  const std::vector<NetworkSnapshot> counts{make_snapshot(1, n, true, EdgeFamily::poisson, a),
                                            make_snapshot(2, n, true, EdgeFamily::poisson, b)};
  CHECK(accumulate_initial_window(counts, 0).weights[1] == 5.0);

  const std::vector<NetworkSnapshot> empty{make_snapshot(1, n, true, EdgeFamily::bernoulli, Eigen::VectorXd::Zero(6)),
                                           make_snapshot(2, n, true, EdgeFamily::bernoulli, Eigen::VectorXd::Zero(6))};
  CHECK(accumulate_initial_window(empty, 0).weights.isZero());
}

TEST_CASE("stream homogeneity") {
  NetworkStream s;
  auto X = intercept_only(3, true);
  s.push_back(make_snapshot(1, 3, true, EdgeFamily::bernoulli, Eigen::VectorXd::Zero(6)), X);
  CHECK(code_of([&] { s.push_back(make_snapshot(1, 3, true, EdgeFamily::bernoulli, Eigen::VectorXd::Zero(6)), X); }) ==
        ErrorCode::inhomogeneous_stream);
  CHECK(code_of([&] { s.push_back(make_snapshot(2, 3, true, EdgeFamily::poisson, Eigen::VectorXd::Zero(6)), X); }) ==
        ErrorCode::inhomogeneous_stream);
  s.push_back(make_snapshot(4, 3, true, EdgeFamily::bernoulli, Eigen::VectorXd::Zero(6)), X);
  CHECK(s.find(4) == 1);
  CHECK(s.find(2) == s.size());
}
