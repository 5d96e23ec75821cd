#include <doctest.h>

#include <random>

#include "netmon/glm.hpp"
#include "netmon/simulator.hpp"
#include "oracles.hpp"

using namespace netmon;

namespace {

struct Instance {
  Eigen::MatrixXd X;
  Eigen::VectorXd w;
  std::vector<oracle::Vec> rows;
  oracle::Vec wv;
};

Instance random_instance(std::mt19937_64& rng, EdgeFamily family) {
  std::uniform_int_distribution<int> m_dist(8, 20), p_dist(0, 2);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  const int m = m_dist(rng), p = p_dist(rng);
  Instance in;
  in.X.resize(m, p + 1);
  in.w.resize(m);
  std::vector<double> beta(p + 1);
  for (auto& b : beta) b = coef(rng);
  for (int i = 0; i < m; ++i) {
    in.X(i, 0) = 1.0;
    for (int k = 1; k <= p; ++k) in.X(i, k) = normal(rng);
    double eta = 0.0;
    for (int k = 0; k <= p; ++k) eta += in.X(i, k) * beta[k];
    if (family == EdgeFamily::bernoulli) {
      in.w[i] = std::bernoulli_distribution(1.0 / (1.0 + std::exp(-eta)))(rng) ? 1.0 : 0.0;
    } else {
      in.w[i] = std::poisson_distribution<int>(std::exp(eta))(rng);
    }
  }
  for (int i = 0; i < m; ++i) {
    in.rows.emplace_back();
    for (int k = 0; k <= p; ++k) in.rows.back().push_back(in.X(i, k));
    in.wv.push_back(in.w[i]);
  }
  return in;
}

oracle::Objective negative_loglik(const Instance& in, EdgeFamily family) {
  return [&in, family](const oracle::Vec& b) {
    return family == EdgeFamily::bernoulli ? -oracle::bernoulli_loglik(in.rows, in.wv, b)
                                           : -oracle::poisson_loglik(in.rows, in.wv, b);
  };
}

Eigen::VectorXd to_eigen(const oracle::Vec& v) { return Eigen::Map<const Eigen::VectorXd>(v.data(), v.size()); }

}  // namespace

TEST_CASE("mean_response and variance examples") {
  CHECK(mean_response(0.0, EdgeFamily::bernoulli) == 0.5);
  CHECK(mean_response(0.0, EdgeFamily::poisson) == 1.0);
  CHECK(mean_response(-1.0 + 0.05 * 10, EdgeFamily::bernoulli) == doctest::Approx(0.3775406688).epsilon(1e-9));
  CHECK(variance_function(0.5, EdgeFamily::bernoulli) == 0.25);
  CHECK(variance_function(4.0, EdgeFamily::poisson) == 4.0);
  CHECK(variance_function(0.3775, EdgeFamily::bernoulli) == doctest::Approx(0.3775 * 0.6225));
  CHECK(mean_response(1e4, EdgeFamily::bernoulli) == 1.0 - kMeanFloor);
  CHECK(mean_response(-1e4, EdgeFamily::bernoulli) == kMeanFloor);
  CHECK(mean_response(-1e4, EdgeFamily::poisson) == kMeanFloor);
  CHECK(std::isfinite(mean_response(1e4, EdgeFamily::poisson)));
  CHECK(variance_function(0.0, EdgeFamily::poisson) == kVarianceFloor);
}

TEST_CASE("log_likelihood examples") {
  const Eigen::MatrixXd X = Eigen::MatrixXd::Ones(4, 1);
  const Eigen::VectorXd w = (Eigen::VectorXd(4) << 1, 0, 1, 0).finished();
  CHECK(log_likelihood(Eigen::VectorXd::Zero(1), X, w, EdgeFamily::bernoulli) ==
        doctest::Approx(4 * std::log(0.5)).epsilon(1e-12));
  const Eigen::MatrixXd X2 = Eigen::MatrixXd::Ones(2, 1);
  const Eigen::VectorXd w2 = (Eigen::VectorXd(2) << 2, 4).finished();
  CHECK(log_likelihood(Eigen::VectorXd::Constant(1, std::log(3.0)), X2, w2, EdgeFamily::poisson) ==
        doctest::Approx(6 * std::log(3.0) - 6).epsilon(1e-12));
  CHECK_THROWS_AS(log_likelihood(Eigen::VectorXd::Zero(2), X2, w2, EdgeFamily::poisson), Error);
}

TEST_CASE("pearson residual examples") {
  auto one = [](double v) { return Eigen::VectorXd::Constant(1, v); };
  CHECK(pearson_residuals(one(1), one(0.5), EdgeFamily::bernoulli)[0] == doctest::Approx(1.0));
  CHECK(pearson_residuals(one(4), one(4), EdgeFamily::poisson)[0] == 0.0);
  CHECK(pearson_residuals(one(0), one(1), EdgeFamily::poisson)[0] == doctest::Approx(-1.0));
  const Eigen::VectorXd obs = (Eigen::VectorXd(3) << 1, 0, 1).finished();
  const Eigen::VectorXd pred = (Eigen::VectorXd(3) << 0.2, 0.3, 0.9).finished();
  CHECK(mean_pearson_residual(obs, pred, EdgeFamily::bernoulli) ==
        doctest::Approx(pearson_residuals(obs, pred, EdgeFamily::bernoulli).mean()).epsilon(1e-14));
}

TEST_CASE("irwls closed-form examples") {
  const Eigen::VectorXd w = (Eigen::VectorXd(4) << 1, 0, 1, 1).finished();
  const GlmFit b = irwls_fit(Eigen::MatrixXd::Ones(4, 1), w, EdgeFamily::bernoulli);
  CHECK(b.converged);
  CHECK(b.beta_hat[0] == doctest::Approx(std::log(3.0)).epsilon(1e-10));

  const Eigen::VectorXd c = (Eigen::VectorXd(2) << 2, 4).finished();
  const GlmFit p = irwls_fit(Eigen::MatrixXd::Ones(2, 1), c, EdgeFamily::poisson);
  CHECK(p.converged);
  CHECK(p.beta_hat[0] == doctest::Approx(std::log(3.0)).epsilon(1e-10));
}

TEST_CASE("irwls started at the maximizer stays there") {
  std::mt19937_64 rng(5);
  for (EdgeFamily family : {EdgeFamily::bernoulli, EdgeFamily::poisson}) {
    for (int k = 0; k < 10; ++k) {
      Instance in = random_instance(rng, family);
      GlmFit first;
      try {
        first = irwls_fit(in.X, in.w, family);
      } catch (const Error&) {
        continue;
      }
      IrwlsOptions opt;
      opt.initial_beta = first.beta_hat;
      const GlmFit again = irwls_fit(in.X, in.w, family, opt);
      CHECK(again.converged);
      CHECK(again.iterations <= 2);
      CHECK((again.beta_hat - first.beta_hat).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
}

TEST_CASE("irwls matches a derivative-free maximizer") {
  std::mt19937_64 rng(20240601);
  for (EdgeFamily family : {EdgeFamily::bernoulli, EdgeFamily::poisson}) {
    int accepted = 0, drawn = 0;
    while (accepted < 50) {
      REQUIRE(++drawn < 1000);
      const Instance in = random_instance(rng, family);
      const auto f = negative_loglik(in, family);
      const oracle::Vec best = oracle::nelder_mead(f, oracle::Vec(in.X.cols(), 0.0));
      // No finite maximizer: the likelihood keeps increasing along a ray.
      bool diverges = false;
      for (double v : best) diverges = diverges || std::abs(v) > 8.0;
      if (diverges) continue;
      ++accepted;
      const GlmFit fit = irwls_fit(in.X, in.w, family);
      CHECK(fit.converged);
      for (std::size_t k = 0; k < best.size(); ++k) CHECK(std::abs(fit.beta_hat[k] - best[k]) < 1e-4);
    }
  }
}

TEST_CASE("score and covariance agree with finite differences") {
  std::mt19937_64 rng(99);
  for (EdgeFamily family : {EdgeFamily::bernoulli, EdgeFamily::poisson}) {
    int checked = 0;
    while (checked < 30) {
      const Instance in = random_instance(rng, family);
      GlmFit fit;
      try {
        fit = irwls_fit(in.X, in.w, family);
      } catch (const Error&) {
        continue;
      }
      if (fit.beta_hat.cwiseAbs().maxCoeff() > 8.0) continue;
      ++checked;
      const auto ll = [&](const oracle::Vec& b) { return log_likelihood(to_eigen(b), in.X, in.w, family); };

      oracle::Vec at(in.X.cols());
      std::normal_distribution<double> jitter(0.0, 0.3);
      for (auto& v : at) v = jitter(rng);
      const Eigen::VectorXd analytic = score(to_eigen(at), in.X, in.w, family);
      const oracle::Vec numeric = oracle::gradient(ll, at);
      const double scale = 1.0 + analytic.cwiseAbs().maxCoeff();
      for (std::size_t k = 0; k < at.size(); ++k) CHECK(std::abs(numeric[k] - analytic[k]) < 1e-5 * scale);

      oracle::Vec bhat(fit.beta_hat.data(), fit.beta_hat.data() + fit.beta_hat.size());
      auto H = oracle::hessian([&](const oracle::Vec& b) { return -ll(b); }, bhat);
      const auto C = oracle::inverse(H);
      const double cmax = fit.covariance.cwiseAbs().maxCoeff();
      for (std::size_t i = 0; i < C.size(); ++i) {
        for (std::size_t j = 0; j < C.size(); ++j) CHECK(std::abs(C[i][j] - fit.covariance(i, j)) < 1e-3 * cmax);
      }
      CHECK((fit.covariance - fit.covariance.transpose()).cwiseAbs().maxCoeff() == 0.0);
      CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(fit.covariance).eigenvalues().minCoeff() > 0.0);
    }
  }
}

TEST_CASE("log-likelihood is strictly concave on full-rank designs") {
  std::mt19937_64 rng(4);
  for (EdgeFamily family : {EdgeFamily::bernoulli, EdgeFamily::poisson}) {
    for (int k = 0; k < 20; ++k) {
      const Instance in = random_instance(rng, family);
      oracle::Vec at(in.X.cols(), 0.1);
      const auto H = oracle::hessian(
          [&](const oracle::Vec& b) { return log_likelihood(to_eigen(b), in.X, in.w, family); }, at);
      Eigen::MatrixXd M(at.size(), at.size());
      for (std::size_t i = 0; i < at.size(); ++i) {
        for (std::size_t j = 0; j < at.size(); ++j) M(i, j) = 0.5 * (H[i][j] + H[j][i]);
      }
      CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(M).eigenvalues().maxCoeff() < 0.0);
    }
  }
}

TEST_CASE("irwls solution is a fixed point of the weighted least-squares step") {
  SimulationConfig sim = default_simulation_config(EdgeFamily::bernoulli);
  Rng rng(3);
  const AttributeMatrix X = gen_attributes(sim, rng);
  Eigen::VectorXd beta(3);
  beta << -2, 0.1, 0.3;
  for (EdgeFamily family : {EdgeFamily::bernoulli, EdgeFamily::poisson}) {
    const Eigen::VectorXd w = sample_snapshot(beta, X.values, family, rng);
    const GlmFit fit = irwls_fit(X.values, w, family);
    REQUIRE(fit.converged);
    const IrwlsWorkset ws = irwls_workset(fit.beta_hat, X.values, w, family);
    const Eigen::MatrixXd A = X.values.transpose() * ws.q_weights.asDiagonal() * X.values;
    const Eigen::VectorXd next =
        A.ldlt().solve(X.values.transpose() * (ws.q_weights.array() * ws.z_working.array()).matrix());
    CHECK((next - fit.beta_hat).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((A.inverse() - fit.covariance).cwiseAbs().maxCoeff() < 1e-8 * A.inverse().cwiseAbs().maxCoeff());
    CHECK(fit.final_loglik >= log_likelihood(Eigen::VectorXd::Zero(3), X.values, w, family));
  }
}

TEST_CASE("prior weight equals stacking identical copies") {
  std::mt19937_64 rng(8);
  const Instance in = random_instance(rng, EdgeFamily::poisson);
  Eigen::MatrixXd X3(3 * in.X.rows(), in.X.cols());
  Eigen::VectorXd w3(3 * in.w.size());
  X3 << in.X, in.X, in.X;
  w3 << in.w, in.w, in.w;
  IrwlsOptions opt;
  opt.prior_weight = 3.0;
  const GlmFit a = irwls_fit(in.X, in.w, EdgeFamily::poisson, opt);
  const GlmFit b = irwls_fit(X3, w3, EdgeFamily::poisson);
  CHECK((a.beta_hat - b.beta_hat).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((a.covariance - b.covariance).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("irwls failure modes") {
  Eigen::MatrixXd X(6, 2);
  X << 1, -3, 1, -2, 1, -1, 1, 1, 1, 2, 1, 3;
  const Eigen::VectorXd separated = (Eigen::VectorXd(6) << 0, 0, 0, 1, 1, 1).finished();
  try {
    irwls_fit(X, separated, EdgeFamily::bernoulli);
    FAIL("separation not detected");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::separation);
  }

  Eigen::MatrixXd dup(6, 2);
  dup << 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1;
  const Eigen::VectorXd w = (Eigen::VectorXd(6) << 0, 1, 0, 1, 1, 0).finished();
  try {
    irwls_fit(dup, w, EdgeFamily::bernoulli);
    FAIL("rank deficiency not detected");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::singular_design);
  }

  IrwlsOptions one_step;
  one_step.max_iter = 1;
  Eigen::MatrixXd Xok(6, 2);
  Xok << 1, -3, 1, -2, 1, -1, 1, 1, 1, 2, 1, 3;
  const Eigen::VectorXd mixed = (Eigen::VectorXd(6) << 0, 1, 0, 1, 0, 1).finished();
  const GlmFit partial = irwls_fit(Xok, mixed, EdgeFamily::bernoulli, one_step);
  CHECK_FALSE(partial.converged);
  CHECK(partial.iterations == 1);
}

TEST_CASE("Pearson residuals at the true parameters are standardized") {
  SimulationConfig sim = default_simulation_config(EdgeFamily::bernoulli);
  for (EdgeFamily family : {EdgeFamily::bernoulli, EdgeFamily::poisson}) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      Rng rng(seed);
      const AttributeMatrix X = gen_attributes(sim, rng);
      Eigen::VectorXd beta(3);
      beta << (family == EdgeFamily::bernoulli ? -2.0 : -1.0), 0.1, 0.5;
      const Eigen::VectorXd theta = mean_response(X.values * beta, family);
      const Eigen::VectorXd w = sample_weights(theta, family, rng);
      const Eigen::VectorXd r = pearson_residuals(w, theta, family);
      const double m = static_cast<double>(r.size());
      const double mean = r.mean();
      const double var = (r.array() - mean).square().sum() / (m - 1);
      CHECK(std::abs(mean) < 3.0 / std::sqrt(m));
      CHECK(var >= 0.8);
      CHECK(var <= 1.2);
    }
  }
}
