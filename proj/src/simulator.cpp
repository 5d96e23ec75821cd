#include "netmon/simulator.hpp"

#include <cmath>
#include <cstdlib>

namespace netmon {

namespace {

Rng seeded(std::uint64_t seed, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stream};
  return Rng(seq);
}

constexpr std::uint32_t kAttributeStream = 0;
constexpr std::uint32_t kStateStream = 1;
constexpr std::uint32_t kSampleStream = 2;

}  // namespace

void SimulationConfig::validate() const {
  if (n < 2) fail(ErrorCode::invalid_argument, "simulation needs at least 2 nodes");
  if (length < 1) fail(ErrorCode::invalid_argument, "stream length must be at least 1");
  if (member_count > n) fail(ErrorCode::invalid_argument, "member_count exceeds node count");
  if (age_low > age_high) fail(ErrorCode::invalid_argument, "age range is empty");
  if (beta0.size() != 3) fail(ErrorCode::dimension_mismatch, "beta0 must have 3 entries (intercept, age gap, member)");
  model.validate();
  if (model.dim() != 3) fail(ErrorCode::dimension_mismatch, "simulation model must be 3-dimensional");
  if (model.family != family) fail(ErrorCode::invalid_argument, "model family differs from simulation family");
}

SimulationConfig default_simulation_config(EdgeFamily family) {
  SimulationConfig c;
  c.family = family;
  c.beta0 = Eigen::Vector3d(-1.0, 0.05, 0.0);
  c.model.F = 0.7 * Eigen::MatrixXd::Identity(3, 3);
  c.model.xi = Eigen::Vector3d(-0.6, 0.03, 0.0);
  c.model.Q = Eigen::Vector3d(0.01, 0.0001, 0.05).asDiagonal();
  c.model.family = family;
  return c;
}

std::string_view to_string(ChangeScenario scenario) noexcept {
  return scenario == ChangeScenario::global ? "global" : "local";
}

ChangeScenario parse_scenario(std::string_view text) {
  if (text == "global" || text == "1") return ChangeScenario::global;
  if (text == "local" || text == "2") return ChangeScenario::local;
  fail(ErrorCode::parse, "unknown scenario '" + std::string(text) + "' (expected global|local|1|2)");
}

std::string_view to_string(SigmaForm form) noexcept {
  return form == SigmaForm::printed ? "printed" : "stationary";
}

SigmaForm parse_sigma_form(std::string_view text) {
  if (text == "printed") return SigmaForm::printed;
  if (text == "stationary") return SigmaForm::stationary;
  fail(ErrorCode::parse, "unknown sigma form '" + std::string(text) + "' (expected printed|stationary)");
}

void ChangeSpec::validate() const {
  if (!(delta >= 0.0) || !std::isfinite(delta)) fail(ErrorCode::invalid_argument, "change magnitude must be >= 0");
  if (sign != 1 && sign != -1) fail(ErrorCode::invalid_argument, "change sign must be +1 or -1");
  if (tau < 1) fail(ErrorCode::invalid_argument, "change time must be >= 1");
}

ChangeSpec scenario_change(ChangeScenario scenario, double delta, TimeIndex tau) {
  ChangeSpec c;
  c.scenario = scenario;
  c.delta = delta;
  c.tau = tau;
  c.sign = scenario == ChangeScenario::global ? -1 : 1;
  return c;
}

double sigma_param(double q_ii, double f_ii, SigmaForm form) {
  if (!(std::abs(f_ii) < 1.0)) fail(ErrorCode::nonstationary, "sigma needs |F_ii| < 1");
  if (!(q_ii >= 0.0)) fail(ErrorCode::invalid_argument, "Q_ii must be non-negative");
  if (form == SigmaForm::printed) return std::sqrt(q_ii) / (1.0 - f_ii);
  return std::sqrt(q_ii / (1.0 - f_ii * f_ii));
}

Eigen::VectorXd change_offset(const ChangeSpec& change, const StateSpaceModel& model) {
  change.validate();
  const auto k = static_cast<Eigen::Index>(change.param_index());
  if (k >= model.xi.size()) fail(ErrorCode::dimension_mismatch, "change targets a missing coefficient");
  Eigen::VectorXd offset = Eigen::VectorXd::Zero(model.xi.size());
  offset[k] = change.sign * change.delta * sigma_param(model.Q(k, k), model.F(k, k), change.sigma_form);
  return offset;
}

AttributeMatrix gen_attributes(const SimulationConfig& config, Rng& rng) {
  std::uniform_int_distribution<int> age(config.age_low, config.age_high);
  std::vector<int> ages(config.n);
  for (int& a : ages) a = age(rng);
  const std::size_t members = config.member_count;
  return build_attribute_matrix(
      [&](NodeId i, NodeId j) {
        const double gap = std::abs(ages[i] - ages[j]);
        const double member = (i < members || j < members) ? 1.0 : 0.0;
        return std::vector<double>{gap, member};
      },
      2, config.n, config.directed, {"age_gap", "member"});
}

AttributeMatrix gen_attributes(const SimulationConfig& config) {
  Rng rng = seeded(config.seed, kAttributeStream);
  return gen_attributes(config, rng);
}

GaussianNoise::GaussianNoise(const Eigen::MatrixXd& covariance) {
  const Eigen::MatrixXd offdiag = covariance - Eigen::MatrixXd(covariance.diagonal().asDiagonal());
  diagonal_ = offdiag.cwiseAbs().maxCoeff() == 0.0 || covariance.size() <= 1;
  if (diagonal_) {
    factor_ = covariance.diagonal().cwiseMax(0.0).cwiseSqrt();
    return;
  }
  // Symmetric square root tolerates singular (PSD) covariances.
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(covariance);
  factor_ = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
            es.eigenvectors().transpose();
}

Eigen::VectorXd GaussianNoise::draw(Rng& rng) const {
  std::normal_distribution<double> normal;
  const Eigen::Index d = diagonal_ ? factor_.size() : factor_.rows();
  Eigen::VectorXd z(d);
  for (Eigen::Index i = 0; i < d; ++i) z[i] = normal(rng);
  if (diagonal_) return factor_.col(0).cwiseProduct(z);
  return factor_ * z;
}

Eigen::VectorXd evolve_state(const Eigen::VectorXd& beta_prev, const StateSpaceModel& model,
                             const Eigen::VectorXd* offset, const GaussianNoise& noise, Rng& rng) {
  Eigen::VectorXd next = model.F * beta_prev + model.xi + noise.draw(rng);
  if (offset != nullptr) next += *offset;
  return next;
}

Eigen::VectorXd evolve_state(const Eigen::VectorXd& beta_prev, const StateSpaceModel& model,
                             const Eigen::VectorXd* offset, Rng& rng) {
  return evolve_state(beta_prev, model, offset, GaussianNoise(model.Q), rng);
}

Eigen::VectorXd sample_weights(const Eigen::VectorXd& theta, EdgeFamily family, Rng& rng) {
  Eigen::VectorXd w(theta.size());
  if (family == EdgeFamily::bernoulli) {
    // 53 random bits as a double in [0, 1); uniform_real_distribution is
    // several times slower here and this loop runs once per edge.
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
      w[i] = static_cast<double>(rng() >> 11) * 0x1.0p-53 < theta[i] ? 1.0 : 0.0;
    }
  } else {
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
      w[i] = theta[i] > 0.0 ? static_cast<double>(std::poisson_distribution<long>(theta[i])(rng)) : 0.0;
    }
  }
  return w;
}

Eigen::VectorXd sample_snapshot(const Eigen::VectorXd& beta, const Eigen::MatrixXd& X, EdgeFamily family, Rng& rng) {
  return sample_weights(mean_response(X * beta, family), family, rng);
}

std::uint64_t replication_seed(std::uint64_t base_seed, std::uint64_t replication, std::uint64_t attempt) {
  return base_seed ^ replication ^ (attempt << 40);
}

StreamGenerator::StreamGenerator(SimulationConfig config, std::optional<ChangeSpec> change, std::uint64_t seed)
    : config_(std::move(config)),
      change_(std::move(change)),
      noise_((config_.validate(), config_.model.Q)),
      state_rng_(seeded(seed, kStateStream)),
      sample_rng_(seeded(seed, kSampleStream)) {
  Rng attr_rng = seeded(seed, kAttributeStream);
  attributes_ = std::make_shared<const AttributeMatrix>(gen_attributes(config_, attr_rng));
  offset_ = change_ ? change_offset(*change_, config_.model) : Eigen::VectorXd::Zero(config_.model.xi.size());
  beta_ = config_.beta0;
  snapshot_ = NetworkSnapshot{0, config_.n, config_.directed, config_.family, Eigen::VectorXd()};
}

const NetworkSnapshot& StreamGenerator::next() {
  ++t_;
  const bool shifted = change_ && t_ >= change_->tau;
  beta_ = evolve_state(beta_, config_.model, shifted ? &offset_ : nullptr, noise_, state_rng_);
  snapshot_.t = t_;
  snapshot_.weights = sample_snapshot(beta_, attributes_->values, config_.family, sample_rng_);
  return snapshot_;
}

SimulatedStream simulate_stream(const SimulationConfig& config, const std::optional<ChangeSpec>& change) {
  StreamGenerator gen(config, change, config.seed);
  SimulatedStream out;
  out.beta.reserve(config.length);
  for (std::size_t k = 0; k < config.length; ++k) {
    out.stream.push_back(gen.next(), gen.attributes());
    out.beta.push_back(gen.beta());
  }
  return out;
}

}  // namespace netmon
