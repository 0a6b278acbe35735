#include "infogather/infocost/info_cost.hpp"

#include "infogather/core/errors.hpp"
#include "infogather/core/linalg.hpp"

#include <cmath>

namespace infogather::infocost {
namespace {

void check_rollout(const systems::SystemModel& sys, const VecSeq& states, const VecSeq& controls,
                   const GaussianBelief& belief) {
  if (states.size() != controls.size() + 1) {
    throw DimensionMismatch("rollout must have one more state than controls");
  }
  require_dim(belief.mean.size(), sys.param_dim(), "belief mean");
  require_dim(belief.cov.rows(), sys.param_dim(), "belief covariance");
  require_dim(belief.cov.cols(), sys.param_dim(), "belief covariance");
}

void require_full_observation(const systems::SystemModel& sys, const char* what) {
  if (!sys.has_identity_observation()) {
    throw ConfigError(std::string(what) + ": requires q = identity");
  }
}

// Row-wise log(sum(exp(.))) over the columns of m, written into out.
void logsumexp_rows(const Mat& m, Eigen::Ref<Vec> out) {
  const Vec peak = m.rowwise().maxCoeff();
  out = peak + ((m.colwise() - peak).array().exp().rowwise().sum().log()).matrix();
}

}  // namespace

VecSeq rollout_nominal(const systems::SystemModel& sys, const Vec& x0, const VecSeq& controls,
                       const Vec& theta_bar) {
  VecSeq states;
  states.reserve(controls.size() + 1);
  states.push_back(x0);
  for (const Vec& u : controls) states.push_back(sys.step(states.back(), u, theta_bar));
  return states;
}

NoiseWhitener::NoiseWhitener(const Mat& state_noise) : cov_(state_noise) {
  if (cov_.rows() != cov_.cols()) throw DimensionMismatch("state noise must be square");
  const double min_eig =
      Eigen::SelfAdjointEigenSolver<Mat>(cov_, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
  if (min_eig < kMinEigenvalue) {
    cov_.diagonal().array() += kRegularization;
    regularized_ = true;
  }
  llt_.compute(cov_);
  if (llt_.info() != Eigen::Success) {
    throw SingularMatrix("state noise is not positive definite after regularization");
  }
  logdet_ = 2.0 * llt_.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

Mat NoiseWhitener::whiten(const Mat& m) const { return llt_.matrixL().solve(m); }

double mi_cost(const systems::SystemModel& sys, const Vec& x0, const VecSeq& controls,
               const GaussianBelief& belief, InfoDiagnostics* diagnostics) {
  return mi_cost_on_rollout(sys, rollout_nominal(sys, x0, controls, belief.mean), controls, belief,
                            diagnostics);
}

double mi_cost_on_rollout(const systems::SystemModel& sys, const VecSeq& states,
                          const VecSeq& controls, const GaussianBelief& belief,
                          InfoDiagnostics* diagnostics) {
  check_rollout(sys, states, controls, belief);
  if (controls.empty()) throw DimensionMismatch("mi_cost: needs at least one control");
  const NoiseWhitener noise(sys.state_noise());
  if (diagnostics) diagnostics->noise_regularized = noise.regularized();

  // log det(F S F' + Sx) - log det Sx = log det(I + W S W') with W = L^{-1} F.
  double info = 0.0;
  for (std::size_t i = 0; i < controls.size(); ++i) {
    const Mat w = noise.whiten(sys.jac_f_theta(states[i], controls[i], belief.mean));
    Mat m = w * belief.cov * w.transpose();
    m.diagonal().array() += 1.0;
    info += logdet_psd(0.5 * (m + m.transpose()));
  }
  return -0.5 * info;
}

void validate(const DirectedInfoConfig& cfg) {
  if (cfg.n_belief_samples < 1 || cfg.n_noise_samples < 1 || cfg.n_eval_components < 1) {
    throw ConfigError("directed_info sample counts must be positive");
  }
}

DirectedInfoResult directed_info_cost_mc(const systems::SystemModel& sys, const Vec& x0,
                                         const VecSeq& controls, const GaussianBelief& belief,
                                         const DirectedInfoConfig& cfg, RngStream& rng) {
  return directed_info_cost_mc_on_rollout(sys, rollout_nominal(sys, x0, controls, belief.mean),
                                          controls, belief, cfg, rng);
}

DirectedInfoResult directed_info_cost_mc_on_rollout(const systems::SystemModel& sys,
                                                    const VecSeq& states, const VecSeq& controls,
                                                    const GaussianBelief& belief,
                                                    const DirectedInfoConfig& cfg, RngStream& rng) {
  validate(cfg);
  check_rollout(sys, states, controls, belief);
  require_full_observation(sys, "directed_info_cost_mc");
  const NoiseWhitener noise(sys.state_noise());

  const int k_count = cfg.n_belief_samples;
  const int n_eval = std::min(cfg.n_eval_components, k_count);
  const int per_component = cfg.n_noise_samples;
  const int n_samples = n_eval * per_component;
  const int nx = sys.state_dim();

  RngStream belief_rng = rng.split(0);
  const GaussianSampler belief_sampler(belief.cov);
  std::vector<Vec> thetas;
  thetas.reserve(k_count);
  for (int k = 0; k < k_count; ++k) thetas.push_back(belief.mean + belief_sampler.sample(belief_rng));

  // Per evaluation sample, the information summed over steps; the spread of
  // these totals gives the standard error of the whole-horizon estimate.
  Vec totals = Vec::Zero(n_samples);
  const double log_k = std::log(static_cast<double>(k_count));
  constexpr int kChunk = 64;

  Mat means(nx, k_count);
  for (std::size_t i = 0; i < controls.size(); ++i) {
    for (int k = 0; k < k_count; ++k) means.col(k) = sys.step(states[i], controls[i], thetas[k]);
    means = noise.whiten(means);
    const Vec mean_sq = means.colwise().squaredNorm().transpose();

    RngStream step_rng = rng.split(1 + i);
    Mat y(nx, n_samples);
    for (int s = 0; s < n_samples; ++s) y.col(s) = means.col(s / per_component) + step_rng.normal_vec(nx);

    for (int start = 0; start < n_samples; start += kChunk) {
      const int len = std::min(kChunk, n_samples - start);
      const auto yc = y.middleCols(start, len);
      // -1/2 |y - mu_j|^2 for every (sample, component) pair.
      Mat logits = yc.transpose() * means;
      logits.array().colwise() -= 0.5 * yc.colwise().squaredNorm().transpose().array();
      logits.array().rowwise() -= 0.5 * mean_sq.transpose().array();
      Vec lse(len);
      logsumexp_rows(logits, lse);
      for (int r = 0; r < len; ++r) {
        const int s = start + r;
        // Taken from the same expansion as the mixture terms so that they
        // cancel exactly when all components coincide.
        const double log_own = logits(r, s / per_component);
        totals[s] += log_own - (lse[r] - log_k);
      }
    }
  }

  DirectedInfoResult result;
  result.noise_regularized = noise.regularized();
  const double mean_info = totals.mean();
  result.value = -mean_info;
  // Draws that share a component are correlated, so the error is computed
  // from per-component averages.
  if (n_eval > 1) {
    const Vec per_component_mean =
        Eigen::Map<const Mat>(totals.data(), per_component, n_eval).colwise().mean().transpose();
    const double var = (per_component_mean.array() - mean_info).square().sum() / (n_eval - 1);
    result.std_error = std::sqrt(var / n_eval);
  }
  result.high_variance = result.std_error > 0.1 * std::abs(result.value);
  if (!std::isfinite(result.value)) throw NonFiniteOutput("directed_info_cost_mc: non-finite estimate");
  return result;
}

std::string to_string(InfoVariant v) {
  return v == InfoVariant::kClosedFormMi ? "closed_form_mi" : "directed_info_mc";
}

InfoVariant parse_info_variant(const std::string& s) {
  if (s == "closed_form_mi") return InfoVariant::kClosedFormMi;
  if (s == "directed_info_mc") return InfoVariant::kDirectedInfoMc;
  throw ConfigError("info_variant must be 'closed_form_mi' or 'directed_info_mc', got '" + s + "'");
}

}  // namespace infogather::infocost
