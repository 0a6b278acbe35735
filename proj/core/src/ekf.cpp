#include "infogather/estimation/ekf.hpp"

#include "infogather/core/errors.hpp"
#include "infogather/core/linalg.hpp"

namespace infogather::estimation {

void validate_belief(const GaussianBelief& belief, int expected_dim) {
  require_dim(belief.mean.size(), expected_dim, "belief mean");
  require_dim(belief.cov.rows(), expected_dim, "belief covariance rows");
  require_dim(belief.cov.cols(), expected_dim, "belief covariance cols");
  if (!belief.mean.allFinite() || !belief.cov.allFinite()) {
    throw NonFiniteOutput("belief contains non-finite entries");
  }
}

GaussianBelief make_initial_belief(const Vec& theta_true, double prior_std, RngStream& rng) {
  if (!(prior_std >= 0.0)) throw ConfigError("prior_std must be non-negative");
  const auto n = theta_true.size();
  const Vec offset = prior_std * rng.normal_vec(static_cast<int>(n));
  return {theta_true + offset, prior_std * prior_std * Mat::Identity(n, n)};
}

GaussianBelief ekf_update(const GaussianBelief& belief, const Vec& o_next, const Vec& u,
                          const Vec& x, const systems::SystemModel& sys) {
  if (!sys.has_identity_observation()) {
    throw ConfigError("ekf_update: requires a fully observed system (q = identity)");
  }
  validate_belief(belief, sys.param_dim());
  require_dim(o_next.size(), sys.obs_dim(), "ekf_update observation");

  // Prediction.
  const Vec theta_pred = sys.param_step(belief.mean);
  const Mat g = sys.jac_g_theta(belief.mean);
  const Mat cov_pred = g * belief.cov * g.transpose() + sys.param_noise();
  const Vec x_pred = sys.step(x, u, theta_pred);
  const Vec o_pred = sys.observe(x_pred);

  // Correction.
  const Mat f = sys.jac_f_theta(x, u, theta_pred);
  const Mat q = sys.jac_q_x(x_pred);
  const Mat qf = q * f;
  Mat s = qf * cov_pred * qf.transpose() + q * sys.state_noise() * q.transpose();
  s.diagonal().array() += kInnovationJitter;
  Eigen::LLT<Mat> llt(s);
  if (llt.info() != Eigen::Success) {
    throw SingularInnovation("ekf_update: innovation covariance is not positive definite");
  }
  // K = P F'Q' S^{-1}, computed as (S^{-1} Q F P)' since S and P are symmetric.
  const Mat gain = llt.solve(qf * cov_pred).transpose();
  const Vec innovation = o_next - o_pred;

  GaussianBelief posterior;
  posterior.mean = theta_pred + gain * innovation;
  const auto n = belief.mean.size();
  posterior.cov = symmetrize((Mat::Identity(n, n) - gain * qf) * cov_pred);
  if (!posterior.mean.allFinite() || !posterior.cov.allFinite()) {
    throw NonFiniteOutput("ekf_update: non-finite posterior");
  }
  return posterior;
}

Mat info_form_covariance(const Mat& pred_cov, const Mat& sensitivity, const Mat& state_noise) {
  const auto n = pred_cov.rows();
  require_dim(pred_cov.cols(), n, "info_form_covariance prior");
  require_dim(sensitivity.cols(), n, "info_form_covariance sensitivity cols");
  require_dim(state_noise.rows(), sensitivity.rows(), "info_form_covariance noise");
  require_dim(state_noise.cols(), sensitivity.rows(), "info_form_covariance noise");

  Eigen::LLT<Mat> prior(pred_cov);
  Eigen::LLT<Mat> noise(state_noise);
  if (prior.info() != Eigen::Success || noise.info() != Eigen::Success) {
    throw SingularMatrix("info_form_covariance: prior and noise must be positive definite");
  }
  Mat information = prior.solve(Mat::Identity(n, n));
  information += sensitivity.transpose() * noise.solve(sensitivity);
  Eigen::LLT<Mat> posterior(0.5 * (information + information.transpose()));
  if (posterior.info() != Eigen::Success) {
    throw SingularMatrix("info_form_covariance: information matrix is singular");
  }
  return symmetrize(posterior.solve(Mat::Identity(n, n)));
}

}  // namespace infogather::estimation
