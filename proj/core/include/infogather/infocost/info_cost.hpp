#pragma once

#include "infogather/core/rng.hpp"
#include "infogather/core/types.hpp"
#include "infogather/systems/system_model.hpp"

#include <string>

namespace infogather::infocost {

/// x_{i+1} = f(x_i, u_i, theta_bar) with zero noise. Returns T+1 states starting at x0.
VecSeq rollout_nominal(const systems::SystemModel& sys, const Vec& x0, const VecSeq& controls,
                       const Vec& theta_bar);

/// Cholesky factor of the state noise used to whiten both information costs.
///
/// A state noise with smallest eigenvalue below 1e-10 gets 1e-8*I added first;
/// `regularized()` reports whether that happened.
class NoiseWhitener {
 public:
  static constexpr double kMinEigenvalue = 1e-10;
  static constexpr double kRegularization = 1e-8;

  explicit NoiseWhitener(const Mat& state_noise);

  /// L^{-1} m where L L' is the (possibly regularized) noise covariance.
  Mat whiten(const Mat& m) const;
  const Mat& covariance() const { return cov_; }
  double logdet() const { return logdet_; }
  bool regularized() const { return regularized_; }

 private:
  Mat cov_;
  Eigen::LLT<Mat> llt_;
  double logdet_ = 0.0;
  bool regularized_ = false;
};

struct InfoDiagnostics {
  bool noise_regularized = false;
};

/// Closed-form information cost -1/2 sum_i log(det S_i / det Sx) with
/// S_i = F_i Sigma F_i' + Sx and F_i = df/dtheta along the nominal rollout at
/// the belief mean. Always <= 0.
double mi_cost(const systems::SystemModel& sys, const Vec& x0, const VecSeq& controls,
               const GaussianBelief& belief, InfoDiagnostics* diagnostics = nullptr);

/// Same cost for an already computed nominal rollout (states.size() == controls.size() + 1).
double mi_cost_on_rollout(const systems::SystemModel& sys, const VecSeq& states,
                          const VecSeq& controls, const GaussianBelief& belief,
                          InfoDiagnostics* diagnostics = nullptr);

struct DirectedInfoConfig {
  int n_belief_samples = 1024;
  int n_noise_samples = 8;
  /// Mixture components that evaluation samples are drawn from. Since the
  /// belief draws are i.i.d., the first n_eval_components of them are a random
  /// subset; capped at n_belief_samples.
  int n_eval_components = 128;
};

void validate(const DirectedInfoConfig& cfg);

struct DirectedInfoResult {
  double value = 0.0;
  double std_error = 0.0;
  /// Standard error above 10% of |value|.
  bool high_variance = false;
  bool noise_regularized = false;
};

/// Monte-Carlo directed-information cost for a static belief and q = identity.
///
/// Per step the predicted next state is the Gaussian mixture
/// (1/K) sum_k N(f(x_i, u_i, theta_k), Sx) with theta_k ~ N(theta_bar, Sigma)
/// drawn once and reused for every step, and x_i the nominal rollout. The
/// conditional entropy given theta is 1/2 ln det(2 pi e Sx) exactly. The
/// information term is estimated from samples y = mu_k + e of component k as
/// the average of log N(y; mu_k, Sx) - log mixture(y), which is the plug-in
/// mixture entropy minus the conditional entropy with the conditional term's
/// sampling error cancelled against the same draws. The estimate is exactly 0
/// when Sigma = 0 or K = 1.
DirectedInfoResult directed_info_cost_mc(const systems::SystemModel& sys, const Vec& x0,
                                         const VecSeq& controls, const GaussianBelief& belief,
                                         const DirectedInfoConfig& cfg, RngStream& rng);

DirectedInfoResult directed_info_cost_mc_on_rollout(const systems::SystemModel& sys,
                                                    const VecSeq& states, const VecSeq& controls,
                                                    const GaussianBelief& belief,
                                                    const DirectedInfoConfig& cfg, RngStream& rng);

enum class InfoVariant { kClosedFormMi, kDirectedInfoMc };

std::string to_string(InfoVariant v);
/// Accepts "closed_form_mi" and "directed_info_mc".
InfoVariant parse_info_variant(const std::string& s);

}  // namespace infogather::infocost
