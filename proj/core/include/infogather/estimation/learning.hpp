#pragma once

#include "infogather/core/linalg.hpp"
#include "infogather/core/rng.hpp"
#include "infogather/core/types.hpp"
#include "infogather/systems/system_model.hpp"

#include <vector>

namespace infogather::estimation {

/// Everything nature and the filter produced over one run of the learning loop.
/// beliefs, states and true_params have one more entry than controls.
struct LearningTrace {
  std::vector<GaussianBelief> beliefs;
  VecSeq states;
  VecSeq true_params;
  VecSeq observations;  // observations[k] = q(states[k + 1])
  VecSeq controls;
  VecSeq state_noise;  // e_x added on transition k
  VecSeq param_noise;  // e_theta added on transition k
};

/// The true system plus the agent's filter, advanced one control at a time.
///
/// Each step draws e_theta then e_x from `rng` (always, even for zero noise, so
/// the stream position does not depend on the noise magnitudes), propagates
/// theta' = g(theta) + e_theta and x' = f(x, u, theta') + e_x, observes x' and
/// runs ekf_update. The system must outlive this object.
class LearningProcess {
 public:
  LearningProcess(const systems::SystemModel& sys, GaussianBelief belief0, Vec x0, Vec theta0);

  void step(const Vec& u, RngStream& rng);

  const GaussianBelief& belief() const { return belief_; }
  const Vec& state() const { return x_; }
  const Vec& theta() const { return theta_; }
  const Vec& last_observation() const { return o_; }
  const Vec& last_state_noise() const { return e_x_; }
  const Vec& last_param_noise() const { return e_theta_; }

 private:
  const systems::SystemModel& sys_;
  GaussianSampler state_sampler_;
  GaussianSampler param_sampler_;
  GaussianBelief belief_;
  Vec x_;
  Vec theta_;
  Vec o_;
  Vec e_x_;
  Vec e_theta_;
};

/// Runs an open-loop control sequence through LearningProcess. Errors are
/// rethrown as StepError carrying the index of the failing step.
LearningTrace run_learning_process(const systems::SystemModel& sys, const GaussianBelief& belief0,
                                   const Vec& x0, const Vec& theta0, const VecSeq& controls,
                                   RngStream& rng);

}  // namespace infogather::estimation
