#include "infogather/estimation/learning.hpp"

#include "infogather/core/errors.hpp"
#include "infogather/estimation/ekf.hpp"

namespace infogather::estimation {

LearningProcess::LearningProcess(const systems::SystemModel& sys, GaussianBelief belief0, Vec x0,
                                 Vec theta0)
    : sys_(sys),
      state_sampler_(sys.state_noise()),
      param_sampler_(sys.param_noise()),
      belief_(std::move(belief0)),
      x_(std::move(x0)),
      theta_(std::move(theta0)) {
  validate_belief(belief_, sys.param_dim());
  require_dim(x_.size(), sys.state_dim(), "initial state");
  require_dim(theta_.size(), sys.param_dim(), "initial parameters");
}

void LearningProcess::step(const Vec& u, RngStream& rng) {
  require_dim(u.size(), sys_.control_dim(), "control");
  Vec e_theta = param_sampler_.sample(rng);
  Vec theta = sys_.param_step(theta_) + e_theta;
  Vec e_x = state_sampler_.sample(rng);
  Vec x_next = sys_.step(x_, u, theta) + e_x;
  Vec o = sys_.observe(x_next);
  // The filter predicts from the state before the transition.
  belief_ = ekf_update(belief_, o, u, x_, sys_);
  x_ = std::move(x_next);
  theta_ = std::move(theta);
  o_ = std::move(o);
  e_x_ = std::move(e_x);
  e_theta_ = std::move(e_theta);
}

LearningTrace run_learning_process(const systems::SystemModel& sys, const GaussianBelief& belief0,
                                   const Vec& x0, const Vec& theta0, const VecSeq& controls,
                                   RngStream& rng) {
  LearningProcess process(sys, belief0, x0, theta0);
  LearningTrace trace;
  trace.beliefs.push_back(belief0);
  trace.states.push_back(x0);
  trace.true_params.push_back(theta0);
  for (std::size_t j = 0; j < controls.size(); ++j) {
    try {
      process.step(controls[j], rng);
    } catch (const std::exception& e) {
      throw StepError(static_cast<int>(j), e.what());
    }
    trace.beliefs.push_back(process.belief());
    trace.states.push_back(process.state());
    trace.true_params.push_back(process.theta());
    trace.observations.push_back(process.last_observation());
    trace.controls.push_back(controls[j]);
    trace.state_noise.push_back(process.last_state_noise());
    trace.param_noise.push_back(process.last_param_noise());
  }
  return trace;
}

}  // namespace infogather::estimation
