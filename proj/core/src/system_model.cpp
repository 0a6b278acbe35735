#include "infogather/systems/system_model.hpp"

#include "infogather/core/errors.hpp"
#include "infogather/core/linalg.hpp"

namespace infogather::systems {

SystemModel::SystemModel(Dims dims, ControlBounds bounds, Vec theta_true, Vec initial_state,
                         const CommonOptions& common, Mat default_state_noise)
    : dims_(dims),
      bounds_(std::move(bounds)),
      theta_true_(common.theta_true.value_or(std::move(theta_true))),
      initial_state_(common.initial_state.value_or(std::move(initial_state))),
      state_noise_(common.state_noise.value_or(std::move(default_state_noise))),
      param_noise_(common.param_noise.value_or(Mat::Zero(dims.param, dims.param))) {
  require_dim(bounds_.lo.size(), dims_.control, "control bounds (lo)");
  require_dim(bounds_.hi.size(), dims_.control, "control bounds (hi)");
  if ((bounds_.lo.array() >= bounds_.hi.array()).any()) {
    throw ConfigError("control bounds must satisfy lo < hi");
  }
  require_dim(theta_true_.size(), dims_.param, "theta_true");
  require_dim(initial_state_.size(), dims_.state, "initial_state");
  require_dim(state_noise_.rows(), dims_.state, "state_noise");
  require_dim(state_noise_.cols(), dims_.state, "state_noise");
  require_dim(param_noise_.rows(), dims_.param, "param_noise");
  require_dim(param_noise_.cols(), dims_.param, "param_noise");
  if (!state_noise_.allFinite() || !param_noise_.allFinite()) {
    throw ConfigError("noise covariances must be finite");
  }
  state_noise_ = symmetrize(state_noise_);
  param_noise_ = symmetrize(param_noise_);
}

Vec SystemModel::step(const Vec& x, const Vec& u, const Vec& theta) const {
  require_dim(x.size(), dims_.state, "step state");
  require_dim(u.size(), dims_.control, "step control");
  require_dim(theta.size(), dims_.param, "step theta");
  Vec out = do_step(x, u, theta);
  if (!out.allFinite()) throw NonFiniteOutput(name() + ": non-finite step output");
  return out;
}

Vec SystemModel::param_step(const Vec& theta) const {
  require_dim(theta.size(), dims_.param, "param_step theta");
  return do_param_step(theta);
}

Vec SystemModel::observe(const Vec& x) const {
  require_dim(x.size(), dims_.state, "observe state");
  return do_observe(x);
}

Mat SystemModel::jac_f_theta(const Vec& x, const Vec& u, const Vec& theta) const {
  require_dim(x.size(), dims_.state, "jac_f_theta state");
  require_dim(u.size(), dims_.control, "jac_f_theta control");
  require_dim(theta.size(), dims_.param, "jac_f_theta theta");
  Mat jac = do_jac_f_theta(x, u, theta);
  if (!jac.allFinite()) throw NonFiniteOutput(name() + ": non-finite Jacobian");
  return jac;
}

Mat SystemModel::jac_g_theta(const Vec& theta) const {
  require_dim(theta.size(), dims_.param, "jac_g_theta theta");
  return do_jac_g_theta(theta);
}

Mat SystemModel::jac_q_x(const Vec& x) const {
  require_dim(x.size(), dims_.state, "jac_q_x state");
  return do_jac_q_x(x);
}

Mat SystemModel::do_jac_f_theta(const Vec& x, const Vec& u, const Vec& theta) const {
  return central_difference_jacobian([&](const Vec& th) { return do_step(x, u, th); }, theta);
}

Mat SystemModel::do_jac_g_theta(const Vec&) const {
  return Mat::Identity(dims_.param, dims_.param);
}

Mat SystemModel::do_jac_q_x(const Vec&) const { return Mat::Identity(dims_.obs, dims_.state); }

}  // namespace infogather::systems
