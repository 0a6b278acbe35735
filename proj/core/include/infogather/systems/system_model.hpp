#pragma once

#include "infogather/core/rng.hpp"
#include "infogather/core/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace infogather::systems {

struct Dims {
  int state = 0;
  int control = 0;
  int param = 0;
  int obs = 0;
};

/// Overrides shared by every concrete system.
struct CommonOptions {
  std::optional<Mat> state_noise;
  std::optional<Mat> param_noise;
  std::optional<Vec> theta_true;
  std::optional<Vec> initial_state;
};

/// A stochastic Markov system x' = f(x, u, theta') + e_x, theta' = g(theta) + e_theta,
/// o = q(x).
///
/// Public entry points validate dimensions and finiteness, then forward to the
/// protected hooks. Instances are immutable after construction and safe to
/// share across threads.
class SystemModel {
 public:
  virtual ~SystemModel() = default;

  virtual std::string name() const = 0;
  /// Human-readable names of the theta entries, in layout order.
  virtual std::vector<std::string> param_layout() const = 0;
  /// A random state from the region the system is meant to operate in.
  virtual Vec sample_state(RngStream& rng) const = 0;

  const Dims& dims() const { return dims_; }
  int state_dim() const { return dims_.state; }
  int control_dim() const { return dims_.control; }
  int param_dim() const { return dims_.param; }
  int obs_dim() const { return dims_.obs; }

  const Mat& state_noise() const { return state_noise_; }
  const Mat& param_noise() const { return param_noise_; }
  const ControlBounds& control_bounds() const { return bounds_; }
  const Vec& theta_true() const { return theta_true_; }
  const Vec& initial_state() const { return initial_state_; }

  /// f(x, u, theta) without noise.
  Vec step(const Vec& x, const Vec& u, const Vec& theta) const;
  /// g(theta) without noise.
  Vec param_step(const Vec& theta) const;
  /// q(x).
  Vec observe(const Vec& x) const;

  Mat jac_f_theta(const Vec& x, const Vec& u, const Vec& theta) const;
  Mat jac_g_theta(const Vec& theta) const;
  Mat jac_q_x(const Vec& x) const;

  virtual bool has_identity_observation() const { return true; }
  virtual bool has_identity_param_dynamics() const { return true; }

 protected:
  SystemModel(Dims dims, ControlBounds bounds, Vec theta_true, Vec initial_state,
              const CommonOptions& common, Mat default_state_noise);

  virtual Vec do_step(const Vec& x, const Vec& u, const Vec& theta) const = 0;
  /// Defaults to central differences with h = 1e-5.
  virtual Mat do_jac_f_theta(const Vec& x, const Vec& u, const Vec& theta) const;
  virtual Vec do_param_step(const Vec& theta) const { return theta; }
  virtual Mat do_jac_g_theta(const Vec& theta) const;
  virtual Vec do_observe(const Vec& x) const { return x; }
  virtual Mat do_jac_q_x(const Vec& x) const;

 private:
  Dims dims_;
  ControlBounds bounds_;
  Vec theta_true_;
  Vec initial_state_;
  Mat state_noise_;
  Mat param_noise_;
};

}  // namespace infogather::systems
