#pragma once

#include "infogather/systems/system_model.hpp"

namespace infogather::systems {

/// Scalar x' = theta x + u. Closed-form Bayesian linear regression is the
/// exact posterior for this system, which makes it the EKF's reference case.
class ScalarLinear final : public SystemModel {
 public:
  ScalarLinear(double theta_true, double noise_variance, double control_limit = 1.0);

  std::string name() const override { return "scalar_linear"; }
  std::vector<std::string> param_layout() const override { return {"theta"}; }
  Vec sample_state(RngStream& rng) const override;

 protected:
  Vec do_step(const Vec& x, const Vec& u, const Vec& theta) const override;
  Mat do_jac_f_theta(const Vec& x, const Vec& u, const Vec& theta) const override;
};

/// f(x, u, theta) = offset + F theta with a fixed sensitivity matrix F.
/// Used for randomized checks where the Jacobian must be a prescribed matrix.
class AffineInParams final : public SystemModel {
 public:
  AffineInParams(Mat sensitivity, Vec offset, Mat state_noise);

  std::string name() const override { return "affine_in_params"; }
  std::vector<std::string> param_layout() const override;
  Vec sample_state(RngStream& rng) const override;

 protected:
  Vec do_step(const Vec& x, const Vec& u, const Vec& theta) const override;
  Mat do_jac_f_theta(const Vec& x, const Vec& u, const Vec& theta) const override;

 private:
  Mat sensitivity_;
  Vec offset_;
};

}  // namespace infogather::systems
