#pragma once

#include "infogather/systems/system_model.hpp"

namespace infogather::systems {

/// Damped pendulum, explicit Euler:
///   phi'   = phi + omega dt
///   omega' = omega + dt (u - b omega - m g l sin phi) / L
///
/// State [phi, omega], control [torque], theta = [b, L].
class DampedPendulum final : public SystemModel {
 public:
  struct Params {
    double dt = 0.05;
    double mass = 1.0;
    double gravity = 9.81;
    double length = 1.0;
    double damping = 0.3;
    double inertia = 1.0;
    double torque_limit = 3.0;
  };

  DampedPendulum() : DampedPendulum(Params()) {}
  explicit DampedPendulum(const Params& params, const CommonOptions& common = {});

  std::string name() const override { return "pendulum"; }
  std::vector<std::string> param_layout() const override { return {"b", "L"}; }
  Vec sample_state(RngStream& rng) const override;

  const Params& params() const { return params_; }

 protected:
  Vec do_step(const Vec& x, const Vec& u, const Vec& theta) const override;
  Mat do_jac_f_theta(const Vec& x, const Vec& u, const Vec& theta) const override;

 private:
  double mgl() const { return params_.mass * params_.gravity * params_.length; }

  Params params_;
};

}  // namespace infogather::systems
