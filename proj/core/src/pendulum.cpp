#include "infogather/systems/pendulum.hpp"

#include "infogather/core/errors.hpp"

#include <cmath>
#include <numbers>

namespace infogather::systems {
namespace {

constexpr double kMinInertia = 1e-9;

void check_inertia(double inertia) {
  if (!(inertia > kMinInertia)) {
    throw NonFiniteOutput("pendulum: moment of inertia L must exceed 1e-9");
  }
}

}  // namespace

DampedPendulum::DampedPendulum(const Params& params, const CommonOptions& common)
    : SystemModel({2, 1, 2, 2},
                  {Vec::Constant(1, -params.torque_limit), Vec::Constant(1, params.torque_limit)},
                  (Vec(2) << params.damping, params.inertia).finished(), Vec::Zero(2), common,
                  1e-4 * Mat::Identity(2, 2)),
      params_(params) {
  if (params.dt <= 0.0) throw ConfigError("pendulum: dt must be positive");
  if (params.inertia <= 0.0 || params.damping < 0.0) {
    throw ConfigError("pendulum: require L > 0 and b >= 0");
  }
}

Vec DampedPendulum::sample_state(RngStream& rng) const {
  const double phi = rng.uniform(-std::numbers::pi, std::numbers::pi);
  const double omega = rng.uniform(-3.0, 3.0);
  return (Vec(2) << phi, omega).finished();
}

Vec DampedPendulum::do_step(const Vec& x, const Vec& u, const Vec& theta) const {
  const double b = theta[0];
  const double inertia = theta[1];
  check_inertia(inertia);
  const double dt = params_.dt;
  const double accel = (u[0] - b * x[1] - mgl() * std::sin(x[0])) / inertia;
  return (Vec(2) << x[0] + x[1] * dt, x[1] + accel * dt).finished();
}

Mat DampedPendulum::do_jac_f_theta(const Vec& x, const Vec& u, const Vec& theta) const {
  const double b = theta[0];
  const double inertia = theta[1];
  check_inertia(inertia);
  const double dt = params_.dt;
  const double torque = u[0] - b * x[1] - mgl() * std::sin(x[0]);
  Mat jac = Mat::Zero(2, 2);
  jac(1, 0) = -x[1] * dt / inertia;
  jac(1, 1) = -torque * dt / (inertia * inertia);
  return jac;
}

}  // namespace infogather::systems
