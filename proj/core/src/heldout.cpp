#include "infogather/harness/heldout.hpp"

#include "infogather/core/errors.hpp"
#include "infogather/core/linalg.hpp"

#include <cmath>
#include <limits>

namespace infogather::harness {

HeldoutSet gen_heldout(const systems::SystemModel& sys, const Vec& theta_true,
                       const HeldoutConfig& spec, RngStream& rng) {
  const GaussianSampler noise(sys.state_noise());
  const auto& bounds = sys.control_bounds();
  HeldoutSet set;
  set.transitions.reserve(spec.n_transitions);
  for (int i = 0; i < spec.n_transitions; ++i) {
    HeldoutTransition t;
    t.x = sys.sample_state(rng);
    t.u = rng.uniform_vec(bounds.lo, bounds.hi);
    t.x_next = sys.step(t.x, t.u, theta_true) + noise.sample(rng);
    set.transitions.push_back(std::move(t));
  }
  set.trajectories.reserve(spec.n_trajectories);
  for (int j = 0; j < spec.n_trajectories; ++j) {
    HeldoutTrajectory traj;
    traj.states.push_back(sys.sample_state(rng));
    for (int k = 0; k < spec.traj_length; ++k) {
      traj.controls.push_back(rng.uniform_vec(bounds.lo, bounds.hi));
      traj.states.push_back(sys.step(traj.states.back(), traj.controls.back(), theta_true) + noise.sample(rng));
    }
    set.trajectories.push_back(std::move(traj));
  }
  return set;
}

HeldoutErrors evaluate_heldout(const GaussianBelief& belief, const systems::SystemModel& sys,
                               const HeldoutSet& heldout) {
  if (heldout.transitions.empty() && heldout.trajectories.empty()) {
    throw ConfigError("evaluate_heldout: held-out set is empty");
  }
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const Vec& theta = belief.mean;
  HeldoutErrors out;

  if (!heldout.transitions.empty()) {
    double sum = 0.0;
    for (const auto& t : heldout.transitions) {
      try {
        sum += (t.x_next - sys.step(t.x, t.u, theta)).norm();
      } catch (const NonFiniteOutput&) {
        sum = kInf;
      }
    }
    out.single_step_err = sum / static_cast<double>(heldout.transitions.size());
  }

  if (!heldout.trajectories.empty()) {
    double sum = 0.0;
    for (const auto& traj : heldout.trajectories) {
      Vec pred = traj.states.front();
      try {
        for (std::size_t k = 0; k < traj.controls.size(); ++k) {
          pred = sys.step(pred, traj.controls[k], theta);
          sum += (traj.states[k + 1] - pred).norm();
        }
      } catch (const NonFiniteOutput&) {
        sum = kInf;
      }
    }
    out.autoregressive_err = sum / static_cast<double>(heldout.trajectories.size());
  }
  out.diverged = !std::isfinite(out.single_step_err) || !std::isfinite(out.autoregressive_err);
  if (out.diverged) {
    if (!std::isfinite(out.single_step_err)) out.single_step_err = kInf;
    if (!std::isfinite(out.autoregressive_err)) out.autoregressive_err = kInf;
  }
  return out;
}

}  // namespace infogather::harness
