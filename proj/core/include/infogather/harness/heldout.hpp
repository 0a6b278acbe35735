#pragma once

#include "infogather/core/rng.hpp"
#include "infogather/core/types.hpp"
#include "infogather/harness/config.hpp"
#include "infogather/systems/system_model.hpp"

#include <vector>

namespace infogather::harness {

struct HeldoutTransition {
  Vec x;
  Vec u;
  Vec x_next;
};

struct HeldoutTrajectory {
  VecSeq states;  // controls.size() + 1 entries
  VecSeq controls;
};

struct HeldoutSet {
  std::vector<HeldoutTransition> transitions;
  std::vector<HeldoutTrajectory> trajectories;
};

/// Noisy data from the true system under uniform random bounded controls,
/// starting from sys.sample_state(). Parameters stay at theta_true (the
/// held-out set measures the model, not parameter drift).
HeldoutSet gen_heldout(const systems::SystemModel& sys, const Vec& theta_true,
                       const HeldoutConfig& spec, RngStream& rng);

struct HeldoutErrors {
  /// Mean of |x' - f(x, u, theta_bar)| over transitions.
  double single_step_err = 0.0;
  /// Mean over trajectories of sum_k |x_k - x_k^pred|, predicting from the
  /// true initial state with the recorded controls and no noise.
  double autoregressive_err = 0.0;
  /// A prediction failed or was non-finite; the affected error is +inf.
  bool diverged = false;
};

HeldoutErrors evaluate_heldout(const GaussianBelief& belief, const systems::SystemModel& sys,
                               const HeldoutSet& heldout);

}  // namespace infogather::harness
