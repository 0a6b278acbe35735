#pragma once

#include "infogather/harness/config.hpp"
#include "infogather/harness/heldout.hpp"
#include "infogather/systems/system_model.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace infogather::harness {

/// Metrics after `step` transitions (1-based) and the matching EKF update.
struct StepRow {
  int step = 0;
  double param_error = 0.0;  // |theta_bar - theta|
  double cov_trace = 0.0;
  double task_cost = 0.0;  // stage cost of the executed transition
  double info_cost = 0.0;  // information term of the executed plan (0 for random)
  double wall_ms = 0.0;
};

struct HeldoutRow {
  int step = 0;
  HeldoutErrors errors;
};

struct EpisodeRecord {
  std::string condition;
  std::uint64_t seed = 0;
  std::vector<StepRow> rows;
  /// Periodic evaluations; the last entry is the terminal one.
  std::vector<HeldoutRow> heldout;
  bool aborted = false;
  std::string error;
};

/// Closed-loop episode: choose a control (uniform random, or the first
/// control of a receding-horizon plan), step the true system with noise,
/// observe, run the EKF and record metrics. Deterministic given the seed.
/// Errors abort the episode; rows produced so far are kept and `aborted`
/// and `error` are set.
///
/// All randomness comes from substreams of RngStream(seed): the prior offset,
/// nature's noise, the random policy, the planner and the held-out set each
/// use their own, so the true noise sequence and held-out data are shared
/// across conditions for the same seed.
EpisodeRecord run_episode(const ExperimentConfig& cfg, const systems::SystemModel& sys,
                          const Condition& condition, std::uint64_t seed);

/// Convenience overload that builds the system from the config.
EpisodeRecord run_episode(const ExperimentConfig& cfg, const Condition& condition, std::uint64_t seed);

}  // namespace infogather::harness
