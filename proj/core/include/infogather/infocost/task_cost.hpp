#pragma once

#include "infogather/core/types.hpp"

#include <string>

namespace infogather::infocost {

/// Task cost over a nominal rollout, summed over states[1..T], plus
/// control_effort_weight * sum |u_i|^2.
///
///   kGoalDeviation   sum (x_i - goal)' diag(weights) (x_i - goal)
///   kAngleTracking   weights[0] * sum wrap(x_i[0] - ref_angle)^2, wrap to (-pi, pi]
///   kEvaderDistance  -weights[0] * sum |x_i[0:2] - x_i[4:6]|^2
///
/// Empty weights mean all ones.
struct TaskCostSpec {
  enum class Kind { kNone, kGoalDeviation, kAngleTracking, kEvaderDistance };

  Kind kind = Kind::kNone;
  Vec goal;
  Vec weights;
  double ref_angle = 0.0;
  double control_effort_weight = 0.0;
};

/// Throws ConfigError for negative or non-finite weights and DimensionMismatch
/// when goal/weights do not fit a state of dimension `state_dim`.
void validate(const TaskCostSpec& spec, int state_dim);

double task_cost(const TaskCostSpec& spec, const VecSeq& states, const VecSeq& controls);

/// Wraps an angle to (-pi, pi].
double wrap_angle(double a);

std::string to_string(TaskCostSpec::Kind kind);
/// Accepts "none", "goal_deviation", "angle_tracking", "evader_distance".
TaskCostSpec::Kind parse_task_kind(const std::string& s);

}  // namespace infogather::infocost
