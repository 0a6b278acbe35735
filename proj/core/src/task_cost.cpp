#include "infogather/infocost/task_cost.hpp"

#include "infogather/core/errors.hpp"

#include <cmath>
#include <numbers>

namespace infogather::infocost {
namespace {

double scalar_weight(const TaskCostSpec& spec) {
  return spec.weights.size() == 0 ? 1.0 : spec.weights[0];
}

}  // namespace

void validate(const TaskCostSpec& spec, int state_dim) {
  if (!spec.weights.allFinite() || (spec.weights.array() < 0.0).any()) {
    throw ConfigError("task weights must be finite and non-negative");
  }
  if (!std::isfinite(spec.control_effort_weight) || spec.control_effort_weight < 0.0) {
    throw ConfigError("control_effort_weight must be finite and non-negative");
  }
  switch (spec.kind) {
    case TaskCostSpec::Kind::kGoalDeviation:
      require_dim(spec.goal.size(), state_dim, "task goal");
      if (spec.weights.size() != 0) require_dim(spec.weights.size(), state_dim, "task weights");
      break;
    case TaskCostSpec::Kind::kAngleTracking:
    case TaskCostSpec::Kind::kEvaderDistance:
      if (spec.weights.size() > 1) throw ConfigError("this task takes a single weight");
      if (spec.kind == TaskCostSpec::Kind::kEvaderDistance && state_dim < 6) {
        throw DimensionMismatch("evader_distance needs a two-agent state");
      }
      break;
    case TaskCostSpec::Kind::kNone:
      break;
  }
}

double wrap_angle(double a) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double r = std::fmod(a + std::numbers::pi, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  r -= std::numbers::pi;
  return r == -std::numbers::pi ? std::numbers::pi : r;
}

double task_cost(const TaskCostSpec& spec, const VecSeq& states, const VecSeq& controls) {
  if (states.size() != controls.size() + 1) {
    throw DimensionMismatch("task_cost: one more state than controls expected");
  }
  double cost = 0.0;
  for (std::size_t i = 1; i < states.size(); ++i) {
    const Vec& x = states[i];
    switch (spec.kind) {
      case TaskCostSpec::Kind::kGoalDeviation: {
        const Vec d = x - spec.goal;
        cost += spec.weights.size() == 0 ? d.squaredNorm()
                                         : (spec.weights.array() * d.array().square()).sum();
        break;
      }
      case TaskCostSpec::Kind::kAngleTracking: {
        const double e = wrap_angle(x[0] - spec.ref_angle);
        cost += scalar_weight(spec) * e * e;
        break;
      }
      case TaskCostSpec::Kind::kEvaderDistance:
        cost -= scalar_weight(spec) * (x.segment(0, 2) - x.segment(4, 2)).squaredNorm();
        break;
      case TaskCostSpec::Kind::kNone:
        break;
    }
  }
  if (spec.control_effort_weight != 0.0) {
    double effort = 0.0;
    for (const Vec& u : controls) effort += u.squaredNorm();
    cost += spec.control_effort_weight * effort;
  }
  return cost;
}

std::string to_string(TaskCostSpec::Kind kind) {
  switch (kind) {
    case TaskCostSpec::Kind::kGoalDeviation: return "goal_deviation";
    case TaskCostSpec::Kind::kAngleTracking: return "angle_tracking";
    case TaskCostSpec::Kind::kEvaderDistance: return "evader_distance";
    case TaskCostSpec::Kind::kNone: return "none";
  }
  return "none";
}

TaskCostSpec::Kind parse_task_kind(const std::string& s) {
  if (s == "none") return TaskCostSpec::Kind::kNone;
  if (s == "goal_deviation") return TaskCostSpec::Kind::kGoalDeviation;
  if (s == "angle_tracking") return TaskCostSpec::Kind::kAngleTracking;
  if (s == "evader_distance") return TaskCostSpec::Kind::kEvaderDistance;
  throw ConfigError("unknown task type '" + s + "'");
}

}  // namespace infogather::infocost
