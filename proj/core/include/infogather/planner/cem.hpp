#pragma once

#include "infogather/core/rng.hpp"
#include "infogather/core/types.hpp"
#include "infogather/infocost/composite.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace infogather::planner {

struct CemConfig {
  int horizon = 10;
  int population = 256;
  int elites = 16;
  int iterations = 8;
  /// Per control dimension; defaults to 0.5 * (hi - lo).
  std::optional<Vec> init_std;
  double momentum = 0.5;
  double min_std = 1e-3;
  /// Threads used to evaluate candidates. Results do not depend on it.
  int threads = 1;
};

void validate(const CemConfig& cfg, int control_dim);

struct PlanResult {
  VecSeq controls;
  double best_cost = 0.0;
  infocost::CostBreakdown cost_breakdown;
  int iterations_run = 0;
  /// Best cost found so far, after each iteration. Non-increasing.
  std::vector<double> elite_cost_history;
};

/// A cost over a control sequence. It may throw NonFiniteOutput or
/// SingularGain to mark the candidate invalid. The stream is private to the
/// candidate, so a stochastic cost is reproducible given the planner's rng.
using SequenceCost = std::function<double(const VecSeq&, RngStream&)>;

struct CemSearch {
  VecSeq controls;
  double cost = 0.0;
  /// Re-evaluating the cost on `controls` with this stream reproduces `cost`.
  RngStream stream{0};
  int iterations_run = 0;
  std::vector<double> elite_cost_history;
};

/// Cross-entropy search over bounded sequences of `cfg.horizon` controls.
///
/// Samples come from a diagonal Gaussian over the flattened sequence and are
/// clamped to the bounds. Every iteration also evaluates the current mean, so
/// the result is never worse than `init_mean` (zeros clamped to the bounds if
/// not given). The mean and std are refit to the elites with momentum and the
/// std is floored at min_std. The best candidate ever seen is returned.
/// Throws AllCandidatesInvalid if no candidate had a finite cost.
CemSearch cem_minimize(const SequenceCost& cost, const ControlBounds& bounds, const CemConfig& cfg,
                       RngStream& rng, const VecSeq* init_mean = nullptr);

/// Minimizes composite_cost for the context.
PlanResult cem_plan(const infocost::CostContext& ctx, const CemConfig& cfg,
                    infocost::InfoVariant variant, RngStream& rng, const VecSeq* init_mean = nullptr);

/// Caller-owned warm-start state for receding-horizon planning.
struct WarmStart {
  VecSeq mean;  // empty before the first plan
};

/// Drops the first control and repeats the last one.
VecSeq shift_plan(const VecSeq& plan);

/// Plans from the warm-start mean, stores the shifted plan back into `warm`,
/// and returns the first control with the full result.
std::pair<Vec, PlanResult> receding_horizon_step(const infocost::CostContext& ctx,
                                                 const CemConfig& cfg,
                                                 infocost::InfoVariant variant, RngStream& rng,
                                                 WarmStart& warm);

}  // namespace infogather::planner
