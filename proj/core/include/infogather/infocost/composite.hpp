#pragma once

#include "infogather/core/rng.hpp"
#include "infogather/core/types.hpp"
#include "infogather/infocost/info_cost.hpp"
#include "infogather/infocost/task_cost.hpp"
#include "infogather/systems/system_model.hpp"

namespace infogather::infocost {

/// Everything a planning cost needs besides the candidate controls.
/// `sys` must outlive the context.
struct CostContext {
  const systems::SystemModel* sys = nullptr;
  GaussianBelief belief;
  Vec x0;
  double lambda = 0.0;
  TaskCostSpec task;
  DirectedInfoConfig directed_info;
};

/// Throws ConfigError / DimensionMismatch if the context is inconsistent.
void validate(const CostContext& ctx);

struct CostBreakdown {
  double total = 0.0;
  double task = 0.0;
  double info = 0.0;
  bool noise_regularized = false;
  bool high_variance = false;
};

/// J_task(nominal rollout) + lambda * J_info. With lambda == 0 the information
/// term is not computed at all and `info` is 0.
CostBreakdown composite_cost(const CostContext& ctx, const VecSeq& controls, InfoVariant variant,
                             RngStream& rng);

/// The information term alone, on the nominal rollout of `controls`.
CostBreakdown info_cost(const CostContext& ctx, const VecSeq& controls, InfoVariant variant,
                        RngStream& rng);

}  // namespace infogather::infocost
