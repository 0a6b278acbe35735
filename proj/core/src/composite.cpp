#include "infogather/infocost/composite.hpp"

#include "infogather/core/errors.hpp"

#include <cmath>

namespace infogather::infocost {
namespace {

void add_info(const CostContext& ctx, const VecSeq& states, const VecSeq& controls,
              InfoVariant variant, RngStream& rng, CostBreakdown& out) {
  if (variant == InfoVariant::kClosedFormMi) {
    InfoDiagnostics diag;
    out.info = mi_cost_on_rollout(*ctx.sys, states, controls, ctx.belief, &diag);
    out.noise_regularized = diag.noise_regularized;
  } else {
    const DirectedInfoResult r =
        directed_info_cost_mc_on_rollout(*ctx.sys, states, controls, ctx.belief, ctx.directed_info, rng);
    out.info = r.value;
    out.noise_regularized = r.noise_regularized;
    out.high_variance = r.high_variance;
  }
}

}  // namespace

void validate(const CostContext& ctx) {
  if (!ctx.sys) throw ConfigError("cost context has no system");
  if (!std::isfinite(ctx.lambda) || ctx.lambda < 0.0) {
    throw ConfigError("lambda must be finite and non-negative");
  }
  require_dim(ctx.belief.mean.size(), ctx.sys->param_dim(), "belief mean");
  require_dim(ctx.belief.cov.rows(), ctx.sys->param_dim(), "belief covariance");
  require_dim(ctx.x0.size(), ctx.sys->state_dim(), "planning start state");
  validate(ctx.task, ctx.sys->state_dim());
  validate(ctx.directed_info);
}

CostBreakdown composite_cost(const CostContext& ctx, const VecSeq& controls, InfoVariant variant,
                             RngStream& rng) {
  const VecSeq states = rollout_nominal(*ctx.sys, ctx.x0, controls, ctx.belief.mean);
  CostBreakdown out;
  out.task = task_cost(ctx.task, states, controls);
  if (ctx.lambda != 0.0) add_info(ctx, states, controls, variant, rng, out);
  out.total = out.task + ctx.lambda * out.info;
  return out;
}

CostBreakdown info_cost(const CostContext& ctx, const VecSeq& controls, InfoVariant variant,
                        RngStream& rng) {
  const VecSeq states = rollout_nominal(*ctx.sys, ctx.x0, controls, ctx.belief.mean);
  CostBreakdown out;
  add_info(ctx, states, controls, variant, rng, out);
  out.total = out.info;
  return out;
}

}  // namespace infogather::infocost
