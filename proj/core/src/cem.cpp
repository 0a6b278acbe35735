#include "infogather/planner/cem.hpp"

#include "infogather/core/errors.hpp"
#include "infogather/core/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace infogather::planner {
namespace {

VecSeq unflatten(const Vec& flat, int horizon, int nu) {
  VecSeq seq(horizon);
  for (int i = 0; i < horizon; ++i) seq[i] = flat.segment(i * nu, nu);
  return seq;
}

Vec flatten(const VecSeq& seq, int nu) {
  Vec flat(static_cast<Eigen::Index>(seq.size()) * nu);
  for (std::size_t i = 0; i < seq.size(); ++i) flat.segment(i * nu, nu) = seq[i];
  return flat;
}

Vec clamp_flat(const Vec& flat, const ControlBounds& bounds, int horizon) {
  const int nu = bounds.dim();
  Vec out(flat.size());
  for (int i = 0; i < horizon; ++i) out.segment(i * nu, nu) = bounds.clamp(flat.segment(i * nu, nu));
  return out;
}

}  // namespace

void validate(const CemConfig& cfg, int control_dim) {
  if (cfg.horizon < 1) throw ConfigError("planner.horizon must be >= 1");
  if (cfg.population < 1) throw ConfigError("planner.population must be >= 1");
  if (cfg.elites < 1 || cfg.elites > cfg.population) {
    throw ConfigError("planner.elites must be in [1, population]");
  }
  if (cfg.iterations < 1) throw ConfigError("planner.iterations must be >= 1");
  if (!(cfg.momentum >= 0.0 && cfg.momentum < 1.0)) throw ConfigError("planner.momentum must be in [0, 1)");
  if (!(cfg.min_std >= 0.0)) throw ConfigError("planner.min_std must be >= 0");
  if (cfg.init_std) {
    require_dim(cfg.init_std->size(), control_dim, "planner.init_std");
    if ((cfg.init_std->array() < 0.0).any()) throw ConfigError("planner.init_std must be >= 0");
  }
}

CemSearch cem_minimize(const SequenceCost& cost, const ControlBounds& bounds, const CemConfig& cfg,
                       RngStream& rng, const VecSeq* init_mean) {
  const int nu = bounds.dim();
  validate(cfg, nu);
  const int t = cfg.horizon;
  const int n = t * nu;

  Vec mean = Vec::Zero(n);
  if (init_mean) {
    if (static_cast<int>(init_mean->size()) != t) throw DimensionMismatch("init_mean length != horizon");
    for (const Vec& u : *init_mean) require_dim(u.size(), nu, "init_mean control");
    mean = flatten(*init_mean, nu);
  }
  mean = clamp_flat(mean, bounds, t);
  const Vec per_dim = cfg.init_std ? *cfg.init_std : Vec(0.5 * (bounds.hi - bounds.lo));
  Vec std = per_dim.replicate(t, 1).cwiseMax(cfg.min_std);

  // Candidate streams hang off a root that depends on rng's position, so
  // repeated calls with the same rng object see fresh streams.
  const RngStream root = rng.split(rng.next_u64());

  CemSearch best;
  best.cost = std::numeric_limits<double>::infinity();
  bool found = false;

  const int pop = cfg.population;
  std::vector<Vec> candidates(pop);
  std::vector<double> costs(pop);
  std::vector<int> order(pop);

  for (int it = 0; it < cfg.iterations; ++it) {
    candidates[0] = mean;
    for (int c = 1; c < pop; ++c) {
      Vec z(n);
      for (int d = 0; d < n; ++d) z[d] = rng.normal();
      candidates[c] = clamp_flat(mean + std.cwiseProduct(z), bounds, t);
    }

    parallel_for(pop, cfg.threads, [&](int c) {
      RngStream stream = root.split(static_cast<std::uint64_t>(it) * pop + c);
      try {
        const double v = cost(unflatten(candidates[c], t, nu), stream);
        costs[c] = std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
      } catch (const NonFiniteOutput&) {
        costs[c] = std::numeric_limits<double>::infinity();
      } catch (const SingularGain&) {
        costs[c] = std::numeric_limits<double>::infinity();
      }
    });

    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return costs[a] < costs[b]; });

    if (std::isfinite(costs[order[0]]) && costs[order[0]] < best.cost) {
      best.cost = costs[order[0]];
      best.controls = unflatten(candidates[order[0]], t, nu);
      best.stream = root.split(static_cast<std::uint64_t>(it) * pop + order[0]);
      found = true;
    }
    best.elite_cost_history.push_back(best.cost);
    best.iterations_run = it + 1;

    int n_elite = 0;
    while (n_elite < cfg.elites && std::isfinite(costs[order[n_elite]])) ++n_elite;
    if (n_elite == 0) continue;
    Vec elite_mean = Vec::Zero(n);
    for (int e = 0; e < n_elite; ++e) elite_mean += candidates[order[e]];
    elite_mean /= n_elite;
    Vec elite_var = Vec::Zero(n);
    for (int e = 0; e < n_elite; ++e) elite_var += (candidates[order[e]] - elite_mean).array().square().matrix();
    elite_var /= n_elite;
    mean = clamp_flat(cfg.momentum * mean + (1.0 - cfg.momentum) * elite_mean, bounds, t);
    std = (cfg.momentum * std + (1.0 - cfg.momentum) * elite_var.cwiseSqrt()).cwiseMax(cfg.min_std);
  }

  if (!found) throw AllCandidatesInvalid("every CEM candidate had a non-finite cost");
  return best;
}

PlanResult cem_plan(const infocost::CostContext& ctx, const CemConfig& cfg,
                    infocost::InfoVariant variant, RngStream& rng, const VecSeq* init_mean) {
  infocost::validate(ctx);
  const SequenceCost cost = [&](const VecSeq& u, RngStream& stream) {
    return infocost::composite_cost(ctx, u, variant, stream).total;
  };
  CemSearch search = cem_minimize(cost, ctx.sys->control_bounds(), cfg, rng, init_mean);

  PlanResult result;
  result.cost_breakdown = infocost::composite_cost(ctx, search.controls, variant, search.stream);
  result.best_cost = result.cost_breakdown.total;
  result.controls = std::move(search.controls);
  result.iterations_run = search.iterations_run;
  result.elite_cost_history = std::move(search.elite_cost_history);
  return result;
}

VecSeq shift_plan(const VecSeq& plan) {
  if (plan.empty()) return plan;
  VecSeq out(plan.begin() + 1, plan.end());
  out.push_back(plan.back());
  return out;
}

std::pair<Vec, PlanResult> receding_horizon_step(const infocost::CostContext& ctx,
                                                 const CemConfig& cfg,
                                                 infocost::InfoVariant variant, RngStream& rng,
                                                 WarmStart& warm) {
  const bool warm_ok = static_cast<int>(warm.mean.size()) == cfg.horizon;
  PlanResult plan = cem_plan(ctx, cfg, variant, rng, warm_ok ? &warm.mean : nullptr);
  warm.mean = shift_plan(plan.controls);
  Vec first = plan.controls.front();
  return {std::move(first), std::move(plan)};
}

}  // namespace infogather::planner
