#include "infogather/core/errors.hpp"
#include "infogather/core/linalg.hpp"
#include "infogather/infocost/composite.hpp"
#include "infogather/infocost/info_cost.hpp"
#include "infogather/infocost/task_cost.hpp"
#include "infogather/systems/double_integrator.hpp"
#include "infogather/systems/pendulum.hpp"
#include "infogather/systems/reference.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <iostream>
#include <numbers>

using namespace infogather;
using namespace infogather::infocost;
using infogather::systems::AffineInParams;
using infogather::systems::DampedPendulum;
using infogather::systems::DoubleIntegrator;
using infogather::systems::ScalarLinear;

namespace {

Mat random_mat(int r, int c, RngStream& rng) {
  Mat m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = rng.normal();
  return m;
}

Mat random_spd(int n, RngStream& rng, double ridge) {
  const Mat c = random_mat(n, n, rng);
  return symmetrize(c * c.transpose() + ridge * Mat::Identity(n, n));
}

VecSeq random_controls(const systems::SystemModel& sys, int t, RngStream& rng) {
  VecSeq u;
  for (int i = 0; i < t; ++i) u.push_back(rng.uniform_vec(sys.control_bounds().lo, sys.control_bounds().hi));
  return u;
}

DoubleIntegrator noisy_double_integrator(double noise) {
  systems::CommonOptions common;
  common.state_noise = noise * Mat::Identity(4, 4);
  return DoubleIntegrator({}, common);
}

}  // namespace

TEST(Rollout, EmptyHorizon) {
  DoubleIntegrator sys;
  const Vec x0 = Vec::Ones(4);
  const VecSeq s = rollout_nominal(sys, x0, {}, sys.theta_true());
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0], x0);
}

TEST(Rollout, DoubleIntegratorCoasts) {
  DoubleIntegrator sys;
  Vec x0(4);
  x0 << 0, 0, 1, 0;
  const VecSeq s = rollout_nominal(sys, x0, VecSeq(3, Vec::Zero(2)), sys.theta_true());
  ASSERT_EQ(s.size(), 4u);
  for (int k = 0; k <= 3; ++k) {
    EXPECT_NEAR(s[k][0], 0.1 * k, 1e-14);
    EXPECT_NEAR(s[k][2], 1.0, 1e-14);
    EXPECT_EQ(s[k][1], 0.0);
  }
}

TEST(Rollout, PendulumEquilibriumIsConstant) {
  DampedPendulum sys;
  for (const Vec& x : rollout_nominal(sys, Vec::Zero(2), VecSeq(5, Vec::Zero(1)), sys.theta_true())) {
    EXPECT_EQ(x, Vec::Zero(2));
  }
}

TEST(MiCost, PerfectKnowledgeIsZero) {
  DoubleIntegrator sys;
  RngStream rng(1);
  const GaussianBelief b{sys.theta_true(), Mat::Zero(24, 24)};
  EXPECT_EQ(mi_cost(sys, sys.sample_state(rng), random_controls(sys, 5, rng), b), 0.0);
}

TEST(MiCost, ScalarHandValues) {
  ScalarLinear sys(0.5, 1.0);
  const GaussianBelief b{Vec::Constant(1, 0.5), Mat::Identity(1, 1)};
  // F = df/dtheta = x0.
  EXPECT_NEAR(mi_cost(sys, Vec::Constant(1, 1.0), {Vec::Zero(1)}, b), -0.5 * std::log(2.0), 1e-10);
  EXPECT_NEAR(mi_cost(sys, Vec::Constant(1, 2.0), {Vec::Zero(1)}, b), -0.5 * std::log(5.0), 1e-10);
  double previous = 0.0;
  for (double x = 0.5; x < 4.0; x += 0.5) {
    const double c = mi_cost(sys, Vec::Constant(1, x), {Vec::Zero(1)}, b);
    EXPECT_LT(c, previous);
    previous = c;
  }
}

TEST(MiCost, SignAndStrictNegativity) {
  RngStream rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const int nt = 1 + static_cast<int>(rng.uniform() * 6);
    const int nx = 1 + static_cast<int>(rng.uniform() * 4);
    AffineInParams sys(random_mat(nx, nt, rng), Vec::Zero(nx), random_spd(nx, rng, 0.01));
    const GaussianBelief b{rng.normal_vec(nt), random_spd(nt, rng, 0.01)};
    const double c = mi_cost(sys, Vec::Zero(nx), VecSeq(3, Vec::Zero(1)), b);
    EXPECT_LE(c, 1e-9);
    EXPECT_LT(c, 0.0);
  }
}

TEST(MiCost, CovarianceMonotone) {
  RngStream rng(3);
  DoubleIntegrator sys;
  for (int trial = 0; trial < 50; ++trial) {
    const Vec x0 = sys.sample_state(rng);
    const VecSeq u = random_controls(sys, 4, rng);
    const Mat sigma = 0.1 * random_spd(24, rng, 0.01);
    const Mat d = 0.1 * random_mat(24, 3, rng);
    const GaussianBelief small{sys.theta_true(), sigma};
    const GaussianBelief large{sys.theta_true(), sigma + d * d.transpose()};
    EXPECT_LE(mi_cost(sys, x0, u, large), mi_cost(sys, x0, u, small) + 1e-9);
  }
}

TEST(MiCost, OrthogonalReparameterizationInvariance) {
  RngStream rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const int nt = 2 + static_cast<int>(rng.uniform() * 4);
    const Mat f = random_mat(3, nt, rng);
    const Mat u = Eigen::HouseholderQR<Mat>(random_mat(nt, nt, rng)).householderQ();
    const Mat noise = random_spd(3, rng, 0.1);
    AffineInParams base(f, Vec::Zero(3), noise);
    AffineInParams rotated(f * u.transpose(), Vec::Zero(3), noise);
    const GaussianBelief b{rng.normal_vec(nt), random_spd(nt, rng, 0.1)};
    const GaussianBelief rb{u * b.mean, u * b.cov * u.transpose()};
    const VecSeq controls(2, Vec::Zero(1));
    EXPECT_NEAR(mi_cost(base, Vec::Zero(3), controls, b), mi_cost(rotated, Vec::Zero(3), controls, rb), 1e-10);
  }
}

TEST(MiCost, RegularizesSingularStateNoise) {
  ScalarLinear sys(0.5, 0.0);
  const GaussianBelief b{Vec::Constant(1, 0.5), Mat::Identity(1, 1)};
  InfoDiagnostics diag;
  const double c = mi_cost(sys, Vec::Constant(1, 1.0), {Vec::Zero(1)}, b, &diag);
  EXPECT_TRUE(diag.noise_regularized);
  EXPECT_NEAR(c, -0.5 * std::log(1.0 + 1.0 / NoiseWhitener::kRegularization), 1e-8);
  ScalarLinear fine(0.5, 1.0);
  mi_cost(fine, Vec::Constant(1, 1.0), {Vec::Zero(1)}, b, &diag);
  EXPECT_FALSE(diag.noise_regularized);
}

TEST(DirectedInfo, PerfectKnowledgeIsZero) {
  DoubleIntegrator sys = noisy_double_integrator(0.1);
  RngStream rng(5);
  const GaussianBelief b{sys.theta_true(), Mat::Zero(24, 24)};
  const auto r = directed_info_cost_mc(sys, sys.sample_state(rng), random_controls(sys, 3, rng), b, {}, rng);
  EXPECT_LT(std::abs(r.value), 1e-6);
}

TEST(DirectedInfo, SingleBeliefSampleIsWithinNoise) {
  DoubleIntegrator sys = noisy_double_integrator(0.1);
  RngStream rng(6);
  const GaussianBelief b{sys.theta_true(), 0.25 * Mat::Identity(24, 24)};
  DirectedInfoConfig cfg;
  cfg.n_belief_samples = 1;
  const auto r = directed_info_cost_mc(sys, sys.sample_state(rng), random_controls(sys, 3, rng), b, cfg, rng);
  EXPECT_LE(std::abs(r.value), 3.0 * r.std_error + 1e-12);
}

TEST(DirectedInfo, DeterministicGivenSeed) {
  DoubleIntegrator sys = noisy_double_integrator(0.1);
  RngStream setup(7);
  const Vec x0 = sys.sample_state(setup);
  const VecSeq u = random_controls(sys, 3, setup);
  const GaussianBelief b{sys.theta_true(), 0.25 * Mat::Identity(24, 24)};
  RngStream a(70), c(70);
  EXPECT_EQ(directed_info_cost_mc(sys, x0, u, b, {}, a).value, directed_info_cost_mc(sys, x0, u, b, {}, c).value);
}

TEST(DirectedInfo, MatchesClosedFormForLinearSystem) {
  // f is linear in theta, so the belief pushforward is exactly Gaussian and
  // the closed form is the reference.
  DoubleIntegrator sys = noisy_double_integrator(0.1);
  DirectedInfoConfig cfg;
  cfg.n_belief_samples = 5000;
  int within = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    RngStream rng(seed);
    const Vec x0 = sys.sample_state(rng);
    const VecSeq u = random_controls(sys, 3, rng);
    const GaussianBelief b{sys.theta_true(), 0.25 * Mat::Identity(24, 24)};
    const double closed = mi_cost(sys, x0, u, b);
    const double mc = directed_info_cost_mc(sys, x0, u, b, cfg, rng).value;
    if (std::abs(mc - closed) <= 0.05 * std::abs(closed)) ++within;
  }
  EXPECT_GE(within, 4);
}

TEST(DirectedInfo, PendulumMixtureEntropyMatchesQuadrature) {
  // Belief uncertainty only on L, one step: only the angular-velocity
  // coordinate depends on theta, so the information is the 1-D entropy of
  // p(w') = int N(w'; m(L), s^2) N(L; L0, v) dL minus the noise entropy.
  DampedPendulum sys;
  const double noise_var = sys.state_noise()(1, 1);
  const double sd = std::sqrt(noise_var);
  const auto& p = sys.params();
  Vec x0(2);
  x0 << 1.0, 0.5;
  const double u = 2.0;
  const double b = sys.theta_true()[0];
  const double l0 = 1.0, l_std = 0.15;
  auto mean_of = [&](double l) {
    return x0[1] + p.dt * (u - b * x0[1] - p.mass * p.gravity * p.length * std::sin(x0[0])) / l;
  };

  const int n_l = 4001;
  std::vector<double> ls(n_l), ws(n_l);
  double wsum = 0.0;
  for (int j = 0; j < n_l; ++j) {
    ls[j] = l0 + l_std * (-6.0 + 12.0 * j / (n_l - 1));
    ws[j] = std::exp(-0.5 * std::pow((ls[j] - l0) / l_std, 2));
    wsum += ws[j];
  }
  for (double& w : ws) w /= wsum;
  double lo = 1e300, hi = -1e300;
  for (double l : ls) {
    lo = std::min(lo, mean_of(l));
    hi = std::max(hi, mean_of(l));
  }
  lo -= 10 * sd;
  hi += 10 * sd;
  const int n_y = 6001;
  const double dy = (hi - lo) / (n_y - 1);
  double entropy = 0.0;
  for (int i = 0; i < n_y; ++i) {
    const double y = lo + i * dy;
    double dens = 0.0;
    for (int j = 0; j < n_l; ++j) {
      const double z = (y - mean_of(ls[j])) / sd;
      dens += ws[j] * std::exp(-0.5 * z * z);
    }
    dens /= sd * std::sqrt(2.0 * std::numbers::pi);
    if (dens > 0.0) entropy -= dens * std::log(dens) * dy;
  }
  const double information = entropy - 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e * noise_var);

  Mat cov = Mat::Zero(2, 2);
  cov(1, 1) = l_std * l_std;
  Vec mean(2);
  mean << b, l0;
  const GaussianBelief belief{mean, cov};
  DirectedInfoConfig cfg;
  cfg.n_belief_samples = 20000;
  cfg.n_eval_components = 512;
  RngStream rng(11);
  const auto mc = directed_info_cost_mc(sys, x0, {Vec::Constant(1, u)}, belief, cfg, rng);
  EXPECT_NEAR(-mc.value, information, 0.03 * information);

  const double linearized = mi_cost(sys, x0, {Vec::Constant(1, u)}, belief);
  std::cout << "pendulum directed info: quadrature " << -information << ", mc " << mc.value << " (se "
            << mc.std_error << "), linearized " << linearized << "\n";
}

TEST(TaskCost, GoalAndWrapAndDistance) {
  TaskCostSpec goal;
  goal.kind = TaskCostSpec::Kind::kGoalDeviation;
  goal.goal = Vec::Ones(4);
  EXPECT_EQ(task_cost(goal, VecSeq(4, Vec::Ones(4)), VecSeq(3, Vec::Zero(2))), 0.0);
  goal.weights = (Vec(4) << 2, 1, 0, 0).finished();
  VecSeq states(2, Vec::Zero(4));
  EXPECT_NEAR(task_cost(goal, states, {Vec::Zero(2)}), 3.0, 1e-15);

  TaskCostSpec angle;
  angle.kind = TaskCostSpec::Kind::kAngleTracking;
  angle.ref_angle = 0.3;
  VecSeq pend{Vec::Zero(2), (Vec(2) << 0.3 + 2 * std::numbers::pi, 1.0).finished()};
  EXPECT_NEAR(task_cost(angle, pend, {Vec::Zero(1)}), 0.0, 1e-24);
  EXPECT_NEAR(wrap_angle(-std::numbers::pi), std::numbers::pi, 1e-15);
  EXPECT_NEAR(wrap_angle(3 * std::numbers::pi / 2), -std::numbers::pi / 2, 1e-15);

  TaskCostSpec evade;
  evade.kind = TaskCostSpec::Kind::kEvaderDistance;
  Vec together(8);
  together << 1, 2, 0, 0, 1, 2, 5, 5;
  EXPECT_EQ(task_cost(evade, {Vec::Zero(8), together}, {Vec::Zero(2)}), 0.0);
  evade.control_effort_weight = 0.5;
  EXPECT_NEAR(task_cost(evade, {Vec::Zero(8), together}, {Vec::Ones(2)}), 1.0, 1e-15);
  Vec apart = together;
  apart[4] = 4.0;
  EXPECT_NEAR(task_cost(evade, {Vec::Zero(8), apart}, {Vec::Zero(2)}), -9.0, 1e-15);
}

TEST(TaskCost, Validation) {
  TaskCostSpec spec;
  spec.kind = TaskCostSpec::Kind::kGoalDeviation;
  spec.goal = Vec::Zero(3);
  EXPECT_THROW(validate(spec, 4), DimensionMismatch);
  spec.goal = Vec::Zero(4);
  spec.weights = Vec::Constant(4, -1.0);
  EXPECT_THROW(validate(spec, 4), ConfigError);
  EXPECT_THROW(parse_task_kind("fly"), ConfigError);
}

TEST(Composite, LambdaCombinations) {
  DoubleIntegrator sys;
  RngStream rng(12);
  CostContext ctx;
  ctx.sys = &sys;
  ctx.belief = {sys.theta_true(), 0.25 * Mat::Identity(24, 24)};
  ctx.x0 = sys.sample_state(rng);
  ctx.task.kind = TaskCostSpec::Kind::kGoalDeviation;
  ctx.task.goal = Vec::Ones(4);
  const VecSeq u = random_controls(sys, 5, rng);
  const VecSeq states = rollout_nominal(sys, ctx.x0, u, ctx.belief.mean);
  const double task = task_cost(ctx.task, states, u);
  const double info = mi_cost(sys, ctx.x0, u, ctx.belief);

  ctx.lambda = 0.0;
  EXPECT_EQ(composite_cost(ctx, u, InfoVariant::kClosedFormMi, rng).total, task);
  ctx.lambda = 2.0;
  EXPECT_NEAR(composite_cost(ctx, u, InfoVariant::kClosedFormMi, rng).total, task + 2.0 * info, 1e-9);
  ctx.lambda = 1.0;
  ctx.task = {};
  EXPECT_EQ(composite_cost(ctx, u, InfoVariant::kClosedFormMi, rng).total, info);
}

TEST(Composite, MonotoneInLambda) {
  DampedPendulum sys;
  RngStream rng(13);
  CostContext ctx;
  ctx.sys = &sys;
  ctx.belief = {sys.theta_true(), 0.1 * Mat::Identity(2, 2)};
  ctx.x0 = sys.sample_state(rng);
  ctx.task.kind = TaskCostSpec::Kind::kAngleTracking;
  const VecSeq u = random_controls(sys, 8, rng);
  double previous = std::numeric_limits<double>::infinity();
  for (double lambda : {0.0, 1.0, 10.0, 50.0}) {
    ctx.lambda = lambda;
    const double c = composite_cost(ctx, u, InfoVariant::kClosedFormMi, rng).total;
    EXPECT_LT(c, previous);
    previous = c;
  }
}

TEST(Composite, ValidationRejectsBadLambda) {
  DoubleIntegrator sys;
  CostContext ctx;
  ctx.sys = &sys;
  ctx.belief = {sys.theta_true(), Mat::Identity(24, 24)};
  ctx.x0 = Vec::Zero(4);
  ctx.lambda = -1.0;
  EXPECT_THROW(validate(ctx), ConfigError);
  ctx.lambda = std::nan("");
  EXPECT_THROW(validate(ctx), ConfigError);
}
