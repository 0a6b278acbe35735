#include "infogather/harness/verification.hpp"

#include "infogather/core/linalg.hpp"
#include "infogather/estimation/ekf.hpp"
#include "infogather/estimation/learning.hpp"
#include "infogather/infocost/info_cost.hpp"
#include "infogather/systems/double_integrator.hpp"
#include "infogather/systems/reference.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace infogather::verify {
namespace {

Mat gaussian_matrix(int r, int c, RngStream& rng) {
  Mat m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = rng.normal();
  return m;
}

Mat random_spd(int n, RngStream& rng, double ridge) {
  const Mat c = gaussian_matrix(n, n, rng);
  return symmetrize(c * c.transpose() + ridge * Mat::Identity(n, n));
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

}  // namespace

CheckResult ekf_conjugate_oracle(int n_seeds, int n_transitions) {
  constexpr double kNoise = 0.01, kPriorMean = 0.3, kPriorVar = 0.5, kTheta = 0.8, kTol = 1e-6;
  int passed = 0;
  double worst = 0.0;
  for (int seed = 0; seed < n_seeds; ++seed) {
    systems::ScalarLinear sys(kTheta, kNoise);
    RngStream rng(static_cast<std::uint64_t>(seed));
    VecSeq controls;
    for (int i = 0; i < n_transitions; ++i) controls.push_back(Vec::Constant(1, rng.uniform(-1, 1)));
    const GaussianBelief b0{Vec::Constant(1, kPriorMean), Mat::Constant(1, 1, kPriorVar)};
    const auto trace = estimation::run_learning_process(sys, b0, sys.initial_state(), sys.theta_true(), controls, rng);

    double precision = 1.0 / kPriorVar, weighted = kPriorMean / kPriorVar;
    for (int k = 0; k < n_transitions; ++k) {
      const double x = trace.states[k][0];
      const double y = trace.states[k + 1][0] - controls[k][0];
      precision += x * x / kNoise;
      weighted += x * y / kNoise;
    }
    const double err = std::max(std::abs(trace.beliefs.back().mean[0] - weighted / precision),
                                std::abs(trace.beliefs.back().cov(0, 0) - 1.0 / precision));
    worst = std::max(worst, err);
    if (err <= kTol) ++passed;
  }
  return {"ekf_conjugate_oracle", passed == n_seeds,
          std::to_string(passed) + "/" + std::to_string(n_seeds) + " seeds within 1e-6, worst " + fmt(worst)};
}

CheckResult information_form_identity(int n_instances) {
  RngStream rng(2024);
  int passed = 0;
  double worst = 0.0;
  for (int i = 0; i < n_instances; ++i) {
    const int nt = 1 + static_cast<int>(rng.uniform() * 6);
    const int nx = 1 + static_cast<int>(rng.uniform() * 4);
    const Mat f = gaussian_matrix(nx, nt, rng);
    const Mat noise = random_spd(nx, rng, 0.1);
    systems::AffineInParams sys(f, rng.normal_vec(nx), noise);
    const GaussianBelief b{rng.normal_vec(nt), random_spd(nt, rng, 0.1)};
    const auto post = estimation::ekf_update(b, rng.normal_vec(nx), Vec::Zero(1), Vec::Zero(nx), sys);
    const double err = (post.cov - estimation::info_form_covariance(b.cov, f, noise)).norm();
    worst = std::max(worst, err);
    if (err <= 1e-8) ++passed;
  }
  return {"information_form_identity", passed == n_instances,
          std::to_string(passed) + "/" + std::to_string(n_instances) + " instances within 1e-8, worst " +
              fmt(worst)};
}

CheckResult closed_form_equivalence(const EquivalenceOptions& opts) {
  systems::CommonOptions common;
  common.state_noise = opts.state_noise * Mat::Identity(4, 4);
  const systems::DoubleIntegrator sys({}, common);
  infocost::DirectedInfoConfig cfg;
  cfg.n_belief_samples = opts.n_belief_samples;
  cfg.n_eval_components = opts.n_eval_components;
  cfg.n_noise_samples = opts.n_noise_samples;
  int passed = 0;
  double worst = 0.0;
  for (int seed = 0; seed < opts.n_seeds; ++seed) {
    RngStream rng(static_cast<std::uint64_t>(seed));
    const Vec x0 = sys.sample_state(rng);
    VecSeq controls;
    for (int i = 0; i < opts.horizon; ++i) {
      controls.push_back(rng.uniform_vec(sys.control_bounds().lo, sys.control_bounds().hi));
    }
    const GaussianBelief belief{sys.theta_true(), opts.prior_variance * Mat::Identity(24, 24)};
    const double closed = infocost::mi_cost(sys, x0, controls, belief);
    const double mc = infocost::directed_info_cost_mc(sys, x0, controls, belief, cfg, rng).value;
    const double rel = std::abs(mc - closed) / std::abs(closed);
    worst = std::max(worst, rel);
    if (rel <= opts.relative_tolerance) ++passed;
  }
  return {"closed_form_equivalence", passed >= opts.min_passing,
          std::to_string(passed) + "/" + std::to_string(opts.n_seeds) + " seeds within " +
              fmt(100 * opts.relative_tolerance) + "%, worst " + fmt(100 * worst) + "%"};
}

std::vector<CheckResult> run_all() {
  return {closed_form_equivalence(), information_form_identity(), ekf_conjugate_oracle()};
}

}  // namespace infogather::verify
