#include "infogather/systems/pursuit_evasion.hpp"

#include "infogather/core/errors.hpp"
#include "infogather/systems/double_integrator.hpp"

#include <cmath>
#include <numbers>

namespace infogather::systems {
namespace {

constexpr int kAgentDim = 4;
constexpr int kNq = 10;  // lower-triangular entries of a 4x4 factor
constexpr int kNr = 3;   // lower-triangular entries of a 2x2 factor

Mat lower_from_entries(const Vec& entries, int n) {
  Mat l = Mat::Zero(n, n);
  int k = 0;
  for (int c = 0; c < n; ++c) {
    for (int r = c; r < n; ++r) l(r, c) = entries[k++];
  }
  return l;
}

Vec entries_from_lower(const Mat& l) {
  const int n = static_cast<int>(l.rows());
  Vec entries(n * (n + 1) / 2);
  int k = 0;
  for (int c = 0; c < n; ++c) {
    for (int r = c; r < n; ++r) entries[k++] = l(r, c);
  }
  return entries;
}

// (r, c) of the k-th lower-triangular entry of an n x n factor.
std::pair<int, int> lower_index(int k, int n) {
  for (int c = 0; c < n; ++c) {
    const int len = n - c;
    if (k < len) return {c + k, c};
    k -= len;
  }
  throw DimensionMismatch("lower_index out of range");
}

Vec stacked_initial_state(const Vec& evader, const Vec& pursuer) {
  Vec x(2 * kAgentDim);
  x << evader, pursuer;
  return x;
}

}  // namespace

// ---------------------------------------------------------------------------
// PursuitEvasionLqr

PursuitEvasionLqr::PursuitEvasionLqr(const Params& params, const CommonOptions& common)
    : SystemModel({2 * kAgentDim, 2, kNq + kNr, 2 * kAgentDim},
                  {Vec::Constant(2, -params.accel_limit), Vec::Constant(2, params.accel_limit)},
                  pack_cost_matrices(params.q_diag.asDiagonal().toDenseMatrix(),
                                     params.r_diag.asDiagonal().toDenseMatrix()),
                  stacked_initial_state(Vec::Zero(4), (Vec(4) << 2.0, 2.0, 0.0, 0.0).finished()),
                  common, 1e-4 * Mat::Identity(2 * kAgentDim, 2 * kAgentDim)),
      params_(params),
      a_(DoubleIntegrator::nominal_a(params.dt)),
      b_(DoubleIntegrator::nominal_b(params.dt)) {
  if (params.dt <= 0.0) throw ConfigError("pe_lqr: dt must be positive");
}

std::pair<Mat, Mat> PursuitEvasionLqr::cost_matrices(const Vec& theta) {
  require_dim(theta.size(), kNq + kNr, "pe_lqr theta");
  const Mat lq = lower_from_entries(theta.head(kNq), 4);
  const Mat lr = lower_from_entries(theta.tail(kNr), 2);
  Mat q = lq * lq.transpose();
  Mat r = lr * lr.transpose() + kRegularization * Mat::Identity(2, 2);
  return {std::move(q), std::move(r)};
}

Vec PursuitEvasionLqr::pack_cost_matrices(const Mat& q, const Mat& r) {
  Eigen::LLT<Mat> lq(q);
  Eigen::LLT<Mat> lr(r);
  if (lq.info() != Eigen::Success || lr.info() != Eigen::Success) {
    throw ConfigError("pe_lqr: Q and R must be positive definite to pack");
  }
  Vec theta(kNq + kNr);
  theta << entries_from_lower(lq.matrixL().toDenseMatrix()),
      entries_from_lower(lr.matrixL().toDenseMatrix());
  return theta;
}

std::vector<std::string> PursuitEvasionLqr::param_layout() const {
  std::vector<std::string> names;
  for (int k = 0; k < kNq; ++k) {
    const auto [r, c] = lower_index(k, 4);
    names.push_back("Lq[" + std::to_string(r) + "," + std::to_string(c) + "]");
  }
  for (int k = 0; k < kNr; ++k) {
    const auto [r, c] = lower_index(k, 2);
    names.push_back("Lr[" + std::to_string(r) + "," + std::to_string(c) + "]");
  }
  return names;
}

Vec PursuitEvasionLqr::sample_state(RngStream& rng) const {
  const Vec lo = (Vec(8) << -3, -3, -1, -1, -3, -3, -1, -1).finished();
  return rng.uniform_vec(lo, -lo);
}

Vec PursuitEvasionLqr::lqr_pursuer_policy(const Vec& x1, const Vec& x2,
                                          const Vec& theta) const {
  require_dim(x1.size(), kAgentDim, "evader state");
  require_dim(x2.size(), kAgentDim, "pursuer state");
  const auto [q, r] = cost_matrices(theta);
  const Mat gain = r + b_.transpose() * q * b_;
  Eigen::PartialPivLU<Mat> lu(gain);
  const double rcond = lu.rcond();
  if (!(rcond > 1.0 / kMaxCondition)) {
    throw SingularGain("pe_lqr: R + B'QB is singular or ill-conditioned");
  }
  const Vec error = a_ * x2 - x1;
  return -lu.solve(b_.transpose() * (q * error));
}

Vec PursuitEvasionLqr::do_step(const Vec& x, const Vec& u, const Vec& theta) const {
  const Vec x1 = x.head(kAgentDim);
  const Vec x2 = x.tail(kAgentDim);
  const Vec pi2 = lqr_pursuer_policy(x1, x2, theta);
  Vec next(2 * kAgentDim);
  next << a_ * x1 + b_ * u, a_ * x2 + b_ * pi2;
  return next;
}

// With M = R + B'QB, e = A x2 - x1 and pi = -M^{-1} B'Q e:
//   dpi = -M^{-1} (B' dQ (e + B pi) + dR pi).
// A perturbation of factor entry (i, j) gives dQ v = e_i (L_j . v) + L_j v_i.
Mat PursuitEvasionLqr::do_jac_f_theta(const Vec& x, const Vec&, const Vec& theta) const {
  const Vec x1 = x.head(kAgentDim);
  const Vec x2 = x.tail(kAgentDim);
  const Mat lq = lower_from_entries(theta.head(kNq), 4);
  const Mat lr = lower_from_entries(theta.tail(kNr), 2);
  const auto [q, r] = cost_matrices(theta);
  Eigen::PartialPivLU<Mat> lu(r + b_.transpose() * q * b_);
  if (!(lu.rcond() > 1.0 / kMaxCondition)) {
    throw SingularGain("pe_lqr: R + B'QB is singular or ill-conditioned");
  }
  const Vec error = a_ * x2 - x1;
  const Vec pi = -lu.solve(b_.transpose() * (q * error));
  const Vec v = error + b_ * pi;

  Mat jac = Mat::Zero(2 * kAgentDim, kNq + kNr);
  for (int k = 0; k < kNq; ++k) {
    const auto [i, j] = lower_index(k, 4);
    Vec dq_v = lq.col(j) * v[i];
    dq_v[i] += lq.col(j).dot(v);
    const Vec dpi = -lu.solve(b_.transpose() * dq_v);
    jac.block(kAgentDim, k, kAgentDim, 1) = b_ * dpi;
  }
  for (int k = 0; k < kNr; ++k) {
    const auto [i, j] = lower_index(k, 2);
    Vec dr_pi = lr.col(j) * pi[i];
    dr_pi[i] += lr.col(j).dot(pi);
    const Vec dpi = -lu.solve(dr_pi);
    jac.block(kAgentDim, kNq + k, kAgentDim, 1) = b_ * dpi;
  }
  return jac;
}

// ---------------------------------------------------------------------------
// PursuitEvasionMpc

PursuitEvasionMpc::PursuitEvasionMpc(const Params& params, const CommonOptions& common)
    : SystemModel({2 * kAgentDim, 2, 1, 2 * kAgentDim},
                  {Vec::Constant(2, -params.accel_limit), Vec::Constant(2, params.accel_limit)},
                  Vec::Constant(1, params.weight),
                  stacked_initial_state(
                      Vec::Zero(4),
                      (Vec(4) << 2.0, 2.0, -0.75 * std::numbers::pi, 0.5).finished()),
                  common, 1e-4 * Mat::Identity(2 * kAgentDim, 2 * kAgentDim)),
      params_(params),
      a_(DoubleIntegrator::nominal_a(params.dt)),
      b_(DoubleIntegrator::nominal_b(params.dt)) {
  if (params.dt <= 0.0) throw ConfigError("pe_mpc: dt must be positive");
  if (params.mpc_horizon < 1) throw ConfigError("pe_mpc: mpc_horizon must be >= 1");
  if (params.mpc_iters < 0) throw ConfigError("pe_mpc: mpc_iters must be >= 0");
  if (params.weight <= 0.0) throw ConfigError("pe_mpc: w must be positive");
}

Vec PursuitEvasionMpc::sample_state(RngStream& rng) const {
  Vec x(8);
  x.head(4) = rng.uniform_vec((Vec(4) << -3, -3, -1, -1).finished(),
                              (Vec(4) << 3, 3, 1, 1).finished());
  x.tail(4) = rng.uniform_vec((Vec(4) << -3, -3, -std::numbers::pi, 0).finished(),
                              (Vec(4) << 3, 3, std::numbers::pi, 1.5).finished());
  return x;
}

Vec PursuitEvasionMpc::unicycle_step(const Vec& s, double omega, double accel, double dt) {
  Vec next(4);
  next << s[0] + s[3] * std::cos(s[2]) * dt, s[1] + s[3] * std::sin(s[2]) * dt,
      s[2] + omega * dt, s[3] + accel * dt;
  return next;
}

double PursuitEvasionMpc::mpc_cost(const Vec& x1, const Vec& x2, double w,
                                   const Vec& controls) const {
  const int horizon = params_.mpc_horizon;
  require_dim(controls.size(), 2 * horizon, "mpc controls");
  const Eigen::Vector2d target = x1.head<2>();
  Vec s = x2;
  double cost = controls.squaredNorm();
  for (int k = 0; k < horizon; ++k) {
    s = unicycle_step(s, controls[2 * k], controls[2 * k + 1], params_.dt);
    cost += w * (s.head<2>() - target).squaredNorm();
  }
  return cost;
}

Vec PursuitEvasionMpc::mpc_gradient(const Vec& x1, const Vec& x2, double w,
                                    const Vec& controls) const {
  const int horizon = params_.mpc_horizon;
  const double dt = params_.dt;
  const Eigen::Vector2d target = x1.head<2>();

  std::vector<Vec> traj(horizon + 1);
  traj[0] = x2;
  for (int k = 0; k < horizon; ++k) {
    traj[k + 1] = unicycle_step(traj[k], controls[2 * k], controls[2 * k + 1], dt);
  }

  Vec grad = 2.0 * controls;
  // Adjoint of the cost with respect to s_{k+1}.
  Eigen::Vector4d adj = Eigen::Vector4d::Zero();
  for (int k = horizon - 1; k >= 0; --k) {
    const Vec& next = traj[k + 1];
    adj.head<2>() += 2.0 * w * (next.head<2>() - target);
    // d s_{k+1} / d u_k only touches heading and speed.
    grad[2 * k] += adj[2] * dt;
    grad[2 * k + 1] += adj[3] * dt;
    // Propagate through d s_{k+1} / d s_k.
    const Vec& s = traj[k];
    const double c = std::cos(s[2]);
    const double sn = std::sin(s[2]);
    Eigen::Vector4d prev;
    prev[0] = adj[0];
    prev[1] = adj[1];
    prev[2] = adj[2] + adj[0] * (-s[3] * sn * dt) + adj[1] * (s[3] * c * dt);
    prev[3] = adj[3] + adj[0] * (c * dt) + adj[1] * (sn * dt);
    adj = prev;
  }
  return grad;
}

Vec PursuitEvasionMpc::mpc_pursuer_policy(const Vec& x1, const Vec& x2, double w) const {
  require_dim(x1.size(), kAgentDim, "evader state");
  require_dim(x2.size(), kAgentDim, "pursuer state");
  if (!(w > 0.0)) throw NonFiniteOutput("pe_mpc: tracking weight must be positive");
  const int n = 2 * params_.mpc_horizon;
  Vec lo(n);
  Vec hi(n);
  for (int k = 0; k < params_.mpc_horizon; ++k) {
    lo[2 * k] = -params_.omega_limit;
    hi[2 * k] = params_.omega_limit;
    lo[2 * k + 1] = -params_.pursuer_accel_limit;
    hi[2 * k + 1] = params_.pursuer_accel_limit;
  }

  Vec controls = Vec::Zero(n);
  for (int it = 0; it < params_.mpc_iters; ++it) {
    Vec grad;
    if (params_.gradient == Gradient::kAnalytic) {
      grad = mpc_gradient(x1, x2, w, controls);
    } else {
      grad.resize(n);
      Vec probe = controls;
      for (int j = 0; j < n; ++j) {
        probe[j] = controls[j] + params_.fd_step;
        const double up = mpc_cost(x1, x2, w, probe);
        probe[j] = controls[j] - params_.fd_step;
        const double down = mpc_cost(x1, x2, w, probe);
        probe[j] = controls[j];
        grad[j] = (up - down) / (2.0 * params_.fd_step);
      }
    }
    controls = (controls - params_.mpc_step_size * grad).cwiseMax(lo).cwiseMin(hi);
  }
  if (!controls.allFinite()) throw NonFiniteOutput("pe_mpc: inner solver diverged");
  return controls.head(2);
}

Vec PursuitEvasionMpc::do_step(const Vec& x, const Vec& u, const Vec& theta) const {
  const Vec x1 = x.head(kAgentDim);
  const Vec x2 = x.tail(kAgentDim);
  const Vec pi2 = mpc_pursuer_policy(x1, x2, theta[0]);
  Vec next(2 * kAgentDim);
  next << a_ * x1 + b_ * u, unicycle_step(x2, pi2[0], pi2[1], params_.dt);
  return next;
}

}  // namespace infogather::systems
