#pragma once

#include "infogather/systems/system_model.hpp"

#include <utility>

namespace infogather::systems {

/// Two-agent planar pursuit-evasion where the pursuer runs an LQR tracking
/// policy with cost matrices unknown to the evader (agent 1, the controlled
/// agent).
///
/// State [x1; x2] with x1 = evader [px, py, vx, vy] and x2 = pursuer in the
/// same layout; control is the evader acceleration. Both agents are double
/// integrators with known (A, B).
///
/// Theta stores lower-triangular Cholesky factors so every theta maps to
/// Q = Lq Lq' >= 0 and R = Lr Lr' + 1e-8 I > 0. Layout: the 10 entries of Lq
/// in column-major lower-triangular order ((0,0),(1,0),(2,0),(3,0),(1,1),...),
/// then the 3 entries of Lr ((0,0),(1,0),(1,1)).
class PursuitEvasionLqr final : public SystemModel {
 public:
  struct Params {
    double dt = 0.1;
    double accel_limit = 2.0;
    Vec q_diag = (Vec(4) << 5.0, 5.0, 1.0, 1.0).finished();
    Vec r_diag = Vec::Ones(2);
  };

  static constexpr double kRegularization = 1e-8;
  static constexpr double kMaxCondition = 1e12;

  PursuitEvasionLqr() : PursuitEvasionLqr(Params()) {}
  explicit PursuitEvasionLqr(const Params& params, const CommonOptions& common = {});

  std::string name() const override { return "pe_lqr"; }
  std::vector<std::string> param_layout() const override;
  Vec sample_state(RngStream& rng) const override;

  /// pi2 = -(R + B'QB)^{-1} B'Q (A x2 - x1). Throws SingularGain when the
  /// gain matrix has condition number >= 1e12.
  Vec lqr_pursuer_policy(const Vec& x1, const Vec& x2, const Vec& theta) const;

  const Mat& a() const { return a_; }
  const Mat& b() const { return b_; }

  /// Q and R reconstructed from theta (R includes the regularizer).
  static std::pair<Mat, Mat> cost_matrices(const Vec& theta);
  /// Inverse of cost_matrices for positive-definite Q, R.
  static Vec pack_cost_matrices(const Mat& q, const Mat& r);

 protected:
  Vec do_step(const Vec& x, const Vec& u, const Vec& theta) const override;
  Mat do_jac_f_theta(const Vec& x, const Vec& u, const Vec& theta) const override;

 private:
  Params params_;
  Mat a_;
  Mat b_;
};

/// Evader double integrator against a unicycle pursuer whose policy is the
/// first control of a nonlinear MPC problem with unknown tracking weight w:
///
///   argmin_U  w * sum_{k=1..T} |p1 - p2_k|^2 + sum_{k=0..T-1} |u_k|^2
///
/// where p1 is the evader position frozen at the current step. The inner
/// problem is solved by a fixed budget of projected gradient steps from
/// zero, so the policy is a deterministic smooth-almost-everywhere function
/// of (x1, x2, w).
///
/// State [x1; x2] with x1 = [px, py, vx, vy] and x2 = [px, py, heading, speed];
/// control is the evader acceleration; theta = [w].
class PursuitEvasionMpc final : public SystemModel {
 public:
  enum class Gradient { kAnalytic, kFiniteDifference };

  struct Params {
    double dt = 0.1;
    double accel_limit = 2.0;
    double omega_limit = 2.0;
    double pursuer_accel_limit = 2.0;
    double weight = 5.0;
    int mpc_horizon = 5;
    int mpc_iters = 50;
    double mpc_step_size = 0.05;
    Gradient gradient = Gradient::kAnalytic;
    double fd_step = 1e-5;
  };

  PursuitEvasionMpc() : PursuitEvasionMpc(Params()) {}
  explicit PursuitEvasionMpc(const Params& params, const CommonOptions& common = {});

  std::string name() const override { return "pe_mpc"; }
  std::vector<std::string> param_layout() const override { return {"w"}; }
  Vec sample_state(RngStream& rng) const override;

  Vec mpc_pursuer_policy(const Vec& x1, const Vec& x2, double w) const;

  /// Inner MPC objective for a flattened control sequence [w0, a0, w1, a1, ...].
  double mpc_cost(const Vec& x1, const Vec& x2, double w, const Vec& controls) const;
  /// Gradient of mpc_cost by reverse-mode chain rule through the rollout.
  Vec mpc_gradient(const Vec& x1, const Vec& x2, double w, const Vec& controls) const;

  static Vec unicycle_step(const Vec& s, double omega, double accel, double dt);

  const Params& params() const { return params_; }

 protected:
  Vec do_step(const Vec& x, const Vec& u, const Vec& theta) const override;

 private:
  Params params_;
  Mat a_;
  Mat b_;
};

}  // namespace infogather::systems
