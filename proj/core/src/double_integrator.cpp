#include "infogather/systems/double_integrator.hpp"

#include "infogather/core/errors.hpp"

namespace infogather::systems {
namespace {

constexpr int kNx = 4;
constexpr int kNu = 2;

ControlBounds accel_bounds(double limit) {
  return {Vec::Constant(kNu, -limit), Vec::Constant(kNu, limit)};
}

}  // namespace

DoubleIntegrator::DoubleIntegrator(const Params& params, const CommonOptions& common)
    : SystemModel({kNx, kNu, kNx * kNx + kNx * kNu, kNx}, accel_bounds(params.accel_limit),
                  pack(nominal_a(params.dt), nominal_b(params.dt)),
                  (Vec(kNx) << 0.0, 0.0, 0.0, 0.0).finished(), common,
                  1e-4 * Mat::Identity(kNx, kNx)),
      params_(params) {
  if (params.dt <= 0.0) throw ConfigError("double_integrator: dt must be positive");
}

Mat DoubleIntegrator::nominal_a(double dt) {
  Mat a = Mat::Identity(kNx, kNx);
  a(0, 2) = dt;
  a(1, 3) = dt;
  return a;
}

Mat DoubleIntegrator::nominal_b(double dt) {
  Mat b = Mat::Zero(kNx, kNu);
  b(0, 0) = 0.5 * dt * dt;
  b(1, 1) = 0.5 * dt * dt;
  b(2, 0) = dt;
  b(3, 1) = dt;
  return b;
}

Vec DoubleIntegrator::pack(const Mat& a, const Mat& b) {
  require_dim(a.rows(), kNx, "A rows");
  require_dim(a.cols(), kNx, "A cols");
  require_dim(b.rows(), kNx, "B rows");
  require_dim(b.cols(), kNu, "B cols");
  Vec theta(kNx * kNx + kNx * kNu);
  theta.head(kNx * kNx) = a.reshaped();
  theta.tail(kNx * kNu) = b.reshaped();
  return theta;
}

std::pair<Mat, Mat> DoubleIntegrator::unpack(const Vec& theta) {
  require_dim(theta.size(), kNx * kNx + kNx * kNu, "double_integrator theta");
  Mat a = theta.head(kNx * kNx).reshaped(kNx, kNx);
  Mat b = theta.tail(kNx * kNu).reshaped(kNx, kNu);
  return {std::move(a), std::move(b)};
}

std::vector<std::string> DoubleIntegrator::param_layout() const {
  std::vector<std::string> names;
  for (int c = 0; c < kNx; ++c) {
    for (int r = 0; r < kNx; ++r) names.push_back("A[" + std::to_string(r) + "," + std::to_string(c) + "]");
  }
  for (int c = 0; c < kNu; ++c) {
    for (int r = 0; r < kNx; ++r) names.push_back("B[" + std::to_string(r) + "," + std::to_string(c) + "]");
  }
  return names;
}

Vec DoubleIntegrator::sample_state(RngStream& rng) const {
  const Vec lo = (Vec(kNx) << -2.0, -2.0, -1.0, -1.0).finished();
  return rng.uniform_vec(lo, -lo);
}

Vec DoubleIntegrator::do_step(const Vec& x, const Vec& u, const Vec& theta) const {
  const auto a = theta.head(kNx * kNx).reshaped(kNx, kNx);
  const auto b = theta.tail(kNx * kNu).reshaped(kNx, kNu);
  return a * x + b * u;
}

// d(Ax)/dvec(A) = x' (kron) I and d(Bu)/dvec(B) = u' (kron) I.
Mat DoubleIntegrator::do_jac_f_theta(const Vec& x, const Vec& u, const Vec&) const {
  Mat jac = Mat::Zero(kNx, param_dim());
  for (int c = 0; c < kNx; ++c) {
    jac.block(0, c * kNx, kNx, kNx).diagonal().setConstant(x[c]);
  }
  for (int c = 0; c < kNu; ++c) {
    jac.block(0, kNx * kNx + c * kNx, kNx, kNx).diagonal().setConstant(u[c]);
  }
  return jac;
}

}  // namespace infogather::systems
