#include "infogather/core/linalg.hpp"

#include "infogather/core/errors.hpp"

#include <cmath>

namespace infogather {

void require_dim(long actual, long expected, const char* what) {
  if (actual != expected) {
    throw DimensionMismatch(std::string(what) + ": expected dimension " +
                            std::to_string(expected) + ", got " + std::to_string(actual));
  }
}

bool all_finite(const Mat& m) { return m.allFinite(); }

double logdet_psd(const Mat& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("logdet_psd: matrix is not square");
  if (m.size() == 0) return 0.0;
  Eigen::LLT<Mat> llt(m);
  if (llt.info() != Eigen::Success) {
    llt.compute(m + 1e-12 * Mat::Identity(m.rows(), m.cols()));
    if (llt.info() != Eigen::Success) {
      throw SingularMatrix("logdet_psd: Cholesky factorization failed after jitter");
    }
  }
  const Vec diag = llt.matrixL().toDenseMatrix().diagonal();
  if ((diag.array() <= 0.0).any()) throw SingularMatrix("logdet_psd: non-positive pivot");
  return 2.0 * diag.array().log().sum();
}

Mat symmetrize(const Mat& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("symmetrize: matrix is not square");
  Mat sym = 0.5 * (m + m.transpose());
  if (sym.size() == 0) return sym;
  Eigen::SelfAdjointEigenSolver<Mat> eig(sym);
  if (eig.eigenvalues().minCoeff() >= 0.0) return sym;
  const Vec clamped = eig.eigenvalues().cwiseMax(0.0);
  Mat out = eig.eigenvectors() * clamped.asDiagonal() * eig.eigenvectors().transpose();
  return 0.5 * (out + out.transpose());
}

Mat psd_sqrt_factor(const Mat& cov) {
  if (cov.rows() != cov.cols()) throw DimensionMismatch("psd_sqrt_factor: matrix is not square");
  if (cov.isZero(0.0)) return Mat::Zero(cov.rows(), cov.cols());
  Eigen::SelfAdjointEigenSolver<Mat> eig(0.5 * (cov + cov.transpose()));
  const Vec root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * root.asDiagonal();
}

Vec mvn_sample(const Vec& mean, const Mat& cov, RngStream& rng) {
  require_dim(cov.rows(), mean.size(), "mvn_sample covariance");
  require_dim(cov.cols(), mean.size(), "mvn_sample covariance");
  const Vec z = rng.normal_vec(static_cast<int>(mean.size()));
  return mean + psd_sqrt_factor(cov) * z;
}

GaussianSampler::GaussianSampler(const Mat& cov)
    : factor_(psd_sqrt_factor(cov)), zero_(cov.isZero(0.0)) {}

Vec GaussianSampler::sample(RngStream& rng) const {
  const Vec z = rng.normal_vec(dim());
  if (zero_) return Vec::Zero(dim());
  return factor_ * z;
}

Mat block_diag(const Mat& a, const Mat& b) {
  Mat out = Mat::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

Mat central_difference_jacobian(const std::function<Vec(const Vec&)>& fn, const Vec& x0,
                                double h) {
  if (x0.size() == 0) return Mat(fn(x0).size(), 0);
  Mat jac;
  Vec xp = x0;
  for (Eigen::Index j = 0; j < x0.size(); ++j) {
    xp[j] = x0[j] + h;
    const Vec fp = fn(xp);
    xp[j] = x0[j] - h;
    const Vec fm = fn(xp);
    xp[j] = x0[j];
    if (j == 0) jac.resize(fp.size(), x0.size());
    jac.col(j) = (fp - fm) / (2.0 * h);
  }
  return jac;
}

}  // namespace infogather
