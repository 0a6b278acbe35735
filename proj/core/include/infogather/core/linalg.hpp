#pragma once

#include "infogather/core/rng.hpp"
#include "infogather/core/types.hpp"

#include <functional>

namespace infogather {

/// Tolerance below which a negative eigenvalue is treated as round-off.
inline constexpr double kPsdTolerance = 1e-10;

bool all_finite(const Mat& m);

/// Natural log-determinant of a positive-definite matrix via Cholesky.
///
/// A failed factorization is retried once with 1e-12*I added; a second
/// failure throws SingularMatrix.
double logdet_psd(const Mat& m);

/// (m + m') / 2 with negative eigenvalues clamped to zero. Inputs that are
/// already symmetric PSD are returned bit-for-bit unchanged.
Mat symmetrize(const Mat& m);

/// Symmetric square-root factor L with L*L' = cov, from an eigendecomposition
/// so that semidefinite (including zero) covariances are accepted.
Mat psd_sqrt_factor(const Mat& cov);

/// mean + L*z with z ~ N(0, I).
Vec mvn_sample(const Vec& mean, const Mat& cov, RngStream& rng);

/// Pre-factored zero-mean Gaussian for repeated draws.
class GaussianSampler {
 public:
  explicit GaussianSampler(const Mat& cov);

  Vec sample(RngStream& rng) const;
  int dim() const { return static_cast<int>(factor_.rows()); }
  bool is_zero() const { return zero_; }

 private:
  Mat factor_;
  bool zero_;
};

Mat block_diag(const Mat& a, const Mat& b);

/// Central finite-difference Jacobian of fn at x0.
Mat central_difference_jacobian(const std::function<Vec(const Vec&)>& fn, const Vec& x0,
                                double h = 1e-5);

}  // namespace infogather
