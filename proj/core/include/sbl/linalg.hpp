#pragma once

#include "sbl/common.hpp"

namespace sbl {

// Cholesky factor of a symmetric positive definite matrix. When the plain
// factorization fails, a diagonal jitter of 1e-12 * trace / n is added and
// escalated by 100x, at most three times.
struct SpdFactor {
  Eigen::LLT<Mat> llt;
  double jitter = 0.0;
  int escalations = 0;

  Mat solve(const Mat& rhs) const { return llt.solve(rhs); }
  Vec solve(const Vec& rhs) const { return llt.solve(rhs); }
  Mat inverse() const;
  double log_det() const;
};

SpdFactor factor_spd(const Mat& a, const std::string& what);

// Ratio of extreme eigenvalues of a symmetric matrix (infinity if singular).
double condition_estimate(const Mat& a);

inline Mat symmetrize(const Mat& a) { return 0.5 * (a + a.transpose()); }

}  // namespace sbl
