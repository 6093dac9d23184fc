#include "sbl/linalg.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace sbl {

Mat SpdFactor::inverse() const {
  const auto n = llt.matrixLLT().rows();
  return llt.solve(Mat::Identity(n, n));
}

double SpdFactor::log_det() const {
  const auto& l = llt.matrixLLT();
  double s = 0.0;
  for (Eigen::Index i = 0; i < l.rows(); ++i) s += std::log(l(i, i));
  return 2.0 * s;
}

double condition_estimate(const Mat& a) {
  if (a.rows() == 0) return 1.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(a), Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().cwiseAbs().maxCoeff();
  if (lo <= 0.0) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

SpdFactor factor_spd(const Mat& a, const std::string& what) {
  if (a.rows() != a.cols()) throw InvalidArgument(what + ": matrix is not square");
  SpdFactor f;
  if (a.rows() == 0) {
    f.llt.compute(a);
    return f;
  }
  if (!a.allFinite()) throw NumericalFailure(what + ": matrix has non-finite entries");
  f.llt.compute(a);
  if (f.llt.info() == Eigen::Success) return f;

  const double n = static_cast<double>(a.rows());
  double base = 1e-12 * std::abs(a.trace()) / n;
  if (base == 0.0) base = 1e-12;
  double jitter = base;
  for (int k = 1; k <= 3; ++k) {
    Mat b = a;
    b.diagonal().array() += jitter;
    f.llt.compute(b);
    if (f.llt.info() == Eigen::Success) {
      f.jitter = jitter;
      f.escalations = k;
      return f;
    }
    jitter *= 100.0;
  }
  const double cond = condition_estimate(a);
  std::ostringstream msg;
  msg << what << ": not positive definite after 3 jitter escalations (condition estimate "
      << cond << ")";
  throw NumericalFailure(msg.str(), cond);
}

}  // namespace sbl
