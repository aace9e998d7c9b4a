#pragma once

#include "fracmax/types.hpp"

#include <cmath>
#include <limits>

namespace fracmax {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// (sum_k |a_k|^q)^(1/q); max |a_k| for q = inf. Quasi-norm for q < 1.
template <typename Derived>
double lq_norm(const Eigen::MatrixBase<Derived>& a, double q) {
  if (a.size() == 0) return 0.0;
  if (std::isinf(q)) return a.cwiseAbs().maxCoeff();
  double s = 0.0;
  for (Index k = 0; k < a.size(); ++k) s += std::pow(std::abs(a(k)), q);
  return std::pow(s, 1.0 / q);
}

/// Weighted L^p norm (sum_x |u(x)|^p w(x))^(1/p); p = inf gives max |u|.
template <typename DerivedU, typename DerivedW>
double lp_norm(const Eigen::MatrixBase<DerivedU>& u, const Eigen::MatrixBase<DerivedW>& w,
               double p) {
  if (u.size() == 0) return 0.0;
  if (std::isinf(p)) return u.cwiseAbs().maxCoeff();
  double s = 0.0;
  for (Index x = 0; x < u.size(); ++x) s += std::pow(std::abs(u(x)), p) * w(x);
  return std::pow(s, 1.0 / p);
}

/// ||(f_k)||_{L^p(l^q)}: l^q across columns at each point, then weighted L^p
/// across points. Rows are points, columns are levels.
template <typename DerivedF, typename DerivedW>
double lp_lq_norm(const Eigen::MatrixBase<DerivedF>& f, const Eigen::MatrixBase<DerivedW>& w,
                  double p, double q) {
  Vector<double> pointwise(f.rows());
  for (Index x = 0; x < f.rows(); ++x) pointwise(x) = lq_norm(f.row(x).transpose(), q);
  return lp_norm(pointwise, w, p);
}

/// ||(f_k)||_{l^q(L^p)}: weighted L^p of each column, then l^q across levels.
template <typename DerivedF, typename DerivedW>
double lq_lp_norm(const Eigen::MatrixBase<DerivedF>& f, const Eigen::MatrixBase<DerivedW>& w,
                  double p, double q) {
  Vector<double> levelwise(f.cols());
  for (Index k = 0; k < f.cols(); ++k) levelwise(k) = lp_norm(f.col(k), w, p);
  return lq_norm(levelwise, q);
}

}  // namespace fracmax
