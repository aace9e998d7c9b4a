#pragma once

#include "fracmax/metric_space.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace fracmax::test {

inline MetricMeasureSpace path_space(Index n, Vector<double> weights = {}) {
  Matrix<double> d(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) d(i, j) = std::abs(static_cast<double>(i - j));
  if (weights.size() == 0) weights = Vector<double>::Ones(n);
  return MetricMeasureSpace::from_matrix(d, weights);
}

inline MetricMeasureSpace two_point(double dist = 1.0, double w0 = 1.0, double w1 = 1.0) {
  Matrix<double> d(2, 2);
  d << 0.0, dist, dist, 0.0;
  Vector<double> w(2);
  w << w0, w1;
  return MetricMeasureSpace::from_matrix(d, w);
}

inline MetricMeasureSpace single_point(double w = 1.0) {
  return MetricMeasureSpace::from_matrix(Matrix<double>::Zero(1, 1), Vector<double>::Constant(1, w));
}

inline Vector<double> vec(std::initializer_list<double> v) {
  Vector<double> out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

inline PointSet sorted(PointSet s) {
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace fracmax::test
