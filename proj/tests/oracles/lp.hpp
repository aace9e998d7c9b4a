#pragma once

#include "fracmax/metric_space.hpp"

#include <cmath>
#include <limits>
#include <vector>

// Two independent solvers for  min sum_x w_x g_x  s.t.  g_x + g_y >= b_xy, g >= 0,
// the L^1 gradient polytope problem.
namespace fracmax::oracle {

struct PairRow {
  Index x, y;
  double b;
};

inline std::vector<PairRow> gradient_rows(const MetricMeasureSpace& s, const Vector<double>& u,
                                          double smooth) {
  std::vector<PairRow> rows;
  for (Index x = 0; x < s.size(); ++x)
    for (Index y = x + 1; y < s.size(); ++y)
      rows.push_back({x, y, std::abs(u(x) - u(y)) / std::pow(s.distance(x, y), smooth)});
  return rows;
}

/// Dense tableau simplex with Bland's rule on the dual
///   max sum b_e l_e  s.t.  sum_{e at x} l_e <= w_x,  l >= 0,
/// whose optimum equals the primal minimum. The origin is feasible since w > 0.
inline double simplex_l1_gradient(const Vector<double>& w, const std::vector<PairRow>& rows) {
  const std::size_t m = static_cast<std::size_t>(w.size());
  const std::size_t e = rows.size();
  const std::size_t cols = e + m;
  std::vector<std::vector<double>> t(m, std::vector<double>(cols + 1, 0.0));
  std::vector<double> obj(cols + 1, 0.0);  // reduced costs, last entry = -objective
  std::vector<std::size_t> basis(m);
  for (std::size_t j = 0; j < e; ++j) {
    t[static_cast<std::size_t>(rows[j].x)][j] = 1.0;
    t[static_cast<std::size_t>(rows[j].y)][j] = 1.0;
    obj[j] = rows[j].b;
  }
  for (std::size_t i = 0; i < m; ++i) {
    t[i][e + i] = 1.0;
    t[i][cols] = w(static_cast<Index>(i));
    basis[i] = e + i;
  }
  const double eps = 1e-12;
  for (int iter = 0; iter < 100000; ++iter) {
    std::size_t enter = cols;
    for (std::size_t j = 0; j < cols; ++j)
      if (obj[j] > eps) {
        enter = j;
        break;
      }
    if (enter == cols) return -obj[cols];
    std::size_t leave = m;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i)
      if (t[i][enter] > eps) {
        const double ratio = t[i][cols] / t[i][enter];
        if (ratio < best - eps || (std::abs(ratio - best) <= eps && basis[i] < basis[leave])) {
          best = ratio;
          leave = i;
        }
      }
    if (leave == m) return std::numeric_limits<double>::infinity();
    const double piv = t[leave][enter];
    for (double& v : t[leave]) v /= piv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave || t[i][enter] == 0.0) continue;
      const double f = t[i][enter];
      for (std::size_t j = 0; j <= cols; ++j) t[i][j] -= f * t[leave][j];
    }
    const double f = obj[enter];
    for (std::size_t j = 0; j <= cols; ++j) obj[j] -= f * t[leave][j];
    basis[leave] = enter;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

/// Minimum of the primal objective over every basic feasible point: each
/// choice of n active constraints among the pair rows and the bounds g >= 0.
inline double vertex_l1_gradient(const Vector<double>& w, const std::vector<PairRow>& rows) {
  const Index n = w.size();
  const Index m = static_cast<Index>(rows.size()) + n;
  auto row_of = [&](Index c, Vector<double>& a, double& rhs) {
    a.setZero();
    if (c < static_cast<Index>(rows.size())) {
      const auto& r = rows[static_cast<std::size_t>(c)];
      a(r.x) = 1.0;
      a(r.y) = 1.0;
      rhs = r.b;
    } else {
      a(c - static_cast<Index>(rows.size())) = 1.0;
      rhs = 0.0;
    }
  };
  double best = std::numeric_limits<double>::infinity();
  std::vector<Index> pick(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) pick[static_cast<std::size_t>(i)] = i;
  Matrix<double> A(n, n);
  Vector<double> rhs(n), a(n);
  while (true) {
    for (Index i = 0; i < n; ++i) {
      double r = 0.0;
      row_of(pick[static_cast<std::size_t>(i)], a, r);
      A.row(i) = a.transpose();
      rhs(i) = r;
    }
    Eigen::FullPivLU<Matrix<double>> lu(A);
    if (lu.rank() == n) {
      const Vector<double> g = lu.solve(rhs);
      bool feasible = (g.array() >= -1e-9).all();
      for (const auto& r : rows) feasible = feasible && g(r.x) + g(r.y) >= r.b - 1e-9;
      if (feasible) best = std::min(best, w.dot(g));
    }
    Index i = n - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == m - n + i) --i;
    if (i < 0) break;
    ++pick[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < n; ++j)
      pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
  }
  return best;
}

}  // namespace fracmax::oracle
