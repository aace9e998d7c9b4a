#include "fracmax/covering.hpp"

#include <cmath>
#include <limits>

namespace fracmax {

Cover build_cover(const MetricMeasureSpace& space, double r) {
  require(r > 0.0, "cover scale must be positive");
  Cover cover;
  cover.r = r;
  const Index n = space.size();
  // Greedy net: a point becomes a center unless an earlier center is within r.
  for (Index x = 0; x < n; ++x) {
    bool covered = false;
    for (Index c : cover.centers) {
      if (space.distance(x, c) < r) {
        covered = true;
        break;
      }
    }
    if (!covered) cover.centers.push_back(x);
  }
  for (Index c : cover.centers) {
    cover.ball_r.push_back(ball(space, c, r, BallKind::Open));
    cover.ball_3r.push_back(ball(space, c, 3.0 * r, BallKind::Open));
    cover.ball_6r.push_back(ball(space, c, 6.0 * r, BallKind::Open));
  }
  std::vector<char> hit(static_cast<std::size_t>(n), 0);
  for (const auto& b : cover.ball_r)
    for (Index y : b) hit[static_cast<std::size_t>(y)] = 1;
  for (Index x = 0; x < n; ++x)
    if (!hit[static_cast<std::size_t>(x)])
      throw Error("cover construction left point " + std::to_string(x) + " uncovered");
  return cover;
}

Index overlap_count(const MetricMeasureSpace& space, const Cover& cover) {
  std::vector<Index> count(static_cast<std::size_t>(space.size()), 0);
  for (const auto& b : cover.ball_6r)
    for (Index y : b) ++count[static_cast<std::size_t>(y)];
  Index n_max = 0;
  for (Index c : count) n_max = std::max(n_max, c);
  return n_max;
}

double PartitionOfUnity::value(Index center, Index point) const {
  for (const auto& e : phi[static_cast<std::size_t>(center)])
    if (e.point == point) return e.value;
  return 0.0;
}

Matrix<double> PartitionOfUnity::dense(Index n_points) const {
  Matrix<double> out = Matrix<double>::Zero(n_points, static_cast<Index>(phi.size()));
  for (std::size_t i = 0; i < phi.size(); ++i)
    for (const auto& e : phi[i]) out(e.point, static_cast<Index>(i)) = e.value;
  return out;
}

PartitionOfUnity build_partition_of_unity(const MetricMeasureSpace& space, const Cover& cover,
                                          Execution mode) {
  const Index n = space.size();
  const Index m = cover.size();
  const double r = cover.r;
  PartitionOfUnity pou;
  pou.r = r;
  pou.phi.resize(static_cast<std::size_t>(m));
  pou.active.resize(static_cast<std::size_t>(n));

  // Per point: psi over the centers whose open 6r-ball holds it.
  std::vector<std::vector<PartitionOfUnity::Entry>> per_point(static_cast<std::size_t>(n));
  parallel_for(
      n,
      [&](Index x) {
        auto& row = per_point[static_cast<std::size_t>(x)];
        double total = 0.0;
        for (Index i = 0; i < m; ++i) {
          const double d = space.distance(x, cover.centers[static_cast<std::size_t>(i)]);
          if (!(d < 6.0 * r)) continue;
          const double psi = std::clamp((6.0 * r - d) / (3.0 * r), 0.0, 1.0);
          if (psi > 0.0) {
            row.push_back({i, psi});
            total += psi;
          }
        }
        if (!(total > 0.0))
          throw Error("partition of unity: no cutoff is positive at point " + std::to_string(x));
        for (auto& e : row) e.value /= total;
      },
      mode);

  for (Index x = 0; x < n; ++x) {
    for (const auto& e : per_point[static_cast<std::size_t>(x)]) {
      pou.phi[static_cast<std::size_t>(e.point)].push_back({x, e.value});
      pou.active[static_cast<std::size_t>(x)].push_back(e.point);
    }
  }

  pou.overlap = overlap_count(space, cover);
  pou.nu = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < m; ++i)
    for (Index x : cover.ball_3r[static_cast<std::size_t>(i)]) pou.nu = std::min(pou.nu, pou.value(i, x));
  pou.lip = lipschitz_certificate(space, pou, mode);
  return pou;
}

double lipschitz_certificate(const MetricMeasureSpace& space, const PartitionOfUnity& pou,
                             Execution mode) {
  const Index n = space.size();
  const auto m = static_cast<Index>(pou.phi.size());
  std::vector<double> per_center(static_cast<std::size_t>(m), 0.0);
  parallel_for(
      m,
      [&](Index i) {
        const auto& entries = pou.phi[static_cast<std::size_t>(i)];
        Vector<double> col = Vector<double>::Zero(n);
        for (const auto& e : entries) col(e.point) = e.value;
        double best = 0.0;
        // A pair with both values zero contributes nothing, so x ranges over the support.
        for (const auto& e : entries) {
          for (Index y = 0; y < n; ++y) {
            if (y == e.point) continue;
            const double q = std::abs(e.value - col(y)) * pou.r / space.distance(e.point, y);
            best = std::max(best, q);
          }
        }
        per_center[static_cast<std::size_t>(i)] = best;
      },
      mode);
  double lip = 0.0;
  for (double v : per_center) lip = std::max(lip, v);
  return lip;
}

PartitionAudit audit_partition(const MetricMeasureSpace& space, const Cover& cover,
                               const PartitionOfUnity& pou) {
  PartitionAudit a;
  const Index n = space.size();
  Vector<double> sums = Vector<double>::Zero(n);
  for (std::size_t i = 0; i < pou.phi.size(); ++i) {
    const Index c = cover.centers[i];
    for (const auto& e : pou.phi[i]) {
      sums(e.point) += e.value;
      if (!(space.distance(e.point, c) < 6.0 * cover.r) || e.value < 0.0 || e.value > 1.0)
        a.support_exact = false;
    }
  }
  a.worst_sum_error = (sums.array() - 1.0).abs().maxCoeff();
  a.nu_bound = pou.nu * static_cast<double>(pou.overlap) >= 1.0 - 1e-12;
  a.lip = pou.lip;
  a.ok = a.worst_sum_error <= 1e-12 && a.support_exact && a.nu_bound;
  return a;
}

}  // namespace fracmax
