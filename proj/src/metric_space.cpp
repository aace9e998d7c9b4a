#include "fracmax/metric_space.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace fracmax {

namespace {

void check_weights(const Vector<double>& w) {
  for (Index i = 0; i < w.size(); ++i) {
    if (!(std::isfinite(w(i)) && w(i) > 0.0))
      throw ValidationError("weights must be finite and strictly positive (point " +
                            std::to_string(i) + ")");
  }
}

}  // namespace

MetricMeasureSpace MetricMeasureSpace::from_matrix(Matrix<double> dist, Vector<double> weights,
                                                   std::vector<std::int64_t> ids) {
  if (dist.rows() != dist.cols() || dist.rows() != weights.size())
    throw ValidationError("distance matrix and weights disagree in size");
  if (weights.size() == 0) throw ValidationError("empty space");
  check_weights(weights);
  const Index n = weights.size();
  for (Index i = 0; i < n; ++i) {
    if (dist(i, i) != 0.0) throw ValidationError("nonzero diagonal in distance matrix");
    for (Index j = i + 1; j < n; ++j) {
      if (!std::isfinite(dist(i, j)) || dist(i, j) <= 0.0)
        throw ValidationError("distinct points must have positive finite distance");
      if (dist(i, j) != dist(j, i)) throw ValidationError("distance matrix is not symmetric");
    }
  }
  MetricMeasureSpace s;
  s.dist_ = std::move(dist);
  s.weights_ = std::move(weights);
  s.dense_ = true;
  s.finalize(std::move(ids));
  return s;
}

MetricMeasureSpace MetricMeasureSpace::from_coordinates(Matrix<double> coords,
                                                        Vector<double> weights,
                                                        std::vector<std::int64_t> ids,
                                                        Index dense_limit) {
  if (coords.rows() != weights.size()) throw ValidationError("coordinates and weights disagree");
  if (weights.size() == 0) throw ValidationError("empty space");
  check_weights(weights);
  MetricMeasureSpace s;
  s.coords_ = std::move(coords);
  s.weights_ = std::move(weights);
  const Index n = s.weights_.size();
  s.dense_ = n <= dense_limit;
  if (s.dense_) {
    s.dist_.resize(n, n);
    for (Index i = 0; i < n; ++i) {
      s.dist_(i, i) = 0.0;
      for (Index j = i + 1; j < n; ++j) {
        const double d = (s.coords_.row(i) - s.coords_.row(j)).norm();
        s.dist_(i, j) = d;
        s.dist_(j, i) = d;
      }
    }
  }
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (!(s.distance(i, j) > 0.0)) throw ValidationError("coincident points in coordinates");
  s.finalize(std::move(ids));
  return s;
}

void MetricMeasureSpace::finalize(std::vector<std::int64_t> ids) {
  const Index n = size();
  if (ids.empty()) {
    ids.resize(static_cast<std::size_t>(n));
    std::iota(ids.begin(), ids.end(), 0);
  }
  if (static_cast<Index>(ids.size()) != n) throw ValidationError("point id count mismatch");
  ids_ = std::move(ids);
  diam_ = 0.0;
  min_gap_ = n > 1 ? std::numeric_limits<double>::infinity() : 0.0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double d = distance(i, j);
      diam_ = std::max(diam_, d);
      min_gap_ = std::min(min_gap_, d);
    }
  }
}

Matrix<double> MetricMeasureSpace::distance_matrix() const {
  if (dense_) return dist_;
  const Index n = size();
  Matrix<double> d(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) d(i, j) = distance(i, j);
  return d;
}

MetricAudit audit_metric(const MetricMeasureSpace& space, Index exhaustive_limit, Index samples,
                         std::uint64_t seed) {
  MetricAudit audit;
  const Index n = space.size();
  for (Index i = 0; i < n; ++i) {
    if (space.distance(i, i) != 0.0) {
      audit.ok = false;
      audit.message = "nonzero self-distance";
      audit.x = i;
      return audit;
    }
    for (Index j = i + 1; j < n; ++j) {
      if (space.distance(i, j) != space.distance(j, i) || !(space.distance(i, j) > 0.0)) {
        audit.ok = false;
        audit.message = "asymmetric or nonpositive distance";
        audit.x = i;
        audit.y = j;
        return audit;
      }
    }
  }
  // Relative slack absorbs rounding in coordinate-derived distances.
  const double slack = 1e-12 * std::max(1.0, space.diam());
  auto probe = [&](Index a, Index b, Index c) {
    const double excess = space.distance(a, c) - space.distance(a, b) - space.distance(b, c);
    if (excess > audit.worst_triangle_excess) {
      audit.worst_triangle_excess = excess;
      audit.x = a;
      audit.y = b;
      audit.z = c;
    }
  };
  if (n <= exhaustive_limit) {
    for (Index a = 0; a < n; ++a)
      for (Index b = 0; b < n; ++b)
        for (Index c = 0; c < n; ++c) probe(a, b, c);
  } else {
    audit.exhaustive = false;
    std::mt19937_64 rng(seed);
    for (Index k = 0; k < samples; ++k) {
      const auto a = static_cast<Index>(rng() % static_cast<std::uint64_t>(n));
      const auto b = static_cast<Index>(rng() % static_cast<std::uint64_t>(n));
      const auto c = static_cast<Index>(rng() % static_cast<std::uint64_t>(n));
      probe(a, b, c);
    }
  }
  if (audit.worst_triangle_excess > slack) {
    audit.ok = false;
    std::ostringstream os;
    os << "triangle inequality violated by " << audit.worst_triangle_excess;
    audit.message = os.str();
  }
  return audit;
}

PointSet ball(const MetricMeasureSpace& space, Index x, double r, BallKind kind) {
  require(r > 0.0, "ball radius must be positive");
  PointSet out;
  for (Index y = 0; y < space.size(); ++y) {
    const double d = space.distance(x, y);
    if (kind == BallKind::Open ? d < r : d <= r) out.push_back(y);
  }
  return out;
}

SortedNeighborhoods::SortedNeighborhoods(const MetricMeasureSpace& space) {
  const auto n = static_cast<std::size_t>(space.size());
  order_.resize(n);
  sorted_.resize(n);
  prefix_.resize(n);
  for (std::size_t x = 0; x < n; ++x) {
    auto& ord = order_[x];
    ord.resize(n);
    std::iota(ord.begin(), ord.end(), Index{0});
    const auto xi = static_cast<Index>(x);
    std::stable_sort(ord.begin(), ord.end(), [&](Index a, Index b) {
      return space.distance(xi, a) < space.distance(xi, b);
    });
    auto& sd = sorted_[x];
    auto& pm = prefix_[x];
    sd.resize(n);
    pm.resize(n + 1);
    pm[0] = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      sd[m] = space.distance(xi, ord[m]);
      pm[m + 1] = pm[m] + space.weight(ord[m]);
    }
  }
}

Index SortedNeighborhoods::count(Index x, double r, BallKind kind) const {
  const auto& sd = sorted_[static_cast<std::size_t>(x)];
  auto it = kind == BallKind::Open ? std::lower_bound(sd.begin(), sd.end(), r)
                                   : std::upper_bound(sd.begin(), sd.end(), r);
  return static_cast<Index>(it - sd.begin());
}

double SortedNeighborhoods::ball_measure(Index x, double r, BallKind kind) const {
  return prefix_[static_cast<std::size_t>(x)][static_cast<std::size_t>(count(x, r, kind))];
}

DoublingEstimate estimate_doubling_constant(const MetricMeasureSpace& space,
                                            const std::vector<double>& radius_grid) {
  require(!radius_grid.empty(), "radius grid must be nonempty");
  for (double r : radius_grid) require(r > 0.0, "radii must be positive");
  DoublingEstimate best;
  if (space.size() == 1) {
    best.r = radius_grid.front();
    return best;
  }
  best.c_d = 0.0;
  const SortedNeighborhoods nb(space);
  for (Index x = 0; x < space.size(); ++x) {
    for (double r : radius_grid) {
      const double ratio =
          nb.ball_measure(x, 2.0 * r, BallKind::Open) / nb.ball_measure(x, r, BallKind::Open);
      if (ratio > best.c_d) best = {ratio, x, r};
    }
  }
  return best;
}

double homogeneous_dimension(double c_d) {
  require(c_d >= 1.0, "doubling constant must be at least 1");
  return std::log2(c_d);
}

LowerMassEstimate estimate_lower_mass_constant(const MetricMeasureSpace& space, double Q,
                                               const std::vector<double>& radius_grid) {
  require(!radius_grid.empty(), "radius grid must be nonempty");
  const SortedNeighborhoods nb(space);
  LowerMassEstimate best;
  best.c_l = std::numeric_limits<double>::infinity();
  const double cap = space.size() > 1 ? space.diam() : std::numeric_limits<double>::infinity();
  for (Index x = 0; x < space.size(); ++x) {
    for (double r : radius_grid) {
      require(r > 0.0, "radii must be positive");
      if (r > cap) continue;
      const double ratio = nb.ball_measure(x, r, BallKind::Closed) / std::pow(r, Q);
      if (ratio < best.c_l) best = {ratio, x, r};
    }
  }
  if (!std::isfinite(best.c_l)) throw ValidationError("no radius within the diameter cap");
  return best;
}

std::vector<double> distinct_distances(const MetricMeasureSpace& space) {
  std::vector<double> out;
  const Index n = space.size();
  out.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) out.push_back(space.distance(i, j));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<double> radius_scale_set(const MetricMeasureSpace& space, const RadiusPolicy& policy) {
  if (space.size() < 2) return {};
  const double r_max = policy.r_max > 0.0 ? policy.r_max : space.diam();
  std::vector<double> out;
  if (policy.kind == RadiusPolicy::Kind::DistinctDistances) {
    for (double d : distinct_distances(space))
      if (d <= r_max) out.push_back(d);
  } else {
    require(policy.ratio > 1.0, "dyadic ratio must exceed 1");
    const double base = policy.base > 0.0 ? policy.base : space.min_gap();
    // Multiply from the base by integer powers so each radius is exact.
    for (int k = 0;; ++k) {
      const double r = base * std::pow(policy.ratio, k);
      if (r > r_max * (1.0 + 1e-12)) break;
      out.push_back(std::min(r, r_max));
      if (policy.count > 0 && static_cast<Index>(out.size()) >= policy.count) break;
    }
    if (policy.cap && policy.count == 0 && !out.empty() && out.back() < r_max * (1.0 - 1e-12)) out.push_back(r_max);
  }
  if (policy.count > 0 && static_cast<Index>(out.size()) > policy.count)
    out.resize(static_cast<std::size_t>(policy.count));
  return out;
}

std::vector<double> standard_radii(const MetricMeasureSpace& space, const RadiusPolicy& policy) {
  auto radii = radius_scale_set(space, policy);
  if (space.size() < 2) return {1.0};
  radii.push_back(0.5 * space.min_gap());
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
  return radii;
}

std::vector<double> doubling_radius_grid(const MetricMeasureSpace& space) {
  if (space.size() < 2) return {1.0};
  std::vector<double> out;
  for (double d : distinct_distances(space)) {
    out.push_back(d);
    out.push_back(0.5 * d);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

GeometryConstants estimate_geometry(const MetricMeasureSpace& space) {
  GeometryConstants g;
  g.radius_grid = doubling_radius_grid(space);
  const auto dbl = estimate_doubling_constant(space, g.radius_grid);
  g.c_d = dbl.c_d;
  g.doubling_x = dbl.x;
  g.doubling_r = dbl.r;
  g.Q = homogeneous_dimension(g.c_d);
  if (g.Q > 0.0) {
    const auto lm = estimate_lower_mass_constant(space, g.Q, g.radius_grid);
    g.c_l = lm.c_l;
    g.lower_x = lm.x;
    g.lower_r = lm.r;
  }
  return g;
}

}  // namespace fracmax
