#pragma once

#include "fracmax/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fracmax {

enum class BallKind { Open, Closed };

/// Finite metric measure space. Distances are held as a dense matrix up to
/// `dense_limit` points; larger coordinate-backed spaces evaluate the metric
/// on demand. Immutable after construction.
class MetricMeasureSpace {
public:
  static constexpr Index kDefaultDenseLimit = 2048;

  static MetricMeasureSpace from_matrix(Matrix<double> dist, Vector<double> weights,
                                        std::vector<std::int64_t> ids = {});
  static MetricMeasureSpace from_coordinates(Matrix<double> coords, Vector<double> weights,
                                             std::vector<std::int64_t> ids = {},
                                             Index dense_limit = kDefaultDenseLimit);

  Index size() const { return weights_.size(); }
  double distance(Index x, Index y) const {
    if (dense_) return dist_(x, y);
    return (coords_.row(x) - coords_.row(y)).norm();
  }
  double weight(Index x) const { return weights_(x); }
  const Vector<double>& weights() const { return weights_; }
  double total_measure() const { return weights_.sum(); }
  double diam() const { return diam_; }
  /// Smallest positive distance; 0 for a single point.
  double min_gap() const { return min_gap_; }

  const std::vector<std::int64_t>& ids() const { return ids_; }
  bool has_coordinates() const { return coords_.size() > 0; }
  const Matrix<double>& coordinates() const { return coords_; }
  bool is_dense() const { return dense_; }
  /// Full distance matrix (materialized on demand for on-the-fly spaces).
  Matrix<double> distance_matrix() const;

private:
  MetricMeasureSpace() = default;
  void finalize(std::vector<std::int64_t> ids);

  Matrix<double> dist_;
  Matrix<double> coords_;
  Vector<double> weights_;
  std::vector<std::int64_t> ids_;
  bool dense_ = true;
  double diam_ = 0.0;
  double min_gap_ = 0.0;
};

/// Result of checking the metric axioms.
struct MetricAudit {
  bool ok = true;
  bool exhaustive = true;
  double worst_triangle_excess = 0.0;
  Index x = -1, y = -1, z = -1;
  std::string message;
};

/// Exhaustive triangle check up to `exhaustive_limit` points, random triples
/// (seeded) beyond it. Symmetry, zero diagonal, and positivity are always
/// checked on every pair.
MetricAudit audit_metric(const MetricMeasureSpace& space, Index exhaustive_limit = 200,
                         Index samples = 200000, std::uint64_t seed = 1);

PointSet ball(const MetricMeasureSpace& space, Index x, double r, BallKind kind);

template <typename Derived>
double measure(const MetricMeasureSpace& space, const Derived& points) {
  double m = 0.0;
  for (Index y : points) m += space.weight(y);
  return m;
}

/// Weighted mean of `u` over a nonempty point set.
template <typename Derived>
double average(const MetricMeasureSpace& space, const Eigen::MatrixBase<Derived>& u,
               const PointSet& points) {
  if (points.empty()) throw ValidationError("average over an empty ball");
  double num = 0.0, den = 0.0;
  for (Index y : points) {
    num += u(y) * space.weight(y);
    den += space.weight(y);
  }
  return num / den;
}

/// Per-point neighbor order sorted by distance, with prefix sums of the
/// measure. Answers ball measure and ball integrals in O(log n).
class SortedNeighborhoods {
public:
  explicit SortedNeighborhoods(const MetricMeasureSpace& space);

  Index size() const { return static_cast<Index>(order_.size()); }
  /// Number of points in B(x, r).
  Index count(Index x, double r, BallKind kind) const;
  double ball_measure(Index x, double r, BallKind kind) const;
  /// Points of x's neighborhood in increasing distance (ties by index).
  const std::vector<Index>& order(Index x) const { return order_[static_cast<std::size_t>(x)]; }
  const std::vector<double>& sorted_distances(Index x) const {
    return sorted_[static_cast<std::size_t>(x)];
  }
  /// prefix(x)[m] = measure of the m nearest points.
  const std::vector<double>& prefix_measure(Index x) const {
    return prefix_[static_cast<std::size_t>(x)];
  }

private:
  std::vector<std::vector<Index>> order_;
  std::vector<std::vector<double>> sorted_;
  std::vector<std::vector<double>> prefix_;
};

struct GeometryConstants {
  double c_d = 1.0;
  double Q = 0.0;
  std::optional<double> c_l;
  std::vector<double> radius_grid;
  Index doubling_x = 0;
  double doubling_r = 0.0;
  Index lower_x = 0;
  double lower_r = 0.0;
};

struct DoublingEstimate {
  double c_d = 1.0;
  Index x = 0;
  double r = 0.0;
};

/// max over x and r in the grid of mu(B(x,2r)) / mu(B(x,r)), open balls.
DoublingEstimate estimate_doubling_constant(const MetricMeasureSpace& space,
                                            const std::vector<double>& radius_grid);

double homogeneous_dimension(double c_d);

struct LowerMassEstimate {
  double c_l = 0.0;
  Index x = 0;
  double r = 0.0;
};

/// min over x and r in the grid (r <= diam) of mu(B(x,r)) / r^Q, closed balls.
LowerMassEstimate estimate_lower_mass_constant(const MetricMeasureSpace& space, double Q,
                                               const std::vector<double>& radius_grid);

struct RadiusPolicy {
  enum class Kind { DistinctDistances, Dyadic };
  Kind kind = Kind::Dyadic;
  double base = 0.0;   // 0 selects min_gap
  double ratio = 2.0;  // growth factor between consecutive dyadic radii
  Index count = 0;     // 0 means no cap on the number of radii
  double r_max = 0.0;  // 0 selects diam
  bool cap = true;     // dyadic: end on r_max when the progression stops short of it

  static RadiusPolicy distances() { return {Kind::DistinctDistances, 0.0, 2.0, 0, 0.0, true}; }
  static RadiusPolicy dyadic(double ratio = 2.0) {
    return {Kind::Dyadic, 0.0, ratio, 0, 0.0, true};
  }
};

/// Finite sorted set of radii in (0, R_max]. Empty for a single point.
/// Dyadic: base * ratio^k up to r_max, then r_max itself when `cap` is set
/// and no count limit applies.
std::vector<double> radius_scale_set(const MetricMeasureSpace& space, const RadiusPolicy& policy);

/// Sorted distinct pairwise distances.
std::vector<double> distinct_distances(const MetricMeasureSpace& space);

/// Radius set for the standard maximal operator: the policy's radii plus
/// min_gap/2, so the singleton ball is represented.
std::vector<double> standard_radii(const MetricMeasureSpace& space, const RadiusPolicy& policy);

/// Every radius at which an open-ball doubling ratio can change
/// (distinct distances and their halves), capped at diam.
std::vector<double> doubling_radius_grid(const MetricMeasureSpace& space);

GeometryConstants estimate_geometry(const MetricMeasureSpace& space);

}  // namespace fracmax
