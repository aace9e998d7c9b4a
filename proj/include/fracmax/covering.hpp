#pragma once

#include "fracmax/metric_space.hpp"

#include <vector>

namespace fracmax {

/// Ball cover at scale r: centers form a maximal r-separated net chosen
/// greedily in index order. Member sets use open balls.
struct Cover {
  double r = 0.0;
  std::vector<Index> centers;
  std::vector<PointSet> ball_r;   // B(x_i, r)
  std::vector<PointSet> ball_3r;  // B(x_i, 3r)
  std::vector<PointSet> ball_6r;  // B(x_i, 6r)

  Index size() const { return static_cast<Index>(centers.size()); }
};

/// Partition of unity subordinate to a cover. `phi` is stored per center as
/// (point, value) pairs with value > 0; every other entry is exactly zero.
struct PartitionOfUnity {
  struct Entry {
    Index point;
    double value;
  };
  double r = 0.0;
  std::vector<std::vector<Entry>> phi;  // indexed by center
  /// For each point, the centers whose phi is positive there, ascending.
  std::vector<std::vector<Index>> active;
  double nu = 0.0;   // min of phi_i over B(x_i, 3r)
  double lip = 0.0;  // empirical Lipschitz constant of the phi_i, times r
  Index overlap = 0; // N

  double value(Index center, Index point) const;
  /// Dense (points x centers) table.
  Matrix<double> dense(Index n_points) const;
};

Cover build_cover(const MetricMeasureSpace& space, double r);

/// max over points of the number of 6r-dilated balls containing it.
Index overlap_count(const MetricMeasureSpace& space, const Cover& cover);

/// psi_i = clamp((6r - d(x, x_i)) / (3r), 0, 1), normalized to sum to one.
/// Fills nu, lip, and overlap; throws if some point has no positive psi.
PartitionOfUnity build_partition_of_unity(const MetricMeasureSpace& space, const Cover& cover,
                                          Execution mode = Execution::Reference);

/// max over centers and pairs x != y of |phi_i(x) - phi_i(y)| * r / d(x, y).
double lipschitz_certificate(const MetricMeasureSpace& space, const PartitionOfUnity& pou,
                             Execution mode = Execution::Reference);

struct PartitionAudit {
  bool ok = true;
  double worst_sum_error = 0.0;  // max_x |sum_i phi_i(x) - 1|
  bool support_exact = true;     // phi_i == 0 outside B(x_i, 6r)
  bool nu_bound = true;          // nu * N >= 1
  double lip = 0.0;
};

PartitionAudit audit_partition(const MetricMeasureSpace& space, const Cover& cover,
                               const PartitionOfUnity& pou);

}  // namespace fracmax
