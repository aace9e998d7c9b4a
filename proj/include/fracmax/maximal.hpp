#pragma once

#include "fracmax/covering.hpp"
#include "fracmax/metric_space.hpp"

#include <vector>

namespace fracmax {

/// Covers and partitions of unity at every scale of a finite scale set.
struct ScaleFamily {
  std::vector<double> scales;
  std::vector<Cover> covers;
  std::vector<PartitionOfUnity> partitions;

  Index size() const { return static_cast<Index>(scales.size()); }
};

ScaleFamily build_scale_family(const MetricMeasureSpace& space, std::vector<double> scales,
                               Execution mode = Execution::Reference);
ScaleFamily build_scale_family(const MetricMeasureSpace& space, const RadiusPolicy& policy,
                               Execution mode = Execution::Reference);

/// Pointwise supremum together with the index (into the radius or scale
/// list) where it is attained; ties keep the smallest index.
struct MaximalResult {
  Vector<double> value;
  std::vector<Index> argmax;
};

/// M_alpha u(x) = max over r in `radii` of r^alpha times the mean of |u| on
/// the closed ball B(x, r).
MaximalResult fractional_maximal(const MetricMeasureSpace& space, const Vector<double>& u,
                                 double alpha, const std::vector<double>& radii,
                                 Execution mode = Execution::Reference);

/// u_r^alpha(x) = r^alpha * sum_i phi_i(x) * mean(u, B(x_i, 3r)).
Vector<double> discrete_convolution(const MetricMeasureSpace& space, const Vector<double>& u,
                                    const Cover& cover, const PartitionOfUnity& pou, double alpha);

/// M*_alpha u(x) = max over scales of |u|_r^alpha(x).
MaximalResult discrete_fractional_maximal(const MetricMeasureSpace& space,
                                          const Vector<double>& u, double alpha,
                                          const ScaleFamily& family,
                                          Execution mode = Execution::Reference);

struct ComparabilityReport {
  bool defined = false;  // false when u vanishes identically
  double c_low = 0.0;
  double c_high = 0.0;
  Index x_low = -1;
  Index x_high = -1;
};

/// Band of the pointwise ratio M*_alpha u / M_alpha u.
ComparabilityReport comparability_report(const MetricMeasureSpace& space, const Vector<double>& u,
                                         double alpha, const std::vector<double>& radii,
                                         const ScaleFamily& family,
                                         Execution mode = Execution::Reference);

}  // namespace fracmax
