#pragma once

#include "fracmax/metric_space.hpp"
#include "fracmax/norms.hpp"

#include <string>
#include <vector>

namespace fracmax {

/// Candidate s-gradient: a nonnegative function on the points.
struct GradientCandidate {
  Vector<double> g;
  double s = 1.0;
};

/// Fractional s-gradient (g_k) for k in [k_min, k_max]. Column c of
/// `levels` holds g_{k_min + c}; rows are points. Levels outside the range
/// are identically zero.
struct GradientSequence {
  Index k_min = 0;
  Index k_max = -1;
  Matrix<double> levels;
  double s = 1.0;

  Index level_count() const { return k_max - k_min + 1; }
  bool contains(Index k) const { return k >= k_min && k <= k_max; }
  auto level(Index k) { return levels.col(k - k_min); }
  auto level(Index k) const { return levels.col(k - k_min); }
};

/// The unique k with 2^(-k-1) <= d < 2^(-k).
Index annulus_index(double d);

/// Levels realized by pairs of the space: [annulus(diam), annulus(min_gap)].
std::pair<Index, Index> annulus_range(const MetricMeasureSpace& space);

GradientSequence zero_sequence(Index n_points, Index k_min, Index k_max, double s);

/// Copy of `seq` padded with `extra` zero levels on each side.
GradientSequence extend_levels(const GradientSequence& seq, Index extra);

struct GradientCheck {
  bool ok = true;
  double worst_violation = 0.0;  // max over constrained pairs of |du| - d^s (g(x) + g(y))
  Index x = -1, y = -1;
  Index k = 0;  // annulus of the witness (fractional checks only)
};

GradientCheck is_hajlasz_gradient(const MetricMeasureSpace& space, const Vector<double>& u,
                                  const Vector<double>& g, double s, double tol = 0.0);

/// g(x) = max over y != x of |u(x) - u(y)| / d(x, y)^s.
GradientCandidate canonical_gradient(const MetricMeasureSpace& space, const Vector<double>& u,
                                     double s);

/// Outcome of a norm infimum computation.
struct NormResult {
  double norm = 0.0;
  /// False when the value is only an upper bound (0 < p < 1 or 0 < q < 1).
  bool exact = true;
  bool converged = true;
  double gap_bound = 0.0;  // barrier duality gap on the normalized problem
  int newton_steps = 0;
  std::string status = "optimal";
};

struct OptimalGradient {
  GradientCandidate gradient;
  NormResult result;
};

/// Minimizes ||g||_{L^p} over all s-gradients of u. Exact to solver
/// tolerance for p >= 1 (including p = inf); for 0 < p < 1 returns the best
/// of several feasible candidates, flagged as an upper bound.
OptimalGradient optimal_gradient(const MetricMeasureSpace& space, const Vector<double>& u,
                                 double s, double p);

/// Homogeneous part: inf ||g||_p.
double hajlasz_norm(const MetricMeasureSpace& space, const Vector<double>& u, double s, double p);
/// ||u||_p plus the homogeneous part.
double full_hajlasz_norm(const MetricMeasureSpace& space, const Vector<double>& u, double s,
                         double p);

/// Checks each pair only at its own annulus level. Throws RangeError when a
/// pair's level is outside the sequence's range.
GradientCheck is_fractional_gradient(const MetricMeasureSpace& space, const Vector<double>& u,
                                     const GradientSequence& seq, double s, double tol = 0.0);

/// g_k(x) = max over y in the k-annulus of x of |u(x) - u(y)| / d^s (0 if none).
GradientSequence canonical_fractional_gradient(const MetricMeasureSpace& space,
                                               const Vector<double>& u, double s);

struct SequenceNorm {
  GradientSequence sequence;
  NormResult result;
};

/// Besov norm inf ||(g_k)||_{l^q(L^p)}. Levels decouple, so each level is an
/// independent polytope problem.
SequenceNorm besov_norm(const MetricMeasureSpace& space, const Vector<double>& u, double s,
                        double p, double q);

/// Same infimum solved as one joint program over all levels (p, q >= 1, finite).
SequenceNorm besov_norm_joint(const MetricMeasureSpace& space, const Vector<double>& u, double s,
                              double p, double q);

/// Triebel-Lizorkin norm inf ||(g_k)||_{L^p(l^q)} as a joint program over all
/// levels (p in [1, inf), q in [1, inf]); flagged canonical upper bound when
/// min(p, q) < 1.
SequenceNorm triebel_lizorkin_norm(const MetricMeasureSpace& space, const Vector<double>& u,
                                   double s, double p, double q);

enum class MixedNorm { LpLq, LqLp };

double mixed_norm(const GradientSequence& seq, const Vector<double>& weights, double p, double q,
                  MixedNorm kind);

}  // namespace fracmax
