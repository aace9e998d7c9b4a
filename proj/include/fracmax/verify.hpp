#pragma once

#include "fracmax/corpus.hpp"
#include "fracmax/hajlasz.hpp"
#include "fracmax/maximal.hpp"
#include "fracmax/metric_space.hpp"

#include <map>
#include <string>
#include <vector>

namespace fracmax {

/// Where a best constant is attained. Unused fields stay at their defaults.
struct Witness {
  Index x = -1;
  Index y = -1;
  double r = 0.0;
  Index k = 0;
};

/// Smallest constant making one inequality hold over everything tested.
struct VerificationReport {
  std::string id;
  std::string space_id;
  std::string function_id;
  std::map<std::string, double> params;
  double best_constant = 0.0;
  Witness witness;
  bool pass = true;
  /// Relative change of best_constant when the level window grows by two
  /// levels on each side; negative when not applicable.
  double truncation_delta = -1.0;
  std::vector<std::string> notes;
};

// --- Poincare-type inequalities -------------------------------------------

/// mean_{B(x,r)} |u - u_B| / (r^s (mean_{B(x,2r)} g^p)^(1/p)), closed balls.
/// Returns 0 when both sides vanish and +inf when only the right side does.
double poincare_ratio(const MetricMeasureSpace& space, const Vector<double>& u,
                      const Vector<double>& g, double s, double p, Index x, double r);

/// Best constant over all points and radii. `radii` empty selects the
/// distinct pairwise distances.
VerificationReport check_poincare(const MetricMeasureSpace& space, const Vector<double>& u,
                                  const Vector<double>& g, double s, double p,
                                  std::vector<double> radii = {});

/// inf over c of (weighted mean of |v - c|^exponent)^(1/exponent).
double inf_deviation(const std::vector<double>& values, const std::vector<double>& weights,
                     double exponent);

/// Sobolev exponent Q p / (Q - s p); throws when Q <= s p.
double sobolev_exponent(double Q, double s, double p);

double sobolev_poincare_ratio(const MetricMeasureSpace& space, const Vector<double>& u,
                              const Vector<double>& g, double s, double p, double Q, Index x,
                              double r);

VerificationReport check_sobolev_poincare(const MetricMeasureSpace& space, const Vector<double>& u,
                                          const Vector<double>& g, double s, double p, double Q,
                                          std::vector<double> radii = {});

/// Level-k ratio of the fractional Poincare inequality with radius 2^-k; the
/// j-sum runs over j >= k - 2 within the sequence's levels.
double fractional_poincare_ratio(const MetricMeasureSpace& space, const Vector<double>& u,
                                 const GradientSequence& seq, double s, double p,
                                 double eps_prime, Index x, Index k);

/// Best constant over points and ball levels k in the space's annulus range.
/// Fills truncation_delta by re-running with two extra zero levels per side.
VerificationReport check_fractional_poincare(const MetricMeasureSpace& space,
                                             const Vector<double>& u, const GradientSequence& seq,
                                             double s, double p, double eps, double eps_prime);

/// Inf-over-c variant with exponent p*(eps) = Q p / (Q - eps p).
VerificationReport check_fractional_sobolev_poincare(const MetricMeasureSpace& space,
                                                     const Vector<double>& u,
                                                     const GradientSequence& seq, double s,
                                                     double p, double eps, double eps_prime,
                                                     double Q);

// --- Gradient transfer ------------------------------------------------------

struct TransferParams {
  double s = 0.5;
  double alpha = 0.3;
  double t = 1.0;
  double Q = 1.0;
  RadiusPolicy scales = RadiusPolicy::dyadic();      // scale family of M*_alpha
  RadiusPolicy radii = RadiusPolicy::distances();    // radii of the standard M
};

struct TransferResult {
  Vector<double> maximal;  // M*_alpha u
  Vector<double> h;        // unscaled gradient candidate
  Vector<double> g_tilde;  // best_constant * h
  double exponent = 1.0;   // Hajlasz exponent the candidate is tested at
  VerificationReport report;
};

/// max over pairs of |v(x) - v(y)| / (d^beta (h(x) + h(y))), with the pair
/// where it is attained. Pairs with 0/0 are skipped; c/0 with c > 0 gives inf.
struct GradientRatio {
  double constant = 0.0;
  Index x = -1;
  Index y = -1;
};
GradientRatio best_gradient_constant(const MetricMeasureSpace& space, const Vector<double>& v,
                                     const Vector<double>& h, double beta);

/// 0 < s + alpha <= 1: h = (M g^t)^(1/t), tested as an (s + alpha)-gradient of M*_alpha u.
TransferResult thm33a_transfer(const MetricMeasureSpace& space, const Vector<double>& u,
                               const Vector<double>& g, const TransferParams& params);
/// s + alpha > 1: h = (M_{t(s+alpha-1)} g^t)^(1/t), tested as a 1-gradient.
TransferResult thm33b_transfer(const MetricMeasureSpace& space, const Vector<double>& u,
                               const Vector<double>& g, const TransferParams& params);
/// Dispatches on s + alpha.
TransferResult thm33_transfer(const MetricMeasureSpace& space, const Vector<double>& u,
                              const Vector<double>& g, const TransferParams& params);

struct SequenceParams {
  double s = 0.5;
  double alpha = 0.3;
  double p = 2.0;
  double q = 2.0;
  double delta = 0.1;
  double eps = 0.25;
  double eps_prime = 0.375;
  double t = 1.0;
  double Q = 1.0;
  RadiusPolicy scales = RadiusPolicy::dyadic();
  RadiusPolicy radii = RadiusPolicy::distances();
};

/// Default sequence-transfer parameters for Triebel-Lizorkin norms:
/// delta = (1 - (s + alpha)) / 2, eps = max{s, s + (Q - Q r)/r} / 2 with
/// r = min{p, q}, eps' = (eps + s) / 2, t = Q / (Q + eps).
SequenceParams tl_default_params(double Q, double s, double alpha, double p, double q);
/// Same with r = p (Besov case).
SequenceParams besov_default_params(double Q, double s, double alpha, double p, double q);

/// Throws ValidationError unless 0 < s + alpha < 1, 0 < delta < 1 - s - alpha,
/// 0 < eps < eps' < s and t >= Q / (Q + eps).
void validate_sequence_params(const SequenceParams& params);

/// g~_k = sum_{j <= k} 2^((j-k) delta) h_j + sum_{j >= k-7} 2^((k-j)(s-eps')) h_j,
/// h_j = (M g_j^t)^(1/t), both sums truncated to the sequence's levels.
GradientSequence sequence_candidate(const MetricMeasureSpace& space, const GradientSequence& seq,
                                    const SequenceParams& params);

struct SequenceTransferResult {
  Vector<double> maximal;
  GradientSequence candidate;  // unscaled g~
  GradientSequence g_tilde;    // best_constant * g~
  VerificationReport report;
};

/// Smallest C with (C g~_k) a fractional (s + alpha)-gradient of M*_alpha u.
SequenceTransferResult thm43_sequence_transfer(const MetricMeasureSpace& space,
                                               const Vector<double>& u,
                                               const GradientSequence& seq,
                                               const SequenceParams& params);

// --- Norm boundedness ------------------------------------------------------

struct BoundsParams {
  double s = 0.5;
  double alpha = 0.3;
  double p = 2.0;
  double q = 2.0;
  RadiusPolicy scales = RadiusPolicy::dyadic();
  RadiusPolicy radii = RadiusPolicy::distances();
};

/// Default exponents for each theorem id: thm21, thm34a, thm34b, thm44, thm45,
/// thm46a, thm46b, thm47a, thm47b.
BoundsParams default_bounds_params(const std::string& theorem_id);
const std::vector<std::string>& bounds_theorem_ids();

struct BoundsRow {
  std::string space_id;
  std::string function_id;
  double source = 0.0;
  double target = 0.0;
  double ratio = 0.0;
  /// exact, upper, lower, or indeterminate (propagated from flagged norms).
  std::string semantics = "exact";
  bool skipped = false;
  std::string note;
};

struct BoundsTable {
  std::string theorem_id;
  BoundsParams params;
  std::vector<BoundsRow> rows;
  double max_ratio = 0.0;
  std::string max_space;
  std::string max_function;
};

BoundsRow boundedness_instance(const MetricMeasureSpace& space, const Vector<double>& u,
                               const std::string& theorem_id, const BoundsParams& params);

BoundsTable boundedness_experiment(const Corpus& corpus, const std::string& theorem_id,
                                   const BoundsParams& params,
                                   Execution mode = Execution::Reference);

// --- Vector-valued maximal inequality ------------------------------------

/// ||(M g_k)||_{L^p(l^q)} / ||(g_k)||_{L^p(l^q)} with the standard maximal
/// operator at `radii` (empty: distances plus min_gap/2).
VerificationReport fefferman_stein_check(const MetricMeasureSpace& space,
                                         const GradientSequence& seq, double p, double q,
                                         std::vector<double> radii = {});

/// Levels with i.i.d. uniform [0,1) entries (seeded, platform independent).
GradientSequence random_sequence(Index n_points, Index levels, std::uint64_t seed);

}  // namespace fracmax
