#include "fracmax/verify.hpp"

#include "fracmax/norms.hpp"

#include <cmath>
#include <limits>
#include <map>

namespace fracmax {

namespace {

/// Increments at the rounding level of the values count as zero; M*_alpha of
/// a constant is constant only up to the last bit of the partition sums.
bool negligible(double increment, double a, double b) {
  return increment <= 64.0 * std::numeric_limits<double>::epsilon() *
                          std::max(std::abs(a), std::abs(b));
}

double mean_power(const MetricMeasureSpace& space, const Vector<double>& g, double p,
                  const PointSet& pts) {
  double num = 0.0, den = 0.0;
  for (Index y : pts) {
    num += std::pow(g(y), p) * space.weight(y);
    den += space.weight(y);
  }
  return std::pow(num / den, 1.0 / p);
}

double mean_oscillation(const MetricMeasureSpace& space, const Vector<double>& u,
                        const PointSet& pts) {
  const double mean = average(space, u, pts);
  double num = 0.0, den = 0.0;
  for (Index y : pts) {
    num += std::abs(u(y) - mean) * space.weight(y);
    den += space.weight(y);
  }
  return num / den;
}

double ratio_or_flag(double lhs, double rhs) {
  if (lhs == 0.0) return 0.0;
  if (rhs == 0.0) return kInfinity;
  return lhs / rhs;
}

std::vector<double> default_radii(const MetricMeasureSpace& space, std::vector<double> radii) {
  if (!radii.empty()) return radii;
  radii = distinct_distances(space);
  if (radii.empty()) radii.push_back(1.0);
  return radii;
}

template <typename RatioFn>
void scan_balls(VerificationReport& rep, const MetricMeasureSpace& space,
                const std::vector<double>& radii, RatioFn&& ratio) {
  rep.best_constant = 0.0;
  for (Index x = 0; x < space.size(); ++x)
    for (double r : radii) {
      const double v = ratio(x, r);
      if (v > rep.best_constant) {
        rep.best_constant = v;
        rep.witness.x = x;
        rep.witness.r = r;
      }
    }
  rep.pass = std::isfinite(rep.best_constant);
  if (!rep.pass) rep.notes.push_back("right side vanishes where the left side does not");
}

Vector<double> power(const Vector<double>& g, double t) { return g.array().pow(t).matrix(); }

}  // namespace

double poincare_ratio(const MetricMeasureSpace& space, const Vector<double>& u,
                      const Vector<double>& g, double s, double p, Index x, double r) {
  const double lhs = mean_oscillation(space, u, ball(space, x, r, BallKind::Closed));
  if (lhs == 0.0) return 0.0;
  const double rhs =
      std::pow(r, s) * mean_power(space, g, p, ball(space, x, 2.0 * r, BallKind::Closed));
  return ratio_or_flag(lhs, rhs);
}

VerificationReport check_poincare(const MetricMeasureSpace& space, const Vector<double>& u,
                                  const Vector<double>& g, double s, double p,
                                  std::vector<double> radii) {
  require(p > 0.0, "p must be positive");
  radii = default_radii(space, std::move(radii));
  VerificationReport rep;
  rep.id = "poincare";
  rep.params = {{"s", s}, {"p", p}};
  scan_balls(rep, space, radii,
             [&](Index x, double r) { return poincare_ratio(space, u, g, s, p, x, r); });
  return rep;
}

double inf_deviation(const std::vector<double>& values, const std::vector<double>& weights,
                     double exponent) {
  require(!values.empty(), "inf_deviation needs values");
  double total = 0.0;
  for (double w : weights) total += w;
  auto cost = [&](double c) {
    double acc = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
      acc += std::pow(std::abs(values[i] - c), exponent) * weights[i];
    return acc / total;
  };
  double best = kInfinity;
  // Minimizers of a concave-between-data-points cost sit at data points.
  for (double v : values) best = std::min(best, cost(v));
  if (exponent >= 1.0) {
    double lo = *std::min_element(values.begin(), values.end());
    double hi = *std::max_element(values.begin(), values.end());
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = hi - phi * (hi - lo), b = lo + phi * (hi - lo);
    double fa = cost(a), fb = cost(b);
    const double tol = 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)});
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
      if (fa <= fb) {
        hi = b;
        b = a;
        fb = fa;
        a = hi - phi * (hi - lo);
        fa = cost(a);
      } else {
        lo = a;
        a = b;
        fa = fb;
        b = lo + phi * (hi - lo);
        fb = cost(b);
      }
    }
    best = std::min({best, fa, fb, cost(0.5 * (lo + hi))});
  }
  return std::pow(best, 1.0 / exponent);
}

double sobolev_exponent(double Q, double s, double p) {
  if (!(Q > s * p)) throw ValidationError("Sobolev exponent needs p < Q/s");
  return Q * p / (Q - s * p);
}

namespace {

double deviation_on(const MetricMeasureSpace& space, const Vector<double>& u, const PointSet& pts,
                    double exponent) {
  std::vector<double> vals, wts;
  for (Index y : pts) {
    vals.push_back(u(y));
    wts.push_back(space.weight(y));
  }
  return inf_deviation(vals, wts, exponent);
}

}  // namespace

double sobolev_poincare_ratio(const MetricMeasureSpace& space, const Vector<double>& u,
                              const Vector<double>& g, double s, double p, double Q, Index x,
                              double r) {
  const double p_star = sobolev_exponent(Q, s, p);
  const double lhs = deviation_on(space, u, ball(space, x, r, BallKind::Closed), p_star);
  if (lhs == 0.0) return 0.0;
  const double rhs =
      std::pow(r, s) * mean_power(space, g, p, ball(space, x, 2.0 * r, BallKind::Closed));
  return ratio_or_flag(lhs, rhs);
}

VerificationReport check_sobolev_poincare(const MetricMeasureSpace& space, const Vector<double>& u,
                                          const Vector<double>& g, double s, double p, double Q,
                                          std::vector<double> radii) {
  const double p_star = sobolev_exponent(Q, s, p);
  radii = default_radii(space, std::move(radii));
  VerificationReport rep;
  rep.id = "sobolev_poincare";
  rep.params = {{"s", s}, {"p", p}, {"Q", Q}, {"p_star", p_star}};
  // Closed balls around x are nested, so the left side depends only on the ball's size.
  Index cached_x = -1;
  std::map<std::size_t, double> lhs_by_size;
  scan_balls(rep, space, radii, [&](Index x, double r) {
    if (x != cached_x) {
      cached_x = x;
      lhs_by_size.clear();
    }
    const auto pts = ball(space, x, r, BallKind::Closed);
    auto it = lhs_by_size.find(pts.size());
    if (it == lhs_by_size.end())
      it = lhs_by_size.emplace(pts.size(), deviation_on(space, u, pts, p_star)).first;
    if (it->second == 0.0) return 0.0;
    const double rhs =
        std::pow(r, s) * mean_power(space, g, p, ball(space, x, 2.0 * r, BallKind::Closed));
    return ratio_or_flag(it->second, rhs);
  });
  return rep;
}

namespace {

double fractional_rhs(const MetricMeasureSpace& space, const GradientSequence& seq, double s,
                      double p, double eps_prime, Index x, Index k) {
  const auto big = ball(space, x, std::ldexp(1.0, static_cast<int>(-k + 1)), BallKind::Closed);
  double sum = 0.0;
  for (Index j = std::max(k - 2, seq.k_min); j <= seq.k_max; ++j) {
    const Vector<double> gj = seq.level(j);
    sum += std::pow(2.0, -static_cast<double>(j) * (s - eps_prime)) * mean_power(space, gj, p, big);
  }
  return std::pow(2.0, -static_cast<double>(k) * eps_prime) * sum;
}

template <typename LhsFn>
VerificationReport scan_levels(const std::string& id, const MetricMeasureSpace& space,
                               const GradientSequence& seq, double s, double p, double eps_prime,
                               LhsFn&& lhs_fn) {
  VerificationReport rep;
  rep.id = id;
  const auto [k_lo, k_hi] = annulus_range(space);
  for (Index x = 0; x < space.size(); ++x)
    for (Index k = k_lo; k <= k_hi; ++k) {
      const double lhs = lhs_fn(ball(space, x, std::ldexp(1.0, static_cast<int>(-k)), BallKind::Closed));
      if (lhs == 0.0) continue;
      const double v = ratio_or_flag(lhs, fractional_rhs(space, seq, s, p, eps_prime, x, k));
      if (v > rep.best_constant) {
        rep.best_constant = v;
        rep.witness.x = x;
        rep.witness.k = k;
        rep.witness.r = std::ldexp(1.0, static_cast<int>(-k));
      }
    }
  rep.pass = std::isfinite(rep.best_constant);
  if (!rep.pass) rep.notes.push_back("right side vanishes where the left side does not");
  return rep;
}

void attach_truncation(VerificationReport& rep, double extended) {
  rep.truncation_delta = rep.best_constant > 0.0
                             ? std::abs(extended - rep.best_constant) / rep.best_constant
                             : std::abs(extended);
  rep.notes.push_back("level sums truncated to the sequence's level range");
}

}  // namespace

double fractional_poincare_ratio(const MetricMeasureSpace& space, const Vector<double>& u,
                                 const GradientSequence& seq, double s, double p,
                                 double eps_prime, Index x, Index k) {
  const double lhs =
      mean_oscillation(space, u, ball(space, x, std::ldexp(1.0, static_cast<int>(-k)), BallKind::Closed));
  if (lhs == 0.0) return 0.0;
  return ratio_or_flag(lhs, fractional_rhs(space, seq, s, p, eps_prime, x, k));
}

VerificationReport check_fractional_poincare(const MetricMeasureSpace& space,
                                             const Vector<double>& u, const GradientSequence& seq,
                                             double s, double p, double eps, double eps_prime) {
  require(0.0 < eps && eps < eps_prime && eps_prime < s, "need 0 < eps < eps' < s");
  auto lhs = [&](const PointSet& pts) { return mean_oscillation(space, u, pts); };
  auto rep = scan_levels("fractional_poincare", space, seq, s, p, eps_prime, lhs);
  const auto ext = scan_levels("fractional_poincare", space, extend_levels(seq, 2), s, p,
                               eps_prime, lhs);
  attach_truncation(rep, ext.best_constant);
  rep.params = {{"s", s}, {"p", p}, {"eps", eps}, {"eps_prime", eps_prime}};
  return rep;
}

VerificationReport check_fractional_sobolev_poincare(const MetricMeasureSpace& space,
                                                     const Vector<double>& u,
                                                     const GradientSequence& seq, double s,
                                                     double p, double eps, double eps_prime,
                                                     double Q) {
  require(0.0 < eps && eps < eps_prime && eps_prime < s, "need 0 < eps < eps' < s");
  const double p_star = sobolev_exponent(Q, eps, p);
  auto lhs = [&](const PointSet& pts) { return deviation_on(space, u, pts, p_star); };
  auto rep = scan_levels("fractional_sobolev_poincare", space, seq, s, p, eps_prime, lhs);
  const auto ext = scan_levels("fractional_sobolev_poincare", space, extend_levels(seq, 2), s, p,
                               eps_prime, lhs);
  attach_truncation(rep, ext.best_constant);
  rep.params = {{"s", s}, {"p", p}, {"eps", eps}, {"eps_prime", eps_prime}, {"Q", Q},
                {"p_star", p_star}};
  return rep;
}

GradientRatio best_gradient_constant(const MetricMeasureSpace& space, const Vector<double>& v,
                                     const Vector<double>& h, double beta) {
  GradientRatio best;
  for (Index x = 0; x < space.size(); ++x)
    for (Index y = x + 1; y < space.size(); ++y) {
      const double num = std::abs(v(x) - v(y));
      if (num == 0.0 || negligible(num, v(x), v(y))) continue;
      const double den = std::pow(space.distance(x, y), beta) * (h(x) + h(y));
      const double ratio = den > 0.0 ? num / den : kInfinity;
      if (ratio > best.constant) best = {ratio, x, y};
    }
  return best;
}

namespace {

TransferResult finish_transfer(const std::string& id, const MetricMeasureSpace& space,
                               const Vector<double>& v, Vector<double> h, double beta,
                               const TransferParams& params) {
  TransferResult res;
  res.maximal = v;
  res.h = std::move(h);
  res.exponent = beta;
  const auto ratio = best_gradient_constant(space, v, res.h, beta);
  res.g_tilde = ratio.constant * res.h;
  auto& rep = res.report;
  rep.id = id;
  rep.params = {{"s", params.s}, {"alpha", params.alpha}, {"t", params.t}, {"Q", params.Q},
                {"exponent", beta}};
  rep.best_constant = ratio.constant;
  rep.witness.x = ratio.x;
  rep.witness.y = ratio.y;
  rep.pass = std::isfinite(ratio.constant);
  rep.notes.push_back("M*_alpha u is finite: radii are capped on a finite space");
  if (!rep.pass) rep.notes.push_back("candidate vanishes on a pair where M*_alpha u varies");
  return res;
}

void check_t(const TransferParams& params) {
  require(params.t > 0.0, "t must be positive");
  require(params.t >= params.Q / (params.Q + params.s) * (1.0 - 1e-12), "need t >= Q/(Q+s)");
}

}  // namespace

TransferResult thm33a_transfer(const MetricMeasureSpace& space, const Vector<double>& u,
                               const Vector<double>& g, const TransferParams& params) {
  const double beta = params.s + params.alpha;
  require(params.alpha >= 0.0 && beta > 0.0 && beta <= 1.0, "branch a needs 0 < s+alpha <= 1");
  check_t(params);
  const auto fam = build_scale_family(space, params.scales);
  const Vector<double> v = discrete_fractional_maximal(space, u, params.alpha, fam).value;
  const auto radii = standard_radii(space, params.radii);
  const Vector<double> m = fractional_maximal(space, power(g, params.t), 0.0, radii).value;
  return finish_transfer("thm33a", space, v, power(m, 1.0 / params.t), beta, params);
}

TransferResult thm33b_transfer(const MetricMeasureSpace& space, const Vector<double>& u,
                               const Vector<double>& g, const TransferParams& params) {
  const double beta = params.s + params.alpha;
  require(params.alpha >= 0.0 && beta > 1.0, "branch b needs s+alpha > 1");
  check_t(params);
  const auto fam = build_scale_family(space, params.scales);
  const Vector<double> v = discrete_fractional_maximal(space, u, params.alpha, fam).value;
  const auto radii = standard_radii(space, params.radii);
  const double order = params.t * (beta - 1.0);
  const Vector<double> m = fractional_maximal(space, power(g, params.t), order, radii).value;
  return finish_transfer("thm33b", space, v, power(m, 1.0 / params.t), 1.0, params);
}

TransferResult thm33_transfer(const MetricMeasureSpace& space, const Vector<double>& u,
                              const Vector<double>& g, const TransferParams& params) {
  return params.s + params.alpha > 1.0 ? thm33b_transfer(space, u, g, params)
                                       : thm33a_transfer(space, u, g, params);
}

namespace {

SequenceParams sequence_defaults(double Q, double s, double alpha, double p, double q, double r) {
  SequenceParams sp;
  sp.s = s;
  sp.alpha = alpha;
  sp.p = p;
  sp.q = q;
  sp.Q = Q;
  sp.delta = 0.5 * (1.0 - (s + alpha));
  sp.eps = 0.5 * std::max(s, s + (Q - Q * r) / r);
  sp.eps_prime = 0.5 * (sp.eps + s);
  sp.t = Q / (Q + sp.eps);
  return sp;
}

}  // namespace

SequenceParams tl_default_params(double Q, double s, double alpha, double p, double q) {
  return sequence_defaults(Q, s, alpha, p, q, std::min(p, q));
}

SequenceParams besov_default_params(double Q, double s, double alpha, double p, double q) {
  return sequence_defaults(Q, s, alpha, p, q, p);
}

void validate_sequence_params(const SequenceParams& sp) {
  const double sa = sp.s + sp.alpha;
  if (!(sp.alpha >= 0.0 && sa > 0.0 && sa < 1.0))
    throw ValidationError("need 0 < s + alpha < 1");
  if (!(sp.delta > 0.0 && sp.delta < 1.0 - sa))
    throw ValidationError("need 0 < delta < 1 - s - alpha (got delta = " +
                          std::to_string(sp.delta) + ", bound " + std::to_string(1.0 - sa) + ")");
  if (!(sp.eps > 0.0 && sp.eps < sp.eps_prime && sp.eps_prime < sp.s))
    throw ValidationError("need 0 < eps < eps' < s");
  if (!(sp.t > 0.0 && sp.t >= sp.Q / (sp.Q + sp.eps) * (1.0 - 1e-12)))
    throw ValidationError("need t >= Q/(Q+eps)");
}

GradientSequence sequence_candidate(const MetricMeasureSpace& space, const GradientSequence& seq,
                                    const SequenceParams& sp) {
  const auto radii = standard_radii(space, sp.radii);
  Matrix<double> h(space.size(), seq.level_count());
  for (Index j = seq.k_min; j <= seq.k_max; ++j) {
    const Vector<double> gj = seq.level(j);
    const Vector<double> m = fractional_maximal(space, power(gj, sp.t), 0.0, radii).value;
    h.col(j - seq.k_min) = power(m, 1.0 / sp.t);
  }
  auto out = zero_sequence(space.size(), seq.k_min, seq.k_max, sp.s + sp.alpha);
  for (Index k = seq.k_min; k <= seq.k_max; ++k) {
    auto gk = out.level(k);
    for (Index j = seq.k_min; j <= k; ++j)
      gk += std::pow(2.0, static_cast<double>(j - k) * sp.delta) * h.col(j - seq.k_min);
    for (Index j = std::max(k - 7, seq.k_min); j <= seq.k_max; ++j)
      gk += std::pow(2.0, static_cast<double>(k - j) * (sp.s - sp.eps_prime)) * h.col(j - seq.k_min);
  }
  return out;
}

namespace {

GradientRatio best_sequence_constant(const MetricMeasureSpace& space, const Vector<double>& v,
                                     const GradientSequence& cand, double beta, Index& witness_k) {
  GradientRatio best;
  for (Index x = 0; x < space.size(); ++x)
    for (Index y = x + 1; y < space.size(); ++y) {
      const double num = std::abs(v(x) - v(y));
      if (num == 0.0 || negligible(num, v(x), v(y))) continue;
      const double d = space.distance(x, y);
      const Index k = annulus_index(d);
      if (!cand.contains(k)) throw RangeError("pair annulus outside the candidate's levels");
      const auto gk = cand.level(k);
      const double den = std::pow(d, beta) * (gk(x) + gk(y));
      const double ratio = den > 0.0 ? num / den : kInfinity;
      if (ratio > best.constant) {
        best = {ratio, x, y};
        witness_k = k;
      }
    }
  return best;
}

}  // namespace

SequenceTransferResult thm43_sequence_transfer(const MetricMeasureSpace& space,
                                               const Vector<double>& u,
                                               const GradientSequence& seq,
                                               const SequenceParams& sp) {
  validate_sequence_params(sp);
  const double beta = sp.s + sp.alpha;
  SequenceTransferResult res;
  const auto fam = build_scale_family(space, sp.scales);
  res.maximal = discrete_fractional_maximal(space, u, sp.alpha, fam).value;
  res.candidate = sequence_candidate(space, seq, sp);
  Index k_w = 0;
  const auto ratio = best_sequence_constant(space, res.maximal, res.candidate, beta, k_w);
  res.g_tilde = res.candidate;
  res.g_tilde.levels *= ratio.constant;

  Index k_ext = 0;
  const auto extended = sequence_candidate(space, extend_levels(seq, 2), sp);
  const auto ratio_ext = best_sequence_constant(space, res.maximal, extended, beta, k_ext);

  auto& rep = res.report;
  rep.id = "thm43";
  rep.params = {{"s", sp.s},     {"alpha", sp.alpha},         {"p", sp.p},
                {"q", sp.q},     {"delta", sp.delta},         {"eps", sp.eps},
                {"eps_prime", sp.eps_prime}, {"t", sp.t},     {"Q", sp.Q}};
  rep.best_constant = ratio.constant;
  rep.witness = {ratio.x, ratio.y, 0.0, k_w};
  rep.pass = std::isfinite(ratio.constant);
  attach_truncation(rep, ratio_ext.constant);
  rep.notes.push_back("M*_alpha u is finite: radii are capped on a finite space");
  return res;
}

const std::vector<std::string>& bounds_theorem_ids() {
  static const std::vector<std::string> ids = {"thm21",  "thm34a", "thm34b", "thm44", "thm45",
                                               "thm46a", "thm46b", "thm47a", "thm47b"};
  return ids;
}

BoundsParams default_bounds_params(const std::string& id) {
  BoundsParams bp;
  if (id == "thm21") {
    bp.alpha = 0.3;
    bp.p = 2.0;
  } else if (id == "thm34a") {
    bp.s = 0.5;
    bp.alpha = 0.3;
    bp.p = 2.0;
  } else if (id == "thm34b") {
    bp.s = 0.8;
    bp.alpha = 0.5;
    bp.p = 2.0;
  } else if (id == "thm44" || id == "thm45") {
    bp.s = 0.5;
    bp.alpha = 0.3;
    bp.p = 2.0;
    bp.q = 2.0;
  } else if (id == "thm46a" || id == "thm46b" || id == "thm47a" || id == "thm47b") {
    bp.s = 0.5;
    bp.alpha = 0.0;
    bp.p = 2.0;
    bp.q = 2.0;
  } else {
    throw ValidationError("unknown theorem id '" + id + "'");
  }
  return bp;
}

namespace {

std::string combine(bool target_exact, bool source_exact) {
  if (target_exact && source_exact) return "exact";
  if (!target_exact && source_exact) return "upper";
  if (target_exact) return "lower";
  return "indeterminate";
}

}  // namespace

BoundsRow boundedness_instance(const MetricMeasureSpace& space, const Vector<double>& u,
                               const std::string& id, const BoundsParams& bp) {
  BoundsRow row;
  const auto& w = space.weights();
  const double Q = estimate_geometry(space).Q;
  auto discrete_max = [&](double alpha) {
    const auto fam = build_scale_family(space, bp.scales);
    return discrete_fractional_maximal(space, u, alpha, fam).value;
  };
  bool src_exact = true, tgt_exact = true;

  if (id == "thm21") {
    if (!(bp.p > 1.0 && bp.alpha > 0.0 && bp.alpha < Q / bp.p)) {
      row.skipped = true;
      row.note = "parameters outside p > 1, 0 < alpha < Q/p for this space";
      return row;
    }
    const double p_star = Q * bp.p / (Q - bp.alpha * bp.p);
    const auto m = fractional_maximal(space, u, bp.alpha, standard_radii(space, bp.radii)).value;
    row.source = lp_norm(u, w, bp.p);
    row.target = lp_norm(m, w, p_star);
  } else if (id == "thm34a" || id == "thm34b") {
    const auto src = optimal_gradient(space, u, bp.s, bp.p);
    row.source = src.result.norm;
    src_exact = src.result.exact;
    const Vector<double> v = discrete_max(bp.alpha);
    const double sa = bp.s + bp.alpha;
    if (id == "thm34a") {
      if (!(sa > 0.0 && sa <= 1.0)) throw ValidationError("thm34a needs 0 < s+alpha <= 1");
      const auto tgt = optimal_gradient(space, v, sa, bp.p);
      row.target = tgt.result.norm;
      tgt_exact = tgt.result.exact;
    } else {
      if (!(sa > 1.0 && sa <= 1.0 + Q / bp.p)) {
        row.skipped = true;
        row.note = "parameters outside 1 < s+alpha <= 1 + Q/p for this space";
        return row;
      }
      const double q = Q * bp.p / (Q - (sa - 1.0) * bp.p);
      const auto tgt = optimal_gradient(space, v, 1.0, q);
      row.target = tgt.result.norm;
      tgt_exact = tgt.result.exact;
    }
  } else if (id == "thm44" || id == "thm45" || id == "thm46a" || id == "thm46b" ||
             id == "thm47a" || id == "thm47b") {
    const bool tl = id == "thm44" || id == "thm46a" || id == "thm46b";
    const bool full = id == "thm46b" || id == "thm47b";
    const double alpha = (id == "thm44" || id == "thm45") ? bp.alpha : 0.0;
    auto norm = [&](const Vector<double>& f, double s) {
      return tl ? triebel_lizorkin_norm(space, f, s, bp.p, bp.q)
                : besov_norm(space, f, s, bp.p, bp.q);
    };
    const auto src = norm(u, bp.s);
    const Vector<double> v = discrete_max(alpha);
    const auto tgt = norm(v, bp.s + alpha);
    row.source = src.result.norm + (full ? lp_norm(u, w, bp.p) : 0.0);
    row.target = tgt.result.norm + (full ? lp_norm(v, w, bp.p) : 0.0);
    src_exact = src.result.exact;
    tgt_exact = tgt.result.exact;
  } else {
    throw ValidationError("unknown theorem id '" + id + "'");
  }

  if (!(row.source > 0.0)) {
    row.skipped = true;
    row.note = "source norm vanishes (constant function)";
    return row;
  }
  row.ratio = row.target / row.source;
  row.semantics = combine(tgt_exact, src_exact);
  return row;
}

BoundsTable boundedness_experiment(const Corpus& corpus, const std::string& id,
                                   const BoundsParams& params, Execution mode) {
  BoundsTable table;
  table.theorem_id = id;
  table.params = params;
  std::vector<std::pair<std::size_t, std::size_t>> jobs;
  for (std::size_t e = 0; e < corpus.entries.size(); ++e)
    for (std::size_t f = 0; f < corpus.entries[e].functions.size(); ++f) jobs.push_back({e, f});
  table.rows.resize(jobs.size());
  parallel_for(
      static_cast<Index>(jobs.size()),
      [&](Index j) {
        const auto [e, f] = jobs[static_cast<std::size_t>(j)];
        const auto& entry = corpus.entries[e];
        auto row = boundedness_instance(entry.space, entry.functions[f], id, params);
        row.space_id = entry.id;
        row.function_id = entry.function_ids[f];
        table.rows[static_cast<std::size_t>(j)] = std::move(row);
      },
      mode);
  for (const auto& row : table.rows) {
    if (row.skipped) continue;
    if (row.ratio > table.max_ratio) {
      table.max_ratio = row.ratio;
      table.max_space = row.space_id;
      table.max_function = row.function_id;
    }
  }
  return table;
}

VerificationReport fefferman_stein_check(const MetricMeasureSpace& space,
                                         const GradientSequence& seq, double p, double q,
                                         std::vector<double> radii) {
  require(p > 1.0 && q > 1.0, "vector-valued maximal check needs p, q > 1");
  if (radii.empty()) radii = standard_radii(space, RadiusPolicy::distances());
  VerificationReport rep;
  rep.id = "fefferman_stein";
  rep.params = {{"p", p}, {"q", q}, {"levels", static_cast<double>(seq.level_count())}};
  Matrix<double> mg(space.size(), seq.level_count());
  for (Index c = 0; c < seq.level_count(); ++c) {
    const Vector<double> gc = seq.levels.col(c);
    mg.col(c) = fractional_maximal(space, gc, 0.0, radii).value;
  }
  const double den = lp_lq_norm(seq.levels, space.weights(), p, q);
  if (den == 0.0) {
    rep.notes.push_back("zero sequence: both sides vanish");
    return rep;
  }
  rep.best_constant = lp_lq_norm(mg, space.weights(), p, q) / den;
  rep.pass = std::isfinite(rep.best_constant);
  return rep;
}

GradientSequence random_sequence(Index n_points, Index levels, std::uint64_t seed) {
  auto seq = zero_sequence(n_points, 0, levels - 1, 1.0);
  SplitMix64 rng(seed);
  for (Index c = 0; c < levels; ++c)
    for (Index x = 0; x < n_points; ++x) seq.levels(x, c) = rng.uniform();
  return seq;
}

}  // namespace fracmax
