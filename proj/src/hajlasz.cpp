#include "fracmax/hajlasz.hpp"

#include "fracmax/convex.hpp"

#include <cmath>
#include <limits>
#include <map>

namespace fracmax {

namespace {

struct PairConstraint {
  Index x;
  Index y;
  double c;  // g(x) + g(y) >= c
};

double quotient(const MetricMeasureSpace& space, const Vector<double>& u, Index x, Index y,
                double s) {
  return std::abs(u(x) - u(y)) / std::pow(space.distance(x, y), s);
}

std::vector<PairConstraint> all_pairs(const MetricMeasureSpace& space, const Vector<double>& u,
                                      double s) {
  std::vector<PairConstraint> out;
  for (Index x = 0; x < space.size(); ++x)
    for (Index y = x + 1; y < space.size(); ++y) {
      const double c = quotient(space, u, x, y, s);
      if (c > 0.0) out.push_back({x, y, c});
    }
  return out;
}

/// Pairs grouped by annulus level (key k).
std::map<Index, std::vector<PairConstraint>> pairs_by_level(const MetricMeasureSpace& space,
                                                            const Vector<double>& u, double s) {
  std::map<Index, std::vector<PairConstraint>> out;
  for (Index x = 0; x < space.size(); ++x)
    for (Index y = x + 1; y < space.size(); ++y) {
      const double c = quotient(space, u, x, y, s);
      if (c > 0.0) out[annulus_index(space.distance(x, y))].push_back({x, y, c});
    }
  return out;
}

/// Lowers each entry to the least value its constraints allow, given the
/// others; repeated until nothing moves. Keeps feasibility, never increases.
void tighten(std::vector<double>& g, const std::vector<PairConstraint>& pairs, Index n) {
  std::vector<std::vector<std::pair<Index, double>>> adj(static_cast<std::size_t>(n));
  for (const auto& pc : pairs) {
    adj[static_cast<std::size_t>(pc.x)].push_back({pc.y, pc.c});
    adj[static_cast<std::size_t>(pc.y)].push_back({pc.x, pc.c});
  }
  for (int pass = 0; pass < 100; ++pass) {
    bool moved = false;
    for (Index x = 0; x < n; ++x) {
      double need = 0.0;
      for (const auto& [y, c] : adj[static_cast<std::size_t>(x)])
        need = std::max(need, c - g[static_cast<std::size_t>(y)]);
      if (need < g[static_cast<std::size_t>(x)]) {
        g[static_cast<std::size_t>(x)] = need;
        moved = true;
      }
    }
    if (!moved) break;
  }
}

struct PolytopeSolution {
  Vector<double> g;
  NormResult result;
};

double quasi_norm(const Vector<double>& g, const Vector<double>& w, double p) {
  return lp_norm(g, w, p);
}

/// min ||g||_{L^p(w)} subject to g >= 0 and g(x) + g(y) >= c for every pair.
PolytopeSolution solve_polytope(const Vector<double>& w, const std::vector<PairConstraint>& pairs,
                                double p) {
  const Index n = w.size();
  PolytopeSolution sol;
  sol.g = Vector<double>::Zero(n);
  if (pairs.empty()) return sol;

  double c_max = 0.0;
  for (const auto& pc : pairs) c_max = std::max(c_max, pc.c);

  // Only points touched by a constraint carry a variable; the rest stay zero.
  std::vector<Index> var_of(static_cast<std::size_t>(n), -1);
  std::vector<Index> point_of;
  for (const auto& pc : pairs)
    for (Index v : {pc.x, pc.y})
      if (var_of[static_cast<std::size_t>(v)] < 0) {
        var_of[static_cast<std::size_t>(v)] = static_cast<Index>(point_of.size());
        point_of.push_back(v);
      }
  std::sort(point_of.begin(), point_of.end());
  for (std::size_t i = 0; i < point_of.size(); ++i)
    var_of[static_cast<std::size_t>(point_of[i])] = static_cast<Index>(i);
  const auto nv = static_cast<Index>(point_of.size());

  std::vector<double> canon(static_cast<std::size_t>(nv), 0.0);
  for (const auto& pc : pairs) {
    auto& a = canon[static_cast<std::size_t>(var_of[static_cast<std::size_t>(pc.x)])];
    auto& b = canon[static_cast<std::size_t>(var_of[static_cast<std::size_t>(pc.y)])];
    a = std::max(a, pc.c / c_max);
    b = std::max(b, pc.c / c_max);
  }

  if (p < 1.0) {
    // Nonconvex: best feasible candidate among tightened canonical and LP solutions.
    std::vector<PairConstraint> local;
    for (const auto& pc : pairs) local.push_back({pc.x, pc.y, pc.c});
    std::vector<Vector<double>> candidates;
    std::vector<double> c1(static_cast<std::size_t>(n), 0.0);
    for (const auto& pc : pairs) {
      c1[static_cast<std::size_t>(pc.x)] = std::max(c1[static_cast<std::size_t>(pc.x)], pc.c);
      c1[static_cast<std::size_t>(pc.y)] = std::max(c1[static_cast<std::size_t>(pc.y)], pc.c);
    }
    tighten(c1, local, n);
    candidates.push_back(Eigen::Map<Vector<double>>(c1.data(), n));
    for (double p_relaxed : {1.0, kInfinity}) {
      auto relaxed = solve_polytope(w, pairs, p_relaxed);
      std::vector<double> r(relaxed.g.data(), relaxed.g.data() + n);
      tighten(r, local, n);
      candidates.push_back(Eigen::Map<Vector<double>>(r.data(), n));
    }
    double best = kInfinity;
    for (auto& cand : candidates) {
      const double v = quasi_norm(cand, w, p);
      if (v < best) {
        best = v;
        sol.g = cand;
      }
    }
    sol.result.norm = best;
    sol.result.exact = false;
    sol.result.status = "nonconvex_upper_bound";
    return sol;
  }

  const bool sup_norm = std::isinf(p);
  const Index nz = sup_norm ? nv + 1 : nv;
  std::vector<convex::Inequality> rows;
  rows.reserve(pairs.size() + static_cast<std::size_t>(2 * nv));
  for (const auto& pc : pairs)
    rows.push_back(convex::Inequality::pair(var_of[static_cast<std::size_t>(pc.x)], 1.0,
                                            var_of[static_cast<std::size_t>(pc.y)], 1.0,
                                            pc.c / c_max));
  for (Index i = 0; i < nv; ++i) rows.push_back(convex::Inequality::single(i, 1.0, 0.0));
  Vector<double> z0(nz);
  for (Index i = 0; i < nv; ++i) z0(i) = canon[static_cast<std::size_t>(i)] + 0.5;

  convex::BarrierResult br;
  if (sup_norm) {
    for (Index i = 0; i < nv; ++i) rows.push_back(convex::Inequality::pair(nv, 1.0, i, -1.0, 0.0));
    z0(nv) = z0.head(nv).maxCoeff() + 1.0;
    Vector<double> c = Vector<double>::Zero(nz);
    c(nv) = 1.0;
    br = convex::minimize(convex::LinearObjective(c), rows, z0);
  } else if (p == 1.0) {
    Vector<double> c(nv);
    for (Index i = 0; i < nv; ++i) c(i) = w(point_of[static_cast<std::size_t>(i)]);
    br = convex::minimize(convex::LinearObjective(c), rows, z0);
  } else {
    std::vector<convex::NestedPowerObjective::Group> groups;
    for (Index i = 0; i < nv; ++i)
      groups.push_back({1.0, {i}, {w(point_of[static_cast<std::size_t>(i)])}});
    br = convex::minimize(convex::NestedPowerObjective(std::move(groups), p, 1.0), rows, z0);
  }
  for (Index i = 0; i < nv; ++i) sol.g(point_of[static_cast<std::size_t>(i)]) = c_max * br.z(i);
  sol.result.norm = lp_norm(sol.g, w, p);
  sol.result.converged = br.converged;
  sol.result.gap_bound = br.gap_bound;
  sol.result.newton_steps = br.newton_steps;
  sol.result.status = br.converged ? "optimal" : "not_converged";
  return sol;
}

}  // namespace

Index annulus_index(double d) {
  if (!(d > 0.0) || !std::isfinite(d)) throw RangeError("annulus index needs a positive distance");
  int e = 0;
  std::frexp(d, &e);  // d = m 2^e with m in [1/2, 1)
  return -static_cast<Index>(e);
}

std::pair<Index, Index> annulus_range(const MetricMeasureSpace& space) {
  if (space.size() < 2) return {0, 0};
  return {annulus_index(space.diam()), annulus_index(space.min_gap())};
}

GradientSequence zero_sequence(Index n_points, Index k_min, Index k_max, double s) {
  GradientSequence seq;
  seq.k_min = k_min;
  seq.k_max = k_max;
  seq.s = s;
  seq.levels = Matrix<double>::Zero(n_points, std::max<Index>(0, k_max - k_min + 1));
  return seq;
}

GradientSequence extend_levels(const GradientSequence& seq, Index extra) {
  auto out = zero_sequence(seq.levels.rows(), seq.k_min - extra, seq.k_max + extra, seq.s);
  out.levels.middleCols(extra, seq.level_count()) = seq.levels;
  return out;
}

GradientCheck is_hajlasz_gradient(const MetricMeasureSpace& space, const Vector<double>& u,
                                  const Vector<double>& g, double s, double tol) {
  require(s >= 0.0, "smoothness exponent must be nonnegative");
  GradientCheck chk;
  chk.worst_violation = space.size() > 1 ? -kInfinity : 0.0;
  for (Index x = 0; x < space.size(); ++x)
    for (Index y = x + 1; y < space.size(); ++y) {
      const double v =
          std::abs(u(x) - u(y)) - std::pow(space.distance(x, y), s) * (g(x) + g(y));
      if (v > chk.worst_violation) {
        chk.worst_violation = v;
        chk.x = x;
        chk.y = y;
      }
    }
  chk.ok = chk.worst_violation <= tol;
  return chk;
}

GradientCandidate canonical_gradient(const MetricMeasureSpace& space, const Vector<double>& u,
                                     double s) {
  GradientCandidate out;
  out.s = s;
  out.g = Vector<double>::Zero(space.size());
  for (Index x = 0; x < space.size(); ++x)
    for (Index y = 0; y < space.size(); ++y)
      if (y != x) out.g(x) = std::max(out.g(x), quotient(space, u, x, y, s));
  return out;
}

OptimalGradient optimal_gradient(const MetricMeasureSpace& space, const Vector<double>& u,
                                 double s, double p) {
  require(p > 0.0, "p must be positive");
  require(s >= 0.0, "smoothness exponent must be nonnegative");
  auto sol = solve_polytope(space.weights(), all_pairs(space, u, s), p);
  OptimalGradient out;
  out.gradient = {std::move(sol.g), s};
  out.result = sol.result;
  return out;
}

double hajlasz_norm(const MetricMeasureSpace& space, const Vector<double>& u, double s, double p) {
  return optimal_gradient(space, u, s, p).result.norm;
}

double full_hajlasz_norm(const MetricMeasureSpace& space, const Vector<double>& u, double s,
                         double p) {
  return lp_norm(u, space.weights(), p) + hajlasz_norm(space, u, s, p);
}

GradientCheck is_fractional_gradient(const MetricMeasureSpace& space, const Vector<double>& u,
                                     const GradientSequence& seq, double s, double tol) {
  GradientCheck chk;
  chk.worst_violation = space.size() > 1 ? -kInfinity : 0.0;
  for (Index x = 0; x < space.size(); ++x)
    for (Index y = x + 1; y < space.size(); ++y) {
      const double d = space.distance(x, y);
      const Index k = annulus_index(d);
      if (!seq.contains(k))
        throw RangeError("pair (" + std::to_string(x) + ", " + std::to_string(y) +
                         ") lies in annulus " + std::to_string(k) +
                         " outside the sequence's level range");
      const auto gk = seq.level(k);
      const double v = std::abs(u(x) - u(y)) - std::pow(d, s) * (gk(x) + gk(y));
      if (v > chk.worst_violation) {
        chk.worst_violation = v;
        chk.x = x;
        chk.y = y;
        chk.k = k;
      }
    }
  chk.ok = chk.worst_violation <= tol;
  return chk;
}

GradientSequence canonical_fractional_gradient(const MetricMeasureSpace& space,
                                               const Vector<double>& u, double s) {
  const auto [k_min, k_max] = annulus_range(space);
  auto seq = zero_sequence(space.size(), k_min, k_max, s);
  for (Index x = 0; x < space.size(); ++x)
    for (Index y = x + 1; y < space.size(); ++y) {
      const Index k = annulus_index(space.distance(x, y));
      const double c = quotient(space, u, x, y, s);
      auto gk = seq.level(k);
      gk(x) = std::max(gk(x), c);
      gk(y) = std::max(gk(y), c);
    }
  return seq;
}

double mixed_norm(const GradientSequence& seq, const Vector<double>& weights, double p, double q,
                  MixedNorm kind) {
  return kind == MixedNorm::LpLq ? lp_lq_norm(seq.levels, weights, p, q)
                                 : lq_lp_norm(seq.levels, weights, p, q);
}

SequenceNorm besov_norm(const MetricMeasureSpace& space, const Vector<double>& u, double s,
                        double p, double q) {
  require(p > 0.0 && q > 0.0, "p and q must be positive");
  const auto [k_min, k_max] = annulus_range(space);
  SequenceNorm out;
  out.sequence = zero_sequence(space.size(), k_min, k_max, s);
  for (const auto& [k, pairs] : pairs_by_level(space, u, s)) {
    auto sol = solve_polytope(space.weights(), pairs, p);
    out.sequence.level(k) = sol.g;
    out.result.exact = out.result.exact && sol.result.exact;
    out.result.converged = out.result.converged && sol.result.converged;
    out.result.gap_bound = std::max(out.result.gap_bound, sol.result.gap_bound);
    out.result.newton_steps += sol.result.newton_steps;
  }
  out.result.norm = mixed_norm(out.sequence, space.weights(), p, q, MixedNorm::LqLp);
  if (!out.result.exact) out.result.status = "nonconvex_upper_bound";
  else if (!out.result.converged) out.result.status = "not_converged";
  return out;
}

namespace {

/// Variable layout for joint programs: one variable per (level, point) that
/// some constraint touches.
struct JointLayout {
  std::vector<std::pair<Index, Index>> slots;  // (level k, point x) in variable order
  std::map<std::pair<Index, Index>, Index> var;
  std::vector<std::pair<Index, PairConstraint>> pairs;  // (k, constraint)
  double c_max = 0.0;
};

JointLayout joint_layout(const MetricMeasureSpace& space, const Vector<double>& u, double s) {
  JointLayout L;
  for (const auto& [k, pairs] : pairs_by_level(space, u, s))
    for (const auto& pc : pairs) {
      L.pairs.push_back({k, pc});
      L.c_max = std::max(L.c_max, pc.c);
      for (Index v : {pc.x, pc.y})
        if (!L.var.count({k, v})) {
          L.var[{k, v}] = static_cast<Index>(L.slots.size());
          L.slots.push_back({k, v});
        }
    }
  return L;
}

std::vector<convex::Inequality> joint_rows(const JointLayout& L) {
  std::vector<convex::Inequality> rows;
  for (const auto& [k, pc] : L.pairs)
    rows.push_back(convex::Inequality::pair(L.var.at({k, pc.x}), 1.0, L.var.at({k, pc.y}), 1.0,
                                            pc.c / L.c_max));
  for (std::size_t i = 0; i < L.slots.size(); ++i)
    rows.push_back(convex::Inequality::single(static_cast<Index>(i), 1.0, 0.0));
  return rows;
}

Vector<double> joint_start(const JointLayout& L, Index extra) {
  Vector<double> z0 = Vector<double>::Constant(static_cast<Index>(L.slots.size()) + extra, 0.5);
  for (const auto& [k, pc] : L.pairs) {
    z0(L.var.at({k, pc.x})) = std::max(z0(L.var.at({k, pc.x})), pc.c / L.c_max + 0.5);
    z0(L.var.at({k, pc.y})) = std::max(z0(L.var.at({k, pc.y})), pc.c / L.c_max + 0.5);
  }
  return z0;
}

void unpack(const JointLayout& L, const convex::BarrierResult& br, SequenceNorm& out) {
  for (std::size_t i = 0; i < L.slots.size(); ++i) {
    const auto [k, x] = L.slots[i];
    out.sequence.level(k)(x) = L.c_max * br.z(static_cast<Index>(i));
  }
  out.result.converged = br.converged;
  out.result.gap_bound = br.gap_bound;
  out.result.newton_steps = br.newton_steps;
  out.result.status = br.converged ? "optimal" : "not_converged";
}

}  // namespace

SequenceNorm besov_norm_joint(const MetricMeasureSpace& space, const Vector<double>& u, double s,
                              double p, double q) {
  require(p >= 1.0 && q >= 1.0 && std::isfinite(p) && std::isfinite(q),
          "joint Besov program needs finite p, q >= 1");
  const auto [k_min, k_max] = annulus_range(space);
  SequenceNorm out;
  out.sequence = zero_sequence(space.size(), k_min, k_max, s);
  const auto L = joint_layout(space, u, s);
  if (L.slots.empty()) return out;
  std::map<Index, convex::NestedPowerObjective::Group> by_level;
  for (std::size_t i = 0; i < L.slots.size(); ++i) {
    const auto [k, x] = L.slots[i];
    auto& grp = by_level[k];
    grp.vars.push_back(static_cast<Index>(i));
    grp.coefs.push_back(space.weight(x));
  }
  std::vector<convex::NestedPowerObjective::Group> groups;
  for (auto& [k, grp] : by_level) groups.push_back(std::move(grp));
  const convex::NestedPowerObjective f(std::move(groups), p, q / p);
  unpack(L, convex::minimize(f, joint_rows(L), joint_start(L, 0)), out);
  out.result.norm = mixed_norm(out.sequence, space.weights(), p, q, MixedNorm::LqLp);
  return out;
}

SequenceNorm triebel_lizorkin_norm(const MetricMeasureSpace& space, const Vector<double>& u,
                                   double s, double p, double q) {
  require(p > 0.0 && q > 0.0, "p and q must be positive");
  require(std::isfinite(p), "Triebel-Lizorkin norm needs finite p");
  const auto [k_min, k_max] = annulus_range(space);
  SequenceNorm out;
  out.sequence = zero_sequence(space.size(), k_min, k_max, s);

  if (std::min(p, q) < 1.0) {
    out.sequence = canonical_fractional_gradient(space, u, s);
    for (const auto& [k, pairs] : pairs_by_level(space, u, s)) {
      auto col = out.sequence.level(k);
      std::vector<double> g(col.data(), col.data() + col.size());
      tighten(g, pairs, space.size());
      for (Index x = 0; x < space.size(); ++x) col(x) = g[static_cast<std::size_t>(x)];
    }
    out.result.norm = mixed_norm(out.sequence, space.weights(), p, q, MixedNorm::LpLq);
    out.result.exact = false;
    out.result.status = "nonconvex_upper_bound";
    return out;
  }

  const auto L = joint_layout(space, u, s);
  if (L.slots.empty()) return out;
  auto rows = joint_rows(L);
  const auto nv = static_cast<Index>(L.slots.size());

  if (std::isinf(q)) {
    // Envelope variables t_x >= g_k(x) for every level k.
    std::map<Index, Index> env;
    for (const auto& [k, x] : L.slots)
      if (!env.count(x)) env[x] = 0;
    Index next = nv;
    for (auto& [x, v] : env) v = next++;
    for (std::size_t i = 0; i < L.slots.size(); ++i)
      rows.push_back(convex::Inequality::pair(env.at(L.slots[i].second), 1.0,
                                              static_cast<Index>(i), -1.0, 0.0));
    Vector<double> z0 = joint_start(L, static_cast<Index>(env.size()));
    for (const auto& [x, v] : env) z0(v) = z0.head(nv).maxCoeff() + 1.0;
    convex::BarrierResult br;
    if (p == 1.0) {
      Vector<double> c = Vector<double>::Zero(z0.size());
      for (const auto& [x, v] : env) c(v) = space.weight(x);
      br = convex::minimize(convex::LinearObjective(c), rows, z0);
    } else {
      std::vector<convex::NestedPowerObjective::Group> groups;
      for (const auto& [x, v] : env) groups.push_back({1.0, {v}, {space.weight(x)}});
      br = convex::minimize(convex::NestedPowerObjective(std::move(groups), p, 1.0), rows, z0);
    }
    unpack(L, br, out);
  } else {
    std::map<Index, convex::NestedPowerObjective::Group> by_point;
    for (std::size_t i = 0; i < L.slots.size(); ++i) {
      const Index x = L.slots[i].second;
      auto& grp = by_point[x];
      grp.weight = space.weight(x);
      grp.vars.push_back(static_cast<Index>(i));
      grp.coefs.push_back(1.0);
    }
    std::vector<convex::NestedPowerObjective::Group> groups;
    for (auto& [x, grp] : by_point) groups.push_back(std::move(grp));
    const convex::NestedPowerObjective f(std::move(groups), q, p / q);
    unpack(L, convex::minimize(f, rows, joint_start(L, 0)), out);
  }
  out.result.norm = mixed_norm(out.sequence, space.weights(), p, q, MixedNorm::LpLq);
  return out;
}

}  // namespace fracmax
