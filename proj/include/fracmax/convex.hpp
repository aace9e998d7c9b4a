#pragma once

#include "fracmax/types.hpp"

#include <array>
#include <vector>

namespace fracmax::convex {

/// Linear inequality a . z >= rhs with at most two nonzero coefficients,
/// which covers every constraint the gradient polytopes need.
struct Inequality {
  std::array<Index, 2> index{-1, -1};
  std::array<double, 2> coef{0.0, 0.0};
  double rhs = 0.0;

  static Inequality single(Index i, double a, double rhs) { return {{i, -1}, {a, 0.0}, rhs}; }
  static Inequality pair(Index i, double a, Index j, double b, double rhs) {
    return {{i, j}, {a, b}, rhs};
  }
  double slack(const Vector<double>& z) const {
    double v = coef[0] * z(index[0]);
    if (index[1] >= 0) v += coef[1] * z(index[1]);
    return v - rhs;
  }
  double apply(const Vector<double>& dz) const {
    double v = coef[0] * dz(index[0]);
    if (index[1] >= 0) v += coef[1] * dz(index[1]);
    return v;
  }
};

/// Smooth convex objective on the interior of the feasible set.
class Objective {
public:
  virtual ~Objective() = default;
  virtual double value(const Vector<double>& z) const = 0;
  virtual Vector<double> gradient(const Vector<double>& z) const = 0;
  /// H += scale * Hessian(z).
  virtual void add_hessian(const Vector<double>& z, double scale, Matrix<double>& H) const = 0;
};

/// sum_j W_j (sum_{i in G_j} a_i z_i^inner)^outer over disjoint groups G_j of
/// variables, with inner >= 1 and outer * inner >= 1 so the sum is convex on
/// z >= 0. Singleton groups give a separable weighted power sum; inner = 1,
/// outer = 1 is linear.
class NestedPowerObjective final : public Objective {
public:
  struct Group {
    double weight = 1.0;
    std::vector<Index> vars;
    std::vector<double> coefs;
  };

  NestedPowerObjective(std::vector<Group> groups, double inner, double outer);

  double value(const Vector<double>& z) const override;
  Vector<double> gradient(const Vector<double>& z) const override;
  void add_hessian(const Vector<double>& z, double scale, Matrix<double>& H) const override;

private:
  std::vector<Group> groups_;
  double inner_;
  double outer_;
};

/// c . z
class LinearObjective final : public Objective {
public:
  explicit LinearObjective(Vector<double> c) : c_(std::move(c)) {}
  double value(const Vector<double>& z) const override { return c_.dot(z); }
  Vector<double> gradient(const Vector<double>&) const override { return c_; }
  void add_hessian(const Vector<double>&, double, Matrix<double>&) const override {}

private:
  Vector<double> c_;
};

struct BarrierOptions {
  double rel_gap = 1e-11;
  double abs_gap = 1e-15;
  double t_growth = 20.0;
  int max_newton = 2000;
  int max_inner = 80;
};

struct BarrierResult {
  Vector<double> z;
  double objective = 0.0;
  double gap_bound = 0.0;  // m / t at the last centering: objective - optimum <= gap_bound
  int newton_steps = 0;
  bool converged = false;
};

/// Log-barrier interior point method: minimizes f subject to the
/// inequalities, starting from the strictly feasible z0. Every iterate stays
/// strictly feasible.
BarrierResult minimize(const Objective& f, const std::vector<Inequality>& rows,
                       Vector<double> z0, const BarrierOptions& options = {});

}  // namespace fracmax::convex
