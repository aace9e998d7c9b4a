#include "fracmax/convex.hpp"

#include <cmath>
#include <limits>

namespace fracmax::convex {

NestedPowerObjective::NestedPowerObjective(std::vector<Group> groups, double inner, double outer)
    : groups_(std::move(groups)), inner_(inner), outer_(outer) {
  require(inner_ >= 1.0 && inner_ * outer_ >= 1.0, "nested power objective is not convex");
  for (const auto& g : groups_) require(g.vars.size() == g.coefs.size(), "group size mismatch");
}

double NestedPowerObjective::value(const Vector<double>& z) const {
  double total = 0.0;
  for (const auto& g : groups_) {
    double s = 0.0;
    for (std::size_t m = 0; m < g.vars.size(); ++m) s += g.coefs[m] * std::pow(z(g.vars[m]), inner_);
    total += g.weight * std::pow(s, outer_);
  }
  return total;
}

Vector<double> NestedPowerObjective::gradient(const Vector<double>& z) const {
  Vector<double> grad = Vector<double>::Zero(z.size());
  for (const auto& g : groups_) {
    double s = 0.0;
    for (std::size_t m = 0; m < g.vars.size(); ++m) s += g.coefs[m] * std::pow(z(g.vars[m]), inner_);
    const double outer_d = outer_ == 1.0 ? 1.0 : outer_ * std::pow(s, outer_ - 1.0);
    for (std::size_t m = 0; m < g.vars.size(); ++m) {
      const Index i = g.vars[m];
      const double inner_d = inner_ == 1.0 ? g.coefs[m] : g.coefs[m] * inner_ * std::pow(z(i), inner_ - 1.0);
      grad(i) += g.weight * outer_d * inner_d;
    }
  }
  return grad;
}

void NestedPowerObjective::add_hessian(const Vector<double>& z, double scale,
                                       Matrix<double>& H) const {
  for (const auto& g : groups_) {
    const std::size_t len = g.vars.size();
    double s = 0.0;
    Vector<double> d1(static_cast<Index>(len));
    for (std::size_t m = 0; m < len; ++m) {
      const double zi = z(g.vars[m]);
      s += g.coefs[m] * std::pow(zi, inner_);
      d1(static_cast<Index>(m)) = g.coefs[m] * inner_ * std::pow(zi, inner_ - 1.0);
    }
    const double w = scale * g.weight;
    if (outer_ != 1.0) {
      const double c = w * outer_ * (outer_ - 1.0) * std::pow(s, outer_ - 2.0);
      for (std::size_t a = 0; a < len; ++a)
        for (std::size_t b = 0; b < len; ++b)
          H(g.vars[a], g.vars[b]) += c * d1(static_cast<Index>(a)) * d1(static_cast<Index>(b));
    }
    if (inner_ != 1.0) {
      const double outer_d = outer_ == 1.0 ? 1.0 : outer_ * std::pow(s, outer_ - 1.0);
      for (std::size_t m = 0; m < len; ++m) {
        const double zi = z(g.vars[m]);
        H(g.vars[m], g.vars[m]) +=
            w * outer_d * g.coefs[m] * inner_ * (inner_ - 1.0) * std::pow(zi, inner_ - 2.0);
      }
    }
  }
}

namespace {

Vector<double> slacks(const std::vector<Inequality>& rows, const Vector<double>& z) {
  Vector<double> s(static_cast<Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) s(static_cast<Index>(k)) = rows[k].slack(z);
  return s;
}

}  // namespace

BarrierResult minimize(const Objective& f, const std::vector<Inequality>& rows, Vector<double> z0,
                       const BarrierOptions& options) {
  const Index n = z0.size();
  const auto m = static_cast<double>(rows.size());
  Vector<double> s = slacks(rows, z0);
  if (rows.empty() || s.minCoeff() <= 0.0)
    throw SolverError("barrier method needs a strictly feasible starting point");

  BarrierResult res;
  Vector<double> z = std::move(z0);
  double fz = f.value(z);
  double t = m / std::max(std::abs(fz), 1e-12);

  Matrix<double> H(n, n);
  Vector<double> grad(n);
  Vector<double> dz(n);
  for (;;) {
    // Centering: Newton on t f(z) - sum log s_k.
    for (int inner = 0; inner < options.max_inner; ++inner) {
      grad = t * f.gradient(z);
      H.setZero();
      f.add_hessian(z, t, H);
      for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto& row = rows[k];
        const double inv = 1.0 / s(static_cast<Index>(k));
        const double inv2 = inv * inv;
        for (int a = 0; a < 2; ++a) {
          if (row.index[a] < 0) continue;
          grad(row.index[a]) -= row.coef[a] * inv;
          for (int b = 0; b < 2; ++b) {
            if (row.index[b] < 0) continue;
            H(row.index[a], row.index[b]) += row.coef[a] * row.coef[b] * inv2;
          }
        }
      }
      Eigen::LLT<Matrix<double>> llt(H);
      double jitter = 0.0;
      while (llt.info() != Eigen::Success) {
        jitter = jitter == 0.0 ? 1e-14 * H.diagonal().cwiseAbs().maxCoeff() : jitter * 100.0;
        llt.compute(H + jitter * Matrix<double>::Identity(n, n));
        if (jitter > 1e6 * H.diagonal().cwiseAbs().maxCoeff())
          throw SolverError("barrier Newton system is not positive definite");
      }
      dz = llt.solve(-grad);
      ++res.newton_steps;
      const double decrement = -grad.dot(dz);
      if (!(decrement > 2e-10)) break;

      double step_max = std::numeric_limits<double>::infinity();
      Vector<double> ds(static_cast<Index>(rows.size()));
      for (std::size_t k = 0; k < rows.size(); ++k) {
        const double d = rows[k].apply(dz);
        ds(static_cast<Index>(k)) = d;
        if (d < 0.0) step_max = std::min(step_max, -s(static_cast<Index>(k)) / d);
      }
      double step = std::min(1.0, 0.99 * step_max);
      bool accepted = false;
      while (step > 1e-16) {
        const Vector<double> z_new = z + step * dz;
        const Vector<double> s_new = s + step * ds;
        if (s_new.minCoeff() > 0.0) {
          const double f_new = f.value(z_new);
          const double change = t * (f_new - fz) - (s_new.array() / s.array()).log().sum();
          // In the quadratic region rounding can swamp the decrease; accept then.
          if (change <= -0.25 * step * decrement || decrement < 1e-7) {
            z = z_new;
            s = slacks(rows, z);
            fz = f_new;
            accepted = true;
            break;
          }
        }
        step *= 0.5;
      }
      if (!accepted || res.newton_steps >= options.max_newton) break;
    }
    res.gap_bound = m / t;
    if (res.gap_bound <= options.abs_gap + options.rel_gap * std::abs(fz)) {
      res.converged = true;
      break;
    }
    if (res.newton_steps >= options.max_newton) break;
    t *= options.t_growth;
  }
  res.z = std::move(z);
  res.objective = fz;
  return res;
}

}  // namespace fracmax::convex
