#include "fracmax/convex.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace fracmax;
using namespace fracmax::convex;
using fracmax::test::vec;

TEST_CASE("linear program on a triangle") {
  // min x + 2y  s.t.  x + y >= 1, x >= 0, y >= 0  ->  (1, 0), value 1.
  LinearObjective f(vec({1, 2}));
  std::vector<Inequality> rows = {Inequality::pair(0, 1, 1, 1, 1), Inequality::single(0, 1, 0),
                                  Inequality::single(1, 1, 0)};
  const auto res = minimize(f, rows, vec({1, 1}));
  CHECK(res.converged);
  CHECK(res.objective == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(res.z(0) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(res.gap_bound <= 1e-9);
}

TEST_CASE("separable power objective") {
  // min z0^2 + z1^2  s.t. z0 + z1 >= 2  ->  (1, 1), value 2.
  NestedPowerObjective f({{1.0, {0}, {1.0}}, {1.0, {1}, {1.0}}}, 2.0, 1.0);
  std::vector<Inequality> rows = {Inequality::pair(0, 1, 1, 1, 2), Inequality::single(0, 1, 0),
                                  Inequality::single(1, 1, 0)};
  const auto res = minimize(f, rows, vec({2, 2}));
  CHECK(res.converged);
  CHECK(res.objective == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(res.z(0) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("nested objective value and derivatives") {
  NestedPowerObjective f({{2.0, {0, 1}, {1.0, 3.0}}, {1.0, {2}, {1.0}}}, 2.0, 0.75);
  const auto z = vec({0.7, 1.3, 0.4});
  const double inner = 0.49 + 3.0 * 1.69;
  CHECK(f.value(z) == doctest::Approx(2.0 * std::pow(inner, 0.75) + std::pow(0.16, 0.75)));
  const auto g = f.gradient(z);
  const double h = 1e-6;
  Matrix<double> H = Matrix<double>::Zero(3, 3);
  f.add_hessian(z, 1.0, H);
  for (Index i = 0; i < 3; ++i) {
    Vector<double> zp = z, zm = z;
    zp(i) += h;
    zm(i) -= h;
    CHECK(g(i) == doctest::Approx((f.value(zp) - f.value(zm)) / (2 * h)).epsilon(1e-6));
    const Vector<double> col = (f.gradient(zp) - f.gradient(zm)) / (2 * h);
    for (Index j = 0; j < 3; ++j) CHECK(H(j, i) == doctest::Approx(col(j)).epsilon(1e-5));
  }
}

TEST_CASE("infeasible start is rejected") {
  LinearObjective f(vec({1, 1}));
  std::vector<Inequality> rows = {Inequality::pair(0, 1, 1, 1, 1)};
  CHECK_THROWS_AS(minimize(f, rows, vec({0.2, 0.2})), SolverError);
}
