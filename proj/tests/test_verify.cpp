#include "fracmax/corpus.hpp"
#include "fracmax/verify.hpp"
#include "oracles/brute.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace fracmax;
using namespace fracmax::test;

TEST_CASE("poincare on two points") {
  const auto tp = two_point();
  const auto r = check_poincare(tp, vec({0, 1}), vec({0.5, 0.5}), 1.0, 1.0, {1.0});
  CHECK(r.best_constant == doctest::Approx(1.0));
  CHECK(r.pass);
  CHECK(poincare_ratio(tp, vec({0, 1}), vec({0.5, 0.5}), 1.0, 1.0, r.witness.x, r.witness.r) ==
        r.best_constant);
  CHECK(check_poincare(tp, vec({2, 2}), vec({0, 0}), 1.0, 1.0).best_constant == 0.0);
  const auto fail = check_poincare(tp, vec({0, 1}), vec({0, 0}), 1.0, 1.0);
  CHECK_FALSE(fail.pass);
  CHECK(std::isinf(fail.best_constant));
}

TEST_CASE("sobolev exponent") {
  CHECK(sobolev_exponent(2.0, 1.0, 1.0) == 2.0);
  CHECK(sobolev_exponent(3.0, 0.5, 2.0) == doctest::Approx(3.0));
  CHECK_THROWS_AS(sobolev_exponent(1.0, 1.0, 1.0), ValidationError);
  CHECK_THROWS_AS(check_sobolev_poincare(path_space(4), vec({0, 1, 2, 3}), Vector<double>::Ones(4), 1.0,
                                         1.0, 1.0),
                  ValidationError);
}

TEST_CASE("inf deviation matches a bracketing scan") {
  const std::vector<double> v{0.0, 1.0, 4.0}, w{1.0, 2.0, 0.5};
  for (double e : {1.0, 1.5, 2.0, 3.0}) {
    double best = kInfinity;
    for (int i = 0; i <= 40000; ++i) {
      const double c = -1.0 + 6.0 * i / 40000.0;
      double acc = 0.0;
      for (int j = 0; j < 3; ++j) acc += w[j] * std::pow(std::abs(v[j] - c), e);
      best = std::min(best, std::pow(acc / 3.5, 1.0 / e));
    }
    const double got = inf_deviation(v, w, e);
    CHECK(got <= best + 1e-12);
    CHECK(best - got <= 1e-4);
  }
  CHECK(inf_deviation({2.0, 2.0}, {1.0, 3.0}, 2.0) == 0.0);
}

TEST_CASE("sobolev poincare on two points") {
  const auto tp = two_point(1.0, 1.0, 1.0);
  const double Q = 3.0;
  const auto r = check_sobolev_poincare(tp, vec({0, 1}), vec({0.5, 0.5}), 1.0, 1.0, Q, {1.0});
  const double ps = sobolev_exponent(Q, 1.0, 1.0);
  CHECK(r.best_constant == doctest::Approx(inf_deviation({0, 1}, {1, 1}, ps) / 0.5).epsilon(1e-9));
  CHECK(r.best_constant == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(check_sobolev_poincare(tp, vec({1, 1}), vec({0, 0}), 1.0, 1.0, Q).best_constant == 0.0);
}

TEST_CASE("fractional poincare") {
  const auto tp = two_point();
  auto seq = canonical_fractional_gradient(tp, vec({0, 1}), 0.5);
  const auto r = check_fractional_poincare(tp, vec({0, 1}), seq, 0.5, 1.0, 0.2, 0.3);
  // k = -1 is the only level: closed B(x, 2) is everything, g_{-1} = (1, 1).
  const double rhs = std::pow(2.0, 0.3) * std::pow(2.0, 0.5 - 0.3);
  CHECK(r.best_constant == doctest::Approx(0.5 / rhs));
  CHECK(r.truncation_delta == 0.0);
  CHECK(fractional_poincare_ratio(tp, vec({0, 1}), seq, 0.5, 1.0, 0.3, r.witness.x, r.witness.k) ==
        r.best_constant);
  const auto zero = canonical_fractional_gradient(tp, vec({3, 3}), 0.5);
  CHECK(check_fractional_poincare(tp, vec({3, 3}), zero, 0.5, 1.0, 0.2, 0.3).best_constant == 0.0);
  CHECK_THROWS_AS(check_fractional_poincare(tp, vec({0, 1}), seq, 0.5, 1.0, 0.4, 0.3), ValidationError);

  const auto s = path_space(16);
  const auto u = generate_function(s, {"holder_bump", 1.0, 1.0, -1, 0.5, 0.3, 0.5, 0, ""});
  const auto g = canonical_fractional_gradient(s, u, 0.5);
  const auto fp = check_fractional_poincare(s, u, g, 0.5, 1.0, 0.2, 0.3);
  CHECK(std::isfinite(fp.best_constant));
  CHECK(fp.truncation_delta <= 0.01);
  const auto fs = check_fractional_sobolev_poincare(s, u, g, 0.5, 1.0, 0.2, 0.3, 1.0);
  CHECK(std::isfinite(fs.best_constant));
}

TEST_CASE("transfer on two points by hand") {
  const auto tp = two_point();
  const auto u = vec({0, 1});
  TransferParams params;
  params.s = 1.0;
  params.alpha = 0.0;
  params.t = 1.0;
  params.Q = 1.0;
  const auto g = canonical_gradient(tp, u, 1.0).g;
  const auto res = thm33_transfer(tp, u, g, params);
  // One scale r = 1, both points are centers, every 3-ball is the whole space.
  CHECK(res.maximal.isApprox(vec({0.5, 0.5})));
  CHECK(res.maximal.isApprox(oracle::convolution(tp, u, 1.0, 0.0)));
  CHECK(res.h.isApprox(vec({1, 1})));
  CHECK(res.report.best_constant == 0.0);
  CHECK(res.report.pass);

  const auto two = two_point(1.0, 1.0, 3.0);
  const auto r2 = thm33_transfer(two, u, canonical_gradient(two, u, 1.0).g, params);
  CHECK(std::isfinite(r2.report.best_constant));
}

TEST_CASE("transfer constants") {
  const auto s = path_space(12);
  const auto u = generate_function(s, {"holder_bump", 1.0, 1.0, -1, 0.4, 0.3, 0.5, 0, ""});
  for (auto [sv, a] : std::vector<std::pair<double, double>>{{0.5, 0.3}, {1.0, 0.0}, {0.8, 0.5}}) {
    TransferParams params;
    params.s = sv;
    params.alpha = a;
    params.Q = 1.0;
    params.t = 1.0 / (1.0 + sv);
    const auto g = canonical_gradient(s, u, sv).g;
    const auto res = thm33_transfer(s, u, g, params);
    CHECK(std::isfinite(res.report.best_constant));
    const double beta = sv + a <= 1.0 ? sv + a : 1.0;
    CHECK(is_hajlasz_gradient(s, res.maximal, res.g_tilde, beta, 1e-10).ok);
    const auto scaled = thm33_transfer(s, Vector<double>(10.0 * u), 10.0 * g, params);
    CHECK(scaled.report.best_constant == doctest::Approx(res.report.best_constant).epsilon(1e-10));
    const auto [x, y] = std::pair{res.report.witness.x, res.report.witness.y};
    if (res.report.best_constant > 0.0) {
      const double replay = std::abs(res.maximal(x) - res.maximal(y)) /
                            (std::pow(s.distance(x, y), beta) * (res.h(x) + res.h(y)));
      CHECK(replay == doctest::Approx(res.report.best_constant).epsilon(1e-10));
    }
  }
  TransferParams bad;
  bad.s = 0.5;
  bad.alpha = 0.3;
  bad.t = 0.1;
  CHECK_THROWS_AS(thm33_transfer(s, u, canonical_gradient(s, u, 0.5).g, bad), ValidationError);
}

TEST_CASE("gradient ratio") {
  const auto tp = two_point(2.0);
  const auto gr = best_gradient_constant(tp, vec({0, 3}), vec({1, 0.5}), 1.0);
  CHECK(gr.constant == doctest::Approx(1.0));
  CHECK(std::isinf(best_gradient_constant(tp, vec({0, 3}), vec({0, 0}), 1.0).constant));
  CHECK(best_gradient_constant(tp, vec({3, 3}), vec({0, 0}), 1.0).constant == 0.0);
}

TEST_CASE("sequence parameter defaults") {
  const auto p = tl_default_params(2.0, 0.5, 0.3, 2.0, 1.5);
  CHECK(p.delta == doctest::Approx(0.1));
  // r = 1.5: s + (Q - Q r) / r = 0.5 - 2/3 < s
  CHECK(p.eps == doctest::Approx(0.25));
  CHECK(p.eps_prime == doctest::Approx(0.375));
  CHECK(p.t == doctest::Approx(2.0 / 2.25));
  const auto b = besov_default_params(2.0, 0.5, 0.3, 0.8, 3.0);
  CHECK(b.eps == doctest::Approx(0.5 * (0.5 + (2.0 - 1.6) / 0.8)));
  CHECK(tl_default_params(2.0, 0.5, 0.3, 0.8, 3.0).eps == doctest::Approx(b.eps));
  CHECK_NOTHROW(validate_sequence_params(p));

  auto bad = p;
  bad.delta = 1.0;
  CHECK_THROWS_AS(validate_sequence_params(bad), ValidationError);
  bad = p;
  bad.eps_prime = 0.2;
  CHECK_THROWS_AS(validate_sequence_params(bad), ValidationError);
  bad = p;
  bad.t = 0.5;
  CHECK_THROWS_AS(validate_sequence_params(bad), ValidationError);
  bad = p;
  bad.alpha = 0.6;
  CHECK_THROWS_AS(validate_sequence_params(bad), ValidationError);
}

TEST_CASE("sequence transfer") {
  const auto tp = two_point();
  auto params = tl_default_params(1.0, 0.5, 0.0, 2.0, 2.0);
  const auto zero = canonical_fractional_gradient(tp, vec({1, 1}), 0.5);
  const auto z = thm43_sequence_transfer(tp, vec({1, 1}), zero, params);
  CHECK(z.candidate.levels.isZero());
  CHECK(z.report.best_constant == 0.0);

  // one level: g~_{-1} = h_{-1} (both sums include j = k), so the candidate is 2 h.
  const auto seq = canonical_fractional_gradient(tp, vec({0, 1}), 0.5);
  const auto r = thm43_sequence_transfer(tp, vec({0, 1}), seq, params);
  CHECK(r.candidate.level(-1).isApprox(2.0 * vec({1, 1})));

  const auto s = path_space(16);
  const auto u = generate_function(s, {"holder_bump", 1.0, 1.0, -1, 0.5, 0.3, 0.5, 0, ""});
  params = tl_default_params(1.0, 0.5, 0.3, 2.0, 2.0);
  const auto g = canonical_fractional_gradient(s, u, 0.5);
  const auto res = thm43_sequence_transfer(s, u, g, params);
  CHECK(std::isfinite(res.report.best_constant));
  CHECK(res.report.truncation_delta <= 0.01);
  CHECK(is_fractional_gradient(s, res.maximal, res.g_tilde, 0.8, 1e-10).ok);
  params.delta = 1.0;
  CHECK_THROWS_AS(thm43_sequence_transfer(s, u, g, params), ValidationError);
}

TEST_CASE("boundedness instances") {
  const auto tp = two_point();
  auto params = default_bounds_params("thm46a");
  const auto row = boundedness_instance(tp, vec({0, 1}), "thm46a", params);
  CHECK_FALSE(row.skipped);
  CHECK(row.semantics == "exact");
  CHECK(std::isfinite(row.ratio));
  const auto skip = boundedness_instance(tp, vec({2, 2}), "thm46a", params);
  CHECK(skip.skipped);
  for (const auto& id : bounds_theorem_ids()) {
    const auto table = boundedness_experiment(build_corpus(builtin_corpus_spec("five_grid")), id,
                                              default_bounds_params(id));
    CHECK(std::isfinite(table.max_ratio));
  }
}

TEST_CASE("fefferman-stein") {
  const auto s = path_space(8);
  const auto zero = zero_sequence(8, 0, 2, 1.0);
  const auto z = fefferman_stein_check(s, zero, 2.0, 2.0);
  CHECK(z.best_constant == 0.0);
  auto one = random_sequence(8, 1, 5);
  const auto r = fefferman_stein_check(s, one, 2.0, 3.0);
  const auto radii = standard_radii(s, RadiusPolicy::distances());
  const Vector<double> g = one.levels.col(0);
  const auto m = oracle::standard_maximal(s, g, 0.0, radii);
  CHECK(r.best_constant == doctest::Approx(oracle::lp(m, s.weights(), 2.0) / oracle::lp(g, s.weights(), 2.0))
                               .epsilon(1e-12));
  const auto three = random_sequence(8, 3, 9);
  CHECK(three.level_count() == 3);
  CHECK(std::isfinite(fefferman_stein_check(s, three, 1.5, 3.0).best_constant));
  CHECK_THROWS_AS(fefferman_stein_check(s, three, 1.0, 2.0), ValidationError);
}
