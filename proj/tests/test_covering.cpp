#include "fracmax/corpus.hpp"
#include "fracmax/covering.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace fracmax;
using namespace fracmax::test;

TEST_CASE("greedy net on the five-point path") {
  const auto s = path_space(5);
  const auto cover = build_cover(s, 1.5);
  CHECK(cover.centers == std::vector<Index>{0, 2, 4});
  CHECK(overlap_count(s, cover) == 3);
  const auto pou = build_partition_of_unity(s, cover);
  for (Index i = 0; i < 3; ++i) CHECK(pou.value(i, 2) == doctest::Approx(1.0 / 3.0));
  CHECK(audit_partition(s, cover, pou).ok);
}

TEST_CASE("single-center covers") {
  const auto tp = two_point();
  const auto cover = build_cover(tp, 2.0);
  CHECK(cover.centers == std::vector<Index>{0});
  CHECK(overlap_count(tp, cover) == 1);
  const auto pou = build_partition_of_unity(tp, cover);
  CHECK(pou.value(0, 0) == 1.0);
  CHECK(pou.value(0, 1) == 1.0);

  const auto s = path_space(7);
  CHECK(build_cover(s, s.diam() * 1.01).size() == 1);
}

TEST_CASE("symmetric point splits evenly between two centers") {
  const auto s = path_space(3);
  const auto cover = build_cover(s, 2.0);
  REQUIRE(cover.centers == std::vector<Index>{0, 2});
  const auto pou = build_partition_of_unity(s, cover);
  CHECK(pou.value(0, 1) == doctest::Approx(0.5));
  CHECK(pou.value(1, 1) == doctest::Approx(0.5));
}

TEST_CASE("overlap on a 20-point path with centers every other point") {
  const auto s = path_space(20);
  const auto cover = build_cover(s, 2.0);
  std::vector<Index> every_other;
  for (Index i = 0; i < 20; i += 2) every_other.push_back(i);
  REQUIRE(cover.centers == every_other);
  Index worst = 0;
  for (Index x = 0; x < 20; ++x) {
    Index count = 0;
    for (Index c : cover.centers) count += std::abs(static_cast<double>(x - c)) < 12.0;
    worst = std::max(worst, count);
  }
  CHECK(overlap_count(s, cover) == worst);
}

TEST_CASE("partition invariants across scales and spaces") {
  for (const auto& entry : build_corpus(builtin_corpus_spec("small")).entries) {
    const auto& s = entry.space;
    for (double r : radius_scale_set(s, RadiusPolicy::dyadic())) {
      const auto cover = build_cover(s, r);
      for (Index x = 0; x < s.size(); ++x) {
        bool covered = false;
        for (const auto& b : cover.ball_r) covered = covered || std::find(b.begin(), b.end(), x) != b.end();
        CHECK(covered);
      }
      for (std::size_t i = 0; i < cover.centers.size(); ++i)
        for (std::size_t j = i + 1; j < cover.centers.size(); ++j)
          CHECK(s.distance(cover.centers[i], cover.centers[j]) >= r);
      const auto pou = build_partition_of_unity(s, cover);
      const auto audit = audit_partition(s, cover, pou);
      CHECK(audit.ok);
      CHECK(audit.worst_sum_error <= 1e-12);
      CHECK(pou.nu * static_cast<double>(pou.overlap) >= 1.0 - 1e-12);
      CHECK(pou.lip <= 2.0);
      const auto dense = pou.dense(s.size());
      CHECK(dense.minCoeff() >= 0.0);
      CHECK(dense.maxCoeff() <= 1.0);
    }
  }
}

TEST_CASE("parallel partition matches the reference") {
  const auto s = generate_space({"random_cloud", 30, 2, 1, 3, 1.0, ""});
  const auto cover = build_cover(s, 0.2);
  const auto a = build_partition_of_unity(s, cover, Execution::Reference);
  const auto b = build_partition_of_unity(s, cover, Execution::Parallel);
  CHECK((a.dense(s.size()) - b.dense(s.size())).cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.lip == b.lip);
}
