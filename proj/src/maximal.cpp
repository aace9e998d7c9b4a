#include "fracmax/maximal.hpp"

#include <cmath>
#include <limits>

namespace fracmax {

ScaleFamily build_scale_family(const MetricMeasureSpace& space, std::vector<double> scales,
                               Execution mode) {
  require(!scales.empty(), "scale family needs at least one scale");
  for (std::size_t j = 0; j < scales.size(); ++j) {
    require(scales[j] > 0.0, "scales must be positive");
    if (j > 0) require(scales[j] > scales[j - 1], "scales must be strictly increasing");
  }
  ScaleFamily fam;
  fam.scales = std::move(scales);
  fam.covers.resize(fam.scales.size());
  fam.partitions.resize(fam.scales.size());
  parallel_for(
      fam.size(),
      [&](Index j) {
        const auto jj = static_cast<std::size_t>(j);
        fam.covers[jj] = build_cover(space, fam.scales[jj]);
        fam.partitions[jj] = build_partition_of_unity(space, fam.covers[jj]);
      },
      mode);
  return fam;
}

ScaleFamily build_scale_family(const MetricMeasureSpace& space, const RadiusPolicy& policy,
                               Execution mode) {
  auto scales = radius_scale_set(space, policy);
  if (scales.empty()) scales.push_back(1.0);  // single point: any scale gives the same cover
  return build_scale_family(space, std::move(scales), mode);
}

MaximalResult fractional_maximal(const MetricMeasureSpace& space, const Vector<double>& u,
                                 double alpha, const std::vector<double>& radii, Execution mode) {
  require(alpha >= 0.0, "alpha must be nonnegative");
  require(!radii.empty(), "empty radius set");
  require(u.size() == space.size(), "function size does not match the space");
  for (double r : radii) require(r > 0.0, "radii must be positive");
  const Index n = space.size();
  MaximalResult out;
  out.value = Vector<double>::Zero(n);
  out.argmax.assign(static_cast<std::size_t>(n), 0);
  parallel_for(
      n,
      [&](Index x) {
        // Walk radii in increasing order, extending the closed ball incrementally.
        std::vector<std::pair<double, Index>> by_dist(static_cast<std::size_t>(n));
        for (Index y = 0; y < n; ++y) by_dist[static_cast<std::size_t>(y)] = {space.distance(x, y), y};
        std::stable_sort(by_dist.begin(), by_dist.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        std::vector<std::size_t> order(radii.size());
        for (std::size_t j = 0; j < radii.size(); ++j) order[j] = j;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return radii[a] < radii[b]; });
        double mass = 0.0, integral = 0.0, best = -1.0;
        std::size_t pos = 0;
        Index arg = 0;
        for (std::size_t j : order) {
          const double r = radii[j];
          while (pos < by_dist.size() && by_dist[pos].first <= r) {
            const Index y = by_dist[pos].second;
            mass += space.weight(y);
            integral += std::abs(u(y)) * space.weight(y);
            ++pos;
          }
          const double v = std::pow(r, alpha) * (integral / mass);
          if (v > best || (v == best && static_cast<Index>(j) < arg)) {
            best = v;
            arg = static_cast<Index>(j);
          }
        }
        out.value(x) = best;
        out.argmax[static_cast<std::size_t>(x)] = arg;
      },
      mode);
  return out;
}

Vector<double> discrete_convolution(const MetricMeasureSpace& space, const Vector<double>& u,
                                    const Cover& cover, const PartitionOfUnity& pou,
                                    double alpha) {
  require(u.size() == space.size(), "function size does not match the space");
  Vector<double> ball_means(cover.size());
  for (Index i = 0; i < cover.size(); ++i)
    ball_means(i) = average(space, u, cover.ball_3r[static_cast<std::size_t>(i)]);
  Vector<double> out = Vector<double>::Zero(space.size());
  for (std::size_t i = 0; i < pou.phi.size(); ++i)
    for (const auto& e : pou.phi[i]) out(e.point) += e.value * ball_means(static_cast<Index>(i));
  return std::pow(cover.r, alpha) * out;
}

MaximalResult discrete_fractional_maximal(const MetricMeasureSpace& space,
                                          const Vector<double>& u, double alpha,
                                          const ScaleFamily& family, Execution mode) {
  require(alpha >= 0.0, "alpha must be nonnegative");
  require(family.size() > 0, "empty scale family");
  const Vector<double> abs_u = u.cwiseAbs();
  std::vector<Vector<double>> per_scale(static_cast<std::size_t>(family.size()));
  parallel_for(
      family.size(),
      [&](Index j) {
        const auto jj = static_cast<std::size_t>(j);
        per_scale[jj] =
            discrete_convolution(space, abs_u, family.covers[jj], family.partitions[jj], alpha);
      },
      mode);
  MaximalResult out;
  out.value = per_scale.front();
  out.argmax.assign(static_cast<std::size_t>(space.size()), 0);
  for (std::size_t j = 1; j < per_scale.size(); ++j) {
    for (Index x = 0; x < space.size(); ++x) {
      if (per_scale[j](x) > out.value(x)) {
        out.value(x) = per_scale[j](x);
        out.argmax[static_cast<std::size_t>(x)] = static_cast<Index>(j);
      }
    }
  }
  return out;
}

ComparabilityReport comparability_report(const MetricMeasureSpace& space, const Vector<double>& u,
                                         double alpha, const std::vector<double>& radii,
                                         const ScaleFamily& family, Execution mode) {
  ComparabilityReport rep;
  const auto standard = fractional_maximal(space, u, alpha, radii, mode);
  const auto discrete = discrete_fractional_maximal(space, u, alpha, family, mode);
  rep.c_low = std::numeric_limits<double>::infinity();
  rep.c_high = 0.0;
  for (Index x = 0; x < space.size(); ++x) {
    if (!(standard.value(x) > 0.0)) continue;
    rep.defined = true;
    const double ratio = discrete.value(x) / standard.value(x);
    if (ratio < rep.c_low) {
      rep.c_low = ratio;
      rep.x_low = x;
    }
    if (ratio > rep.c_high) {
      rep.c_high = ratio;
      rep.x_high = x;
    }
  }
  if (!rep.defined) rep.c_low = 0.0;
  return rep;
}

}  // namespace fracmax
