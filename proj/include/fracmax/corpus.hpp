#pragma once

#include "fracmax/metric_space.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fracmax {

/// Space generator parameters. Graph spaces (grid, path, sierpinski,
/// two_point) use shortest-path distance with unit edges; random_cloud uses
/// the Euclidean metric on [0,1)^dims.
struct SpaceSpec {
  std::string kind = "path";
  Index n = 5;
  Index dims = 1;
  Index level = 1;
  std::uint64_t seed = 0;
  double density = 1.0;  // every point gets this weight
  std::string id;        // defaults to a name built from the parameters
};

/// Function generator parameters. `center` < 0 selects the point nearest
/// to center_frac * (n - 1) in index order.
struct FunctionSpec {
  std::string kind = "linear";
  double value = 1.0;
  double slope = 1.0;
  Index center = -1;
  double center_frac = 0.5;
  double radius_frac = 0.25;  // radius as a fraction of diam
  double exponent = 1.0;
  std::uint64_t seed = 0;
  std::string id;
};

struct CorpusSpec {
  std::uint64_t seed = 0;
  std::vector<SpaceSpec> spaces;
  std::vector<FunctionSpec> functions;  // applied to every space
};

struct CorpusEntry {
  std::string id;
  MetricMeasureSpace space;
  std::vector<std::string> function_ids;
  std::vector<Vector<double>> functions;
};

struct Corpus {
  std::vector<CorpusEntry> entries;
};

MetricMeasureSpace generate_space(const SpaceSpec& spec);
Vector<double> generate_function(const MetricMeasureSpace& space, const FunctionSpec& spec,
                                 std::uint64_t corpus_seed = 0);

std::string space_id(const SpaceSpec& spec);
std::string function_id(const FunctionSpec& spec);

Corpus build_corpus(const CorpusSpec& spec);

/// Named corpora: two_point, five_grid, small, standard, refine32, refine64.
CorpusSpec builtin_corpus_spec(const std::string& name);
bool is_builtin_corpus(const std::string& name);

/// Shortest-path metric of an unweighted graph given by its edge list.
MetricMeasureSpace graph_space(Index n_vertices, const std::vector<std::pair<Index, Index>>& edges,
                               double density = 1.0);

/// FNV-1a over every distance, weight and function value.
std::uint64_t corpus_hash(const Corpus& corpus);

/// Uniform double in [0, 1) from a splitmix64 stream; platform independent.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
  std::uint64_t state_;
};

}  // namespace fracmax
