#include "fracmax/corpus.hpp"

#include <cmath>
#include <cstring>
#include <deque>
#include <map>
#include <sstream>

namespace fracmax {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

void sierpinski_edges(std::map<std::pair<Index, Index>, Index>& vertex,
                      std::vector<std::pair<Index, Index>>& edges, Index a, Index b, Index size) {
  auto id = [&](Index i, Index j) {
    auto [it, inserted] = vertex.try_emplace({i, j}, static_cast<Index>(vertex.size()));
    return it->second;
  };
  if (size == 1) {
    const Index p = id(a, b), q = id(a + 1, b), r = id(a, b + 1);
    edges.push_back({p, q});
    edges.push_back({q, r});
    edges.push_back({p, r});
    return;
  }
  const Index h = size / 2;
  sierpinski_edges(vertex, edges, a, b, h);
  sierpinski_edges(vertex, edges, a + h, b, h);
  sierpinski_edges(vertex, edges, a, b + h, h);
}

Index resolve_center(const MetricMeasureSpace& space, const FunctionSpec& spec) {
  if (spec.center >= 0) {
    if (spec.center >= space.size()) throw ValidationError("function center out of range");
    return spec.center;
  }
  const double pos = spec.center_frac * static_cast<double>(space.size() - 1);
  return std::clamp<Index>(static_cast<Index>(std::lround(pos)), 0, space.size() - 1);
}

}  // namespace

MetricMeasureSpace graph_space(Index n_vertices, const std::vector<std::pair<Index, Index>>& edges,
                               double density) {
  std::vector<std::vector<Index>> adj(static_cast<std::size_t>(n_vertices));
  for (auto [a, b] : edges) {
    adj[static_cast<std::size_t>(a)].push_back(b);
    adj[static_cast<std::size_t>(b)].push_back(a);
  }
  Matrix<double> dist = Matrix<double>::Constant(n_vertices, n_vertices, -1.0);
  for (Index src = 0; src < n_vertices; ++src) {
    std::deque<Index> frontier{src};
    dist(src, src) = 0.0;
    while (!frontier.empty()) {
      const Index v = frontier.front();
      frontier.pop_front();
      for (Index w : adj[static_cast<std::size_t>(v)]) {
        if (dist(src, w) < 0.0) {
          dist(src, w) = dist(src, v) + 1.0;
          frontier.push_back(w);
        }
      }
    }
  }
  if ((dist.array() < 0.0).any()) throw ValidationError("graph is disconnected");
  return MetricMeasureSpace::from_matrix(std::move(dist),
                                         Vector<double>::Constant(n_vertices, density));
}

MetricMeasureSpace generate_space(const SpaceSpec& spec) {
  require(spec.density > 0.0, "density must be positive");
  if (spec.kind == "path" || (spec.kind == "grid" && spec.dims == 1)) {
    require(spec.n >= 1, "path needs at least one point");
    std::vector<std::pair<Index, Index>> edges;
    for (Index i = 0; i + 1 < spec.n; ++i) edges.push_back({i, i + 1});
    return graph_space(spec.n, edges, spec.density);
  }
  if (spec.kind == "grid") {
    require(spec.n >= 1 && spec.dims >= 1, "grid needs n >= 1 and dims >= 1");
    Index total = 1;
    for (Index d = 0; d < spec.dims; ++d) total *= spec.n;
    std::vector<std::pair<Index, Index>> edges;
    for (Index v = 0; v < total; ++v) {
      Index stride = 1;
      for (Index d = 0; d < spec.dims; ++d) {
        if ((v / stride) % spec.n + 1 < spec.n) edges.push_back({v, v + stride});
        stride *= spec.n;
      }
    }
    return graph_space(total, edges, spec.density);
  }
  if (spec.kind == "two_point") {
    return graph_space(2, {{0, 1}}, spec.density);
  }
  if (spec.kind == "sierpinski") {
    require(spec.level >= 0 && spec.level <= 7, "sierpinski level must be in [0, 7]");
    std::map<std::pair<Index, Index>, Index> vertex;
    std::vector<std::pair<Index, Index>> edges;
    sierpinski_edges(vertex, edges, 0, 0, Index{1} << spec.level);
    return graph_space(static_cast<Index>(vertex.size()), edges, spec.density);
  }
  if (spec.kind == "random_cloud") {
    require(spec.n >= 1 && spec.dims >= 1, "random cloud needs n >= 1 and dims >= 1");
    SplitMix64 rng(spec.seed);
    Matrix<double> coords(spec.n, spec.dims);
    for (Index i = 0; i < spec.n; ++i)
      for (Index d = 0; d < spec.dims; ++d) coords(i, d) = rng.uniform();
    return MetricMeasureSpace::from_coordinates(std::move(coords),
                                                Vector<double>::Constant(spec.n, spec.density));
  }
  throw ValidationError("unknown space kind '" + spec.kind + "'");
}

Vector<double> generate_function(const MetricMeasureSpace& space, const FunctionSpec& spec,
                                 std::uint64_t corpus_seed) {
  const Index n = space.size();
  Vector<double> u(n);
  if (spec.kind == "constant") {
    u.setConstant(spec.value);
  } else if (spec.kind == "linear") {
    const Index c = resolve_center(space, spec);
    for (Index x = 0; x < n; ++x) u(x) = spec.slope * space.distance(x, c);
  } else if (spec.kind == "indicator") {
    const Index c = resolve_center(space, spec);
    const double r = spec.radius_frac * space.diam();
    for (Index x = 0; x < n; ++x) u(x) = space.distance(x, c) <= r ? 1.0 : 0.0;
  } else if (spec.kind == "holder_bump") {
    require(spec.exponent > 0.0 && spec.exponent <= 1.0, "bump exponent must lie in (0, 1]");
    const Index c = resolve_center(space, spec);
    const double r = spec.radius_frac * space.diam();
    require(r > 0.0, "bump radius must be positive");
    for (Index x = 0; x < n; ++x)
      u(x) = std::max(0.0, 1.0 - std::pow(space.distance(x, c) / r, spec.exponent));
  } else if (spec.kind == "random") {
    SplitMix64 rng(spec.seed ^ (corpus_seed * 0x9e3779b97f4a7c15ULL));
    for (Index x = 0; x < n; ++x) u(x) = 2.0 * rng.uniform() - 1.0;
  } else {
    throw ValidationError("unknown function kind '" + spec.kind + "'");
  }
  return u;
}

std::string space_id(const SpaceSpec& spec) {
  if (!spec.id.empty()) return spec.id;
  if (spec.kind == "path") return "path" + std::to_string(spec.n);
  if (spec.kind == "grid") return "grid" + std::to_string(spec.n) + "d" + std::to_string(spec.dims);
  if (spec.kind == "sierpinski") return "sierpinski" + std::to_string(spec.level);
  if (spec.kind == "random_cloud")
    return "cloud" + std::to_string(spec.n) + "d" + std::to_string(spec.dims) + "s" +
           std::to_string(spec.seed);
  return spec.kind;
}

std::string function_id(const FunctionSpec& spec) {
  if (!spec.id.empty()) return spec.id;
  if (spec.kind == "constant") return "const" + fmt(spec.value);
  if (spec.kind == "random") return "random" + std::to_string(spec.seed);
  const std::string where =
      spec.center >= 0 ? "c" + std::to_string(spec.center) : "f" + fmt(spec.center_frac);
  if (spec.kind == "linear") return "linear" + fmt(spec.slope) + where;
  if (spec.kind == "indicator") return "indicator" + where + "r" + fmt(spec.radius_frac);
  if (spec.kind == "holder_bump")
    return "bump" + where + "r" + fmt(spec.radius_frac) + "e" + fmt(spec.exponent);
  return spec.kind;
}

Corpus build_corpus(const CorpusSpec& spec) {
  Corpus corpus;
  for (const auto& ss : spec.spaces) {
    CorpusEntry e{space_id(ss), generate_space(ss), {}, {}};
    for (const auto& fs : spec.functions) {
      e.function_ids.push_back(function_id(fs));
      e.functions.push_back(generate_function(e.space, fs, spec.seed));
    }
    corpus.entries.push_back(std::move(e));
  }
  return corpus;
}

namespace {

FunctionSpec fn(std::string kind) {
  FunctionSpec f;
  f.kind = std::move(kind);
  return f;
}

FunctionSpec bump(double center, double radius, double exponent) {
  FunctionSpec f = fn("holder_bump");
  f.center_frac = center;
  f.radius_frac = radius;
  f.exponent = exponent;
  return f;
}

/// Ten nonconstant functions spanning smooth, Hoelder, discontinuous and noisy profiles.
std::vector<FunctionSpec> standard_functions() {
  std::vector<FunctionSpec> out;
  FunctionSpec lin = fn("linear");
  lin.center_frac = 0.0;
  out.push_back(lin);
  FunctionSpec ind = fn("indicator");
  ind.center_frac = 0.5;
  ind.radius_frac = 0.2;
  out.push_back(ind);
  out.push_back(bump(0.5, 0.5, 0.5));
  out.push_back(bump(0.3, 0.3, 0.8));
  out.push_back(bump(0.7, 0.6, 1.0));
  out.push_back(bump(0.0, 1.0, 0.5));
  FunctionSpec r1 = fn("random");
  r1.seed = 1;
  out.push_back(r1);
  FunctionSpec r2 = fn("random");
  r2.seed = 2;
  out.push_back(r2);
  FunctionSpec ind2 = fn("indicator");
  ind2.center_frac = 0.2;
  ind2.radius_frac = 0.1;
  out.push_back(ind2);
  FunctionSpec lin2 = fn("linear");
  lin2.center_frac = 1.0;
  lin2.slope = -2.0;
  out.push_back(lin2);
  return out;
}

SpaceSpec space(std::string kind, Index n, Index dims = 1, Index level = 0,
                std::uint64_t seed = 0) {
  SpaceSpec s;
  s.kind = std::move(kind);
  s.n = n;
  s.dims = dims;
  s.level = level;
  s.seed = seed;
  return s;
}

}  // namespace

bool is_builtin_corpus(const std::string& name) {
  return name == "two_point" || name == "five_grid" || name == "small" || name == "standard" ||
         name == "refine32" || name == "refine64";
}

CorpusSpec builtin_corpus_spec(const std::string& name) {
  CorpusSpec spec;
  spec.seed = 7;
  if (name == "two_point") {
    spec.spaces = {space("two_point", 2)};
    FunctionSpec step = fn("linear");
    step.center_frac = 0.0;
    step.id = "step";
    spec.functions = {step};
  } else if (name == "five_grid") {
    spec.spaces = {space("path", 5)};
    FunctionSpec lin = fn("linear");
    lin.center_frac = 0.0;
    FunctionSpec ind = fn("indicator");
    ind.center = 2;
    ind.radius_frac = 0.1;
    spec.functions = {lin, ind, bump(0.5, 0.75, 0.5)};
  } else if (name == "small") {
    spec.spaces = {space("two_point", 2),   space("path", 5),
                   space("path", 8),        space("grid", 3, 2),
                   space("sierpinski", 0, 1, 1), space("random_cloud", 10, 2, 0, 7)};
    spec.functions = standard_functions();
    spec.functions.resize(6);
  } else if (name == "standard") {
    spec.spaces = {space("path", 32), space("grid", 6, 2), space("sierpinski", 0, 1, 3),
                   space("random_cloud", 40, 2, 0, 7)};
    spec.functions = standard_functions();
  } else if (name == "refine32" || name == "refine64") {
    spec.spaces = {space("path", name == "refine32" ? 32 : 64)};
    spec.functions = {bump(0.5, 0.5, 0.5), bump(0.3, 0.3, 0.8), bump(0.7, 0.6, 1.0)};
  } else {
    throw ValidationError("unknown corpus '" + name + "'");
  }
  return spec;
}

std::uint64_t corpus_hash(const Corpus& corpus) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&](double v) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &v, sizeof(double));
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& e : corpus.entries) {
    const Index n = e.space.size();
    for (Index i = 0; i < n; ++i) {
      feed(e.space.weight(i));
      for (Index j = 0; j < n; ++j) feed(e.space.distance(i, j));
    }
    for (const auto& u : e.functions)
      for (Index i = 0; i < u.size(); ++i) feed(u(i));
  }
  return h;
}

}  // namespace fracmax
