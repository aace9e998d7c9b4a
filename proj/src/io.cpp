#include "fracmax/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace fracmax::io {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << content;
  if (!out) throw IoError("write failed for '" + path + "'");
}

Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(source + ": " + e.what());
  }
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

Json number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

double to_double(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return kInfinity;
    if (s == "-inf") return -kInfinity;
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw ParseError("expected a number, got " + j.dump());
}

namespace {

template <typename Fn>
auto guarded(const std::string& what, Fn&& fn) {
  try {
    return fn();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(what + ": " + e.what());
  }
}

Matrix<double> matrix_from(const Json& rows, Index n_rows) {
  if (!rows.is_array() || static_cast<Index>(rows.size()) != n_rows)
    throw ParseError("matrix row count does not match points");
  const Index n_cols = n_rows > 0 ? static_cast<Index>(rows.at(0).size()) : 0;
  Matrix<double> m(n_rows, n_cols);
  for (Index i = 0; i < n_rows; ++i) {
    const auto& row = rows.at(static_cast<std::size_t>(i));
    if (!row.is_array() || static_cast<Index>(row.size()) != n_cols)
      throw ParseError("ragged matrix row " + std::to_string(i));
    for (Index j = 0; j < n_cols; ++j) m(i, j) = to_double(row.at(static_cast<std::size_t>(j)));
  }
  return m;
}

Json matrix_to(const Matrix<double>& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(number(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

MetricMeasureSpace space_from_json(const Json& j) {
  return guarded("space", [&] {
    if (!j.is_object()) throw ParseError("space must be a JSON object");
    const auto ids = j.at("points").get<std::vector<std::int64_t>>();
    const Index n = static_cast<Index>(ids.size());
    const auto w = j.at("weights").get<std::vector<double>>();
    if (static_cast<Index>(w.size()) != n) throw ParseError("weights and points differ in length");
    Vector<double> weights = Eigen::Map<const Vector<double>>(w.data(), n);
    const auto metric = j.value("metric", std::string(j.contains("dist") ? "matrix" : "euclidean"));
    if (metric == "matrix") {
      return MetricMeasureSpace::from_matrix(matrix_from(j.at("dist"), n), weights, ids);
    }
    if (metric == "euclidean") {
      return MetricMeasureSpace::from_coordinates(matrix_from(j.at("coords"), n), weights, ids);
    }
    throw ParseError("unknown metric '" + metric + "'");
  });
}

Json space_to_json(const MetricMeasureSpace& space) {
  Json j;
  j["points"] = space.ids();
  if (space.has_coordinates()) {
    j["metric"] = "euclidean";
    j["coords"] = matrix_to(space.coordinates());
  } else {
    j["metric"] = "matrix";
    j["dist"] = matrix_to(space.distance_matrix());
  }
  Json w = Json::array();
  for (Index i = 0; i < space.size(); ++i) w.push_back(number(space.weight(i)));
  j["weights"] = std::move(w);
  return j;
}

MetricMeasureSpace load_space(const std::string& path) {
  return space_from_json(parse_json(read_file(path), path));
}

void save_space(const MetricMeasureSpace& space, const std::string& path) {
  write_file(path, space_to_json(space).dump(1) + "\n");
}

Vector<double> function_from_csv(const MetricMeasureSpace& space, const std::string& text,
                                 const std::string& source) {
  std::map<std::int64_t, Index> index;
  for (Index i = 0; i < space.size(); ++i) index[space.ids()[static_cast<std::size_t>(i)]] = i;
  Vector<double> u(space.size());
  std::vector<bool> seen(static_cast<std::size_t>(space.size()), false);
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && !line.empty() && !std::isdigit(static_cast<unsigned char>(line[0])) &&
        line[0] != '-')
      continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw ParseError(source + ":" + std::to_string(line_no) + ": expected point,value");
    std::int64_t id = 0;
    double value = 0.0;
    const char* b = line.data();
    auto r1 = std::from_chars(b, b + comma, id);
    auto r2 = std::from_chars(b + comma + 1, b + line.size(), value);
    if (r1.ec != std::errc() || r1.ptr != b + comma || r2.ec != std::errc() ||
        r2.ptr != b + line.size())
      throw ParseError(source + ":" + std::to_string(line_no) + ": malformed row '" + line + "'");
    auto it = index.find(id);
    if (it == index.end())
      throw ParseError(source + ":" + std::to_string(line_no) + ": unknown point " +
                       std::to_string(id));
    if (seen[static_cast<std::size_t>(it->second)])
      throw ParseError(source + ": point " + std::to_string(id) + " listed twice");
    if (!std::isfinite(value))
      throw ParseError(source + ": non-finite value for point " + std::to_string(id));
    seen[static_cast<std::size_t>(it->second)] = true;
    u(it->second) = value;
  }
  for (Index i = 0; i < space.size(); ++i)
    if (!seen[static_cast<std::size_t>(i)])
      throw ParseError(source + ": no value for point " +
                       std::to_string(space.ids()[static_cast<std::size_t>(i)]));
  return u;
}

Vector<double> load_function(const MetricMeasureSpace& space, const std::string& path) {
  return function_from_csv(space, read_file(path), path);
}

std::string function_to_csv(const MetricMeasureSpace& space, const Vector<double>& u,
                            const std::string& column) {
  std::string out = "point," + column + "\n";
  for (Index i = 0; i < space.size(); ++i)
    out += std::to_string(space.ids()[static_cast<std::size_t>(i)]) + "," + format_double(u(i)) +
           "\n";
  return out;
}

CorpusSpec corpus_spec_from_json(const Json& j) {
  return guarded("corpus spec", [&] {
    CorpusSpec spec;
    spec.seed = j.value("seed", std::uint64_t{0});
    for (const auto& s : j.at("spaces")) {
      SpaceSpec ss;
      ss.kind = s.at("kind").get<std::string>();
      ss.n = s.value("n", ss.n);
      ss.dims = s.value("dims", ss.dims);
      ss.level = s.value("level", ss.level);
      ss.seed = s.value("seed", ss.seed);
      ss.density = s.value("density", ss.density);
      ss.id = s.value("id", ss.id);
      spec.spaces.push_back(ss);
    }
    for (const auto& f : j.at("functions")) {
      FunctionSpec fs;
      fs.kind = f.at("kind").get<std::string>();
      fs.value = f.value("value", fs.value);
      fs.slope = f.value("slope", fs.slope);
      fs.center = f.value("center", fs.center);
      fs.center_frac = f.value("center_frac", fs.center_frac);
      fs.radius_frac = f.value("radius_frac", fs.radius_frac);
      fs.exponent = f.value("exponent", fs.exponent);
      fs.seed = f.value("seed", fs.seed);
      fs.id = f.value("id", fs.id);
      spec.functions.push_back(fs);
    }
    return spec;
  });
}

Json corpus_spec_to_json(const CorpusSpec& spec) {
  Json j;
  j["seed"] = spec.seed;
  j["spaces"] = Json::array();
  for (const auto& s : spec.spaces)
    j["spaces"].push_back({{"kind", s.kind},
                           {"n", s.n},
                           {"dims", s.dims},
                           {"level", s.level},
                           {"seed", s.seed},
                           {"density", s.density},
                           {"id", space_id(s)}});
  j["functions"] = Json::array();
  for (const auto& f : spec.functions)
    j["functions"].push_back({{"kind", f.kind},
                              {"value", f.value},
                              {"slope", f.slope},
                              {"center", f.center},
                              {"center_frac", f.center_frac},
                              {"radius_frac", f.radius_frac},
                              {"exponent", f.exponent},
                              {"seed", f.seed},
                              {"id", function_id(f)}});
  return j;
}

CorpusSpec resolve_corpus_spec(const std::string& name_or_path) {
  if (is_builtin_corpus(name_or_path)) return builtin_corpus_spec(name_or_path);
  return corpus_spec_from_json(parse_json(read_file(name_or_path), name_or_path));
}

std::string partition_to_csv(const MetricMeasureSpace& space, const Cover& cover,
                             const PartitionOfUnity& pou) {
  std::string out = "center_id,point_id,phi\n";
  const auto& ids = space.ids();
  for (Index i = 0; i < cover.size(); ++i) {
    const auto center = ids[static_cast<std::size_t>(cover.centers[static_cast<std::size_t>(i)])];
    for (const auto& e : pou.phi[static_cast<std::size_t>(i)])
      out += std::to_string(center) + "," + std::to_string(ids[static_cast<std::size_t>(e.point)]) +
             "," + format_double(e.value) + "\n";
  }
  return out;
}

Json report_to_json(const VerificationReport& rep) {
  Json j;
  j["id"] = rep.id;
  j["space"] = rep.space_id;
  j["function"] = rep.function_id;
  Json params = Json::object();
  for (const auto& [k, v] : rep.params) params[k] = number(v);
  j["params"] = std::move(params);
  j["best_constant"] = number(rep.best_constant);
  Json w = Json::object();
  if (rep.witness.x >= 0) w["x"] = rep.witness.x;
  if (rep.witness.y >= 0) w["y"] = rep.witness.y;
  if (rep.witness.r > 0.0) w["r"] = number(rep.witness.r);
  if (rep.witness.k != 0 || rep.truncation_delta >= 0.0) w["k"] = rep.witness.k;
  j["witness"] = std::move(w);
  j["pass"] = rep.pass;
  if (rep.truncation_delta >= 0.0) j["truncation_delta"] = number(rep.truncation_delta);
  j["notes"] = rep.notes;
  return j;
}

Json bounds_to_json(const BoundsTable& table) {
  Json j;
  j["theorem"] = table.theorem_id;
  j["params"] = {{"s", table.params.s},
                 {"alpha", table.params.alpha},
                 {"p", table.params.p},
                 {"q", table.params.q}};
  j["max_ratio"] = number(table.max_ratio);
  j["max_space"] = table.max_space;
  j["max_function"] = table.max_function;
  Json rows = Json::array();
  for (const auto& r : table.rows) {
    Json row = {{"space", r.space_id}, {"function", r.function_id}};
    if (r.skipped) {
      row["skipped"] = true;
      row["note"] = r.note;
    } else {
      row["source"] = number(r.source);
      row["target"] = number(r.target);
      row["ratio"] = number(r.ratio);
      row["semantics"] = r.semantics;
    }
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j;
}

Json norm_result_to_json(const NormResult& r) {
  return {{"norm", number(r.norm)},
          {"exact", r.exact},
          {"converged", r.converged},
          {"gap_bound", number(r.gap_bound)},
          {"newton_steps", r.newton_steps},
          {"status", r.status}};
}

Json sequence_to_json(const GradientSequence& seq) {
  Json j;
  j["k_min"] = seq.k_min;
  j["k_max"] = seq.k_max;
  j["s"] = seq.s;
  Json levels = Json::array();
  for (Index k = seq.k_min; k <= seq.k_max; ++k) {
    Json col = Json::array();
    const auto g = seq.level(k);
    for (Index x = 0; x < g.size(); ++x) col.push_back(number(g(x)));
    levels.push_back(std::move(col));
  }
  j["levels"] = std::move(levels);
  return j;
}

}  // namespace fracmax::io
