#include "fracmax/corpus.hpp"
#include "fracmax/covering.hpp"
#include "fracmax/hajlasz.hpp"
#include "fracmax/io.hpp"
#include "fracmax/maximal.hpp"
#include "fracmax/metric_space.hpp"
#include "fracmax/suites.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>

using namespace fracmax;
using io::Json;

namespace {

enum Exit { kOk = 0, kInvariant = 1, kValidation = 2, kIo = 3, kParse = 4, kSolver = 5 };

struct Global {
  bool deterministic = false;
  std::optional<double> tol;
  Execution mode() const { return deterministic ? Execution::Reference : Execution::Parallel; }
};

double parse_exponent(const std::string& text, const std::string& name) {
  if (text == "inf" || text == "infinity") return kInfinity;
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw ValidationError(name + " must be a number or 'inf', got '" + text + "'");
}

/// Tolerance from --tol, else FRACMAX_TOLERANCE, else the built-in default.
double resolve_tolerance(const Global& g, double fallback) {
  if (g.tol) return *g.tol;
  if (const char* env = std::getenv("FRACMAX_TOLERANCE")) {
    const double v = parse_exponent(env, "FRACMAX_TOLERANCE");
    if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError("FRACMAX_TOLERANCE must be >= 0");
    return v;
  }
  return fallback;
}

void emit(const Json& j, const std::string& out) {
  const auto text = j.dump(1) + "\n";
  if (out.empty() || out == "-")
    std::cout << text;
  else
    io::write_file(out, text);
}

Json ids_of(const MetricMeasureSpace& space, const std::vector<Index>& idx) {
  Json j = Json::array();
  for (Index i : idx) j.push_back(space.ids()[static_cast<std::size_t>(i)]);
  return j;
}

// --- space ---------------------------------------------------------------

struct SpaceBuild {
  SpaceSpec spec;
  std::string out;
};

int run_space_build(const SpaceBuild& a) {
  io::save_space(generate_space(a.spec), a.out);
  return kOk;
}

struct SpaceInspect {
  std::string in, out, balls;
  bool constants = false;
};

int run_space_inspect(const SpaceInspect& a) {
  const auto space = io::load_space(a.in);
  const auto audit = audit_metric(space);
  Json j = {{"schema_version", io::kSchemaVersion},
            {"points", space.size()},
            {"total_measure", io::number(space.total_measure())},
            {"diam", io::number(space.diam())},
            {"min_gap", io::number(space.min_gap())},
            {"dense", space.is_dense()}};
  j["audit"] = {{"ok", audit.ok},
                {"exhaustive", audit.exhaustive},
                {"worst_triangle_excess", io::number(audit.worst_triangle_excess)},
                {"message", audit.message}};
  if (a.constants) {
    const auto g = estimate_geometry(space);
    Json c = {{"c_d", io::number(g.c_d)},
              {"Q", io::number(g.Q)},
              {"doubling_witness",
               {{"x", space.ids()[static_cast<std::size_t>(g.doubling_x)]},
                {"r", io::number(g.doubling_r)}}}};
    if (g.c_l) {
      c["c_l"] = io::number(*g.c_l);
      c["lower_witness"] = {{"x", space.ids()[static_cast<std::size_t>(g.lower_x)]},
                            {"r", io::number(g.lower_r)}};
    } else {
      c["c_l"] = nullptr;
    }
    j["constants"] = std::move(c);
  }
  if (!a.balls.empty()) {
    SortedNeighborhoods nb(space);
    std::string csv = "point,r,open_measure,closed_measure\n";
    auto radii = distinct_distances(space);
    for (Index x = 0; x < space.size(); ++x)
      for (double r : radii)
        csv += std::to_string(space.ids()[static_cast<std::size_t>(x)]) + "," +
               io::format_double(r) + "," +
               io::format_double(nb.ball_measure(x, r, BallKind::Open)) + "," +
               io::format_double(nb.ball_measure(x, r, BallKind::Closed)) + "\n";
    io::write_file(a.balls, csv);
  }
  emit(j, a.out);
  return audit.ok ? kOk : kInvariant;
}

// --- cover ----------------------------------------------------------------

struct CoverBuild {
  std::string in, out, dump_phi;
  double r = 1.0;
};

int run_cover_build(const CoverBuild& a, const Global& g) {
  const auto space = io::load_space(a.in);
  require(a.r > 0.0, "--r must be positive");
  const auto cover = build_cover(space, a.r);
  const auto pou = build_partition_of_unity(space, cover, g.mode());
  const auto audit = audit_partition(space, cover, pou);
  Json j = {{"schema_version", io::kSchemaVersion},
            {"r", io::number(a.r)},
            {"centers", ids_of(space, cover.centers)},
            {"overlap", pou.overlap},
            {"nu", io::number(pou.nu)},
            {"lipschitz_r", io::number(pou.lip)}};
  j["audit"] = {{"ok", audit.ok},
                {"worst_sum_error", io::number(audit.worst_sum_error)},
                {"support_exact", audit.support_exact},
                {"nu_bound", audit.nu_bound}};
  if (!a.dump_phi.empty()) io::write_file(a.dump_phi, io::partition_to_csv(space, cover, pou));
  emit(j, a.out);
  return audit.ok ? kOk : kInvariant;
}

// --- maxfn ----------------------------------------------------------------

struct MaxFn {
  std::string in, u, out, op = "standard", scales = "dyadic";
  double alpha = 0.0;
};

int run_maxfn(const MaxFn& a, const Global& g) {
  require(a.alpha >= 0.0, "--alpha must be non-negative");
  const auto space = io::load_space(a.in);
  const auto u = io::load_function(space, a.u);
  const auto policy = a.scales == "distances" ? RadiusPolicy::distances() : RadiusPolicy::dyadic();
  MaximalResult res;
  std::vector<double> grid;
  if (a.op == "standard") {
    grid = standard_radii(space, policy);
    res = fractional_maximal(space, u, a.alpha, grid, g.mode());
  } else {
    const auto fam = build_scale_family(space, policy, g.mode());
    grid = fam.scales;
    res = discrete_fractional_maximal(space, u, a.alpha, fam, g.mode());
  }
  std::string csv = "point,value,radius\n";
  for (Index x = 0; x < space.size(); ++x)
    csv += std::to_string(space.ids()[static_cast<std::size_t>(x)]) + "," +
           io::format_double(res.value(x)) + "," +
           io::format_double(grid[static_cast<std::size_t>(res.argmax[static_cast<std::size_t>(x)])]) +
           "\n";
  if (a.out.empty() || a.out == "-")
    std::cout << csv;
  else
    io::write_file(a.out, csv);
  return kOk;
}

// --- norm -----------------------------------------------------------------

struct NormArgs {
  std::string space, u, out, kind = "hajlasz", p = "2", q;
  double s = 0.5;
};

int run_norm(const NormArgs& a) {
  const double p = parse_exponent(a.p, "--p");
  require(a.s > 0.0, "--s must be positive");
  require(p > 0.0, "--p must be positive");
  const auto space = io::load_space(a.space);
  const auto u = io::load_function(space, a.u);
  Json j = {{"schema_version", io::kSchemaVersion}, {"kind", a.kind}, {"s", a.s}, {"p", io::number(p)}};
  NormResult result;
  if (a.kind == "hajlasz") {
    const auto og = optimal_gradient(space, u, a.s, p);
    result = og.result;
    Json g = Json::array();
    for (Index x = 0; x < space.size(); ++x) g.push_back(io::number(og.gradient.g(x)));
    j["minimizer"] = {{"points", space.ids()}, {"g", std::move(g)}};
  } else if (a.kind == "besov" || a.kind == "tl") {
    if (a.q.empty()) throw ValidationError("--q is required for --kind " + a.kind);
    const double q = parse_exponent(a.q, "--q");
    require(q > 0.0, "--q must be positive");
    j["q"] = io::number(q);
    const auto sn = a.kind == "besov" ? besov_norm(space, u, a.s, p, q)
                                      : triebel_lizorkin_norm(space, u, a.s, p, q);
    result = sn.result;
    j["minimizer"] = io::sequence_to_json(sn.sequence);
    j["minimizer"]["points"] = space.ids();
  } else {
    throw ValidationError("unknown --kind '" + a.kind + "'");
  }
  const auto r = io::norm_result_to_json(result);
  for (auto it = r.begin(); it != r.end(); ++it) j[it.key()] = it.value();
  j["flags"] = Json::array();
  if (!result.exact) j["flags"].push_back("upper_bound");
  if (!result.converged) j["flags"].push_back("not_converged");
  emit(j, a.out);
  return result.converged ? kOk : kSolver;
}

// --- verify ---------------------------------------------------------------

struct VerifyArgs {
  std::string suite, corpus, out;
  SuiteOptions opts;
};

int run_verify(VerifyArgs a, const Global& g) {
  a.opts.tol = resolve_tolerance(g, a.opts.tol);
  validate_suite_options(a.suite, a.opts);
  const auto corpus = build_corpus(io::resolve_corpus_spec(a.corpus));
  const auto res = run_suite(a.suite, corpus, a.opts, g.mode());
  write_suite(res, a.out);
  return res.ok ? kOk : kInvariant;
}

// --- corpus ---------------------------------------------------------------

struct CorpusMake {
  std::string spec, out;
};

int run_corpus_make(const CorpusMake& a) {
  const auto spec = io::resolve_corpus_spec(a.spec);
  const auto corpus = build_corpus(spec);
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(a.out, ec);
  if (ec) throw IoError("cannot create '" + a.out + "': " + ec.message());
  Json manifest = {{"schema_version", io::kSchemaVersion}};
  manifest["spec"] = io::corpus_spec_to_json(spec);
  char hash[17];
  std::snprintf(hash, sizeof(hash), "%016llx", static_cast<unsigned long long>(corpus_hash(corpus)));
  manifest["hash"] = hash;
  Json entries = Json::array();
  for (const auto& e : corpus.entries) {
    const fs::path dir = fs::path(a.out) / e.id;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
    io::save_space(e.space, (dir / "space.json").string());
    Json fns = Json::array();
    for (std::size_t f = 0; f < e.functions.size(); ++f) {
      io::write_file((dir / (e.function_ids[f] + ".csv")).string(),
                     io::function_to_csv(e.space, e.functions[f]));
      fns.push_back(e.function_ids[f]);
    }
    entries.push_back({{"space", e.id}, {"functions", std::move(fns)}});
  }
  manifest["entries"] = std::move(entries);
  io::write_file((fs::path(a.out) / "corpus.json").string(), manifest.dump(1) + "\n");
  return kOk;
}

void optional_double(CLI::App* app, const std::string& name, std::optional<double>& target,
                     const std::string& help) {
  app->add_option_function<double>(name, [&target](const double& v) { target = v; }, help);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractional maximal operators and smoothness norms on finite metric measure spaces"};
  app.require_subcommand(1);
  Global global;
  app.add_flag("--deterministic", global.deterministic, "Sequential reference mode");
  optional_double(&app, "--tol", global.tol,
                  "Default tolerance (overrides FRACMAX_TOLERANCE)");
  app.fallthrough();

  int status = kOk;
  std::function<int()> action;

  auto* space = app.add_subcommand("space", "Build or inspect metric measure spaces");
  space->require_subcommand(1);
  SpaceBuild sb;
  auto* sbuild = space->add_subcommand("build", "Generate a space file");
  sbuild->add_option("--kind", sb.spec.kind, "path|grid|two_point|sierpinski|random_cloud")
      ->required();
  sbuild->add_option("--n", sb.spec.n, "Points per side (path, grid) or cloud size");
  sbuild->add_option("--dims", sb.spec.dims, "Grid or cloud dimension");
  sbuild->add_option("--level", sb.spec.level, "Sierpinski level");
  sbuild->add_option("--seed", sb.spec.seed, "Cloud seed");
  sbuild->add_option("--density", sb.spec.density, "Weight of every point");
  sbuild->add_option("--out", sb.out, "Output space.json")->required();
  sbuild->callback([&] { action = [&] { return run_space_build(sb); }; });

  SpaceInspect si;
  auto* sinspect = space->add_subcommand("inspect", "Audit a space and report its constants");
  sinspect->add_option("--in", si.in, "Space file")->required();
  sinspect->add_flag("--constants", si.constants, "Estimate doubling and lower-mass constants");
  sinspect->add_option("--balls", si.balls, "Write ball measures as CSV");
  sinspect->add_option("--out", si.out, "Report file (default stdout)");
  sinspect->callback([&] { action = [&] { return run_space_inspect(si); }; });

  auto* cover = app.add_subcommand("cover", "Coverings and partitions of unity");
  cover->require_subcommand(1);
  CoverBuild cb;
  auto* cbuild = cover->add_subcommand("build", "Greedy r-net cover with its partition of unity");
  cbuild->add_option("--in", cb.in, "Space file")->required();
  cbuild->add_option("--r", cb.r, "Cover radius")->required();
  cbuild->add_option("--dump-phi", cb.dump_phi, "Write (center_id, point_id, phi) CSV");
  cbuild->add_option("--out", cb.out, "Report file (default stdout)");
  cbuild->callback([&] { action = [&] { return run_cover_build(cb, global); }; });

  MaxFn mf;
  auto* maxfn = app.add_subcommand("maxfn", "Evaluate a fractional maximal function");
  maxfn->add_option("--alpha", mf.alpha, "Order alpha >= 0")->required();
  maxfn->add_option("--op", mf.op, "standard|discrete")
      ->check(CLI::IsMember({"standard", "discrete"}));
  maxfn->add_option("--scales", mf.scales, "dyadic|distances")
      ->check(CLI::IsMember({"dyadic", "distances"}));
  maxfn->add_option("--in", mf.in, "Space file")->required();
  maxfn->add_option("--u", mf.u, "Function CSV")->required();
  maxfn->add_option("--out", mf.out, "Result CSV (default stdout)");
  maxfn->callback([&] { action = [&] { return run_maxfn(mf, global); }; });

  NormArgs na;
  auto* norm = app.add_subcommand("norm", "Compute a smoothness norm");
  norm->add_option("--space", na.space, "Space file")->required();
  norm->add_option("--u", na.u, "Function CSV")->required();
  norm->add_option("--kind", na.kind, "hajlasz|besov|tl")
      ->check(CLI::IsMember({"hajlasz", "besov", "tl"}));
  norm->add_option("--s", na.s, "Smoothness s > 0")->required();
  norm->add_option("--p", na.p, "Integrability p (number or inf)")->required();
  norm->add_option("--q", na.q, "Sequence exponent q (number or inf)");
  norm->add_option("--out", na.out, "Report JSON (default stdout)");
  norm->callback([&] { action = [&] { return run_norm(na); }; });

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Run a verification suite over a corpus");
  verify->add_option("--suite", va.suite, "poincare|thm33|thm43|bounds|fs")
      ->required()
      ->check(CLI::IsMember(suite_names()));
  verify->add_option("--corpus", va.corpus, "Builtin corpus name or corpus spec JSON")
      ->required();
  verify->add_option("--out", va.out, "Report directory")->required();
  optional_double(verify, "--s", va.opts.s, "Smoothness s");
  optional_double(verify, "--alpha", va.opts.alpha, "Order alpha");
  optional_double(verify, "--p", va.opts.p, "Exponent p");
  optional_double(verify, "--q", va.opts.q, "Exponent q");
  optional_double(verify, "--delta", va.opts.delta, "delta of the sequence transfer");
  optional_double(verify, "--eps", va.opts.eps, "eps of the sequence transfer");
  optional_double(verify, "--eps-prime", va.opts.eps_prime, "eps' of the sequence transfer");
  optional_double(verify, "--t", va.opts.t, "Exponent t of the maximal candidate");
  verify->callback([&] { action = [&] { return run_verify(va, global); }; });

  auto* corpus = app.add_subcommand("corpus", "Generate test corpora");
  corpus->require_subcommand(1);
  CorpusMake cm;
  auto* cmake = corpus->add_subcommand("make", "Write space.json and function CSVs");
  cmake->add_option("--spec", cm.spec, "Builtin corpus name or corpus spec JSON")->required();
  cmake->add_option("--out", cm.out, "Output directory")->required();
  cmake->callback([&] { action = [&] { return run_corpus_make(cm); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kValidation;
  }

  try {
    status = action ? action() : kValidation;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const RangeError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kSolver;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvariant;
  }
  return status;
}
