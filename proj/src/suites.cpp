#include "fracmax/suites.hpp"

#include "fracmax/norms.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

namespace fracmax {

namespace {

constexpr double kTruncationTol = 0.01;
const char* kFiniteNote = "M*_alpha u is finite on every instance: radii are capped on a finite space";

struct Job {
  std::size_t entry;
  std::size_t function;
};

std::vector<Job> instance_jobs(const Corpus& corpus) {
  std::vector<Job> jobs;
  for (std::size_t e = 0; e < corpus.entries.size(); ++e)
    for (std::size_t f = 0; f < corpus.entries[e].functions.size(); ++f) jobs.push_back({e, f});
  return jobs;
}

std::string tag(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

/// Runs `fn(job) -> vector<report>` on every instance and files the reports
/// by id, in instance order.
template <typename Fn>
void collect(SuiteResult& res, const Corpus& corpus, Execution mode, Fn&& fn) {
  const auto jobs = instance_jobs(corpus);
  std::vector<std::vector<VerificationReport>> out(jobs.size());
  parallel_for(
      static_cast<Index>(jobs.size()),
      [&](Index j) {
        const auto job = jobs[static_cast<std::size_t>(j)];
        const auto& entry = corpus.entries[job.entry];
        auto reps = fn(entry, entry.functions[job.function]);
        for (auto& r : reps) {
          r.space_id = entry.id;
          r.function_id = entry.function_ids[job.function];
        }
        out[static_cast<std::size_t>(j)] = std::move(reps);
      },
      mode);
  for (auto& reps : out)
    for (auto& r : reps) {
      if (!res.reports.count(r.id)) res.order.push_back(r.id);
      res.ok = res.ok && r.pass;
      res.reports[r.id].push_back(std::move(r));
    }
}

std::vector<double> geometry_Q(const Corpus& corpus) {
  std::vector<double> Q;
  for (const auto& e : corpus.entries) Q.push_back(estimate_geometry(e.space).Q);
  return Q;
}

std::size_t entry_index(const Corpus& corpus, const CorpusEntry& entry) {
  return static_cast<std::size_t>(&entry - corpus.entries.data());
}

VerificationReport skipped(const std::string& id, const std::string& why) {
  VerificationReport r;
  r.id = id;
  r.notes.push_back("skipped: " + why);
  return r;
}

void poincare_suite(SuiteResult& res, const Corpus& corpus, Execution mode) {
  const double s = 0.5, p = 1.0, eps = 0.25, eps_prime = 0.375;
  const auto Q = geometry_Q(corpus);
  collect(res, corpus, mode, [&](const CorpusEntry& entry, const Vector<double>& u) {
    const auto& space = entry.space;
    const double q = Q[entry_index(corpus, entry)];
    std::vector<VerificationReport> out;
    const auto g = canonical_gradient(space, u, s).g;
    out.push_back(check_poincare(space, u, g, s, p));
    if (q > s * p)
      out.push_back(check_sobolev_poincare(space, u, g, s, p, q));
    else
      out.push_back(skipped("sobolev_poincare", "Q <= s p"));
    const auto seq = canonical_fractional_gradient(space, u, s);
    out.push_back(check_fractional_poincare(space, u, seq, s, p, eps, eps_prime));
    if (q > eps * p)
      out.push_back(check_fractional_sobolev_poincare(space, u, seq, s, p, eps, eps_prime, q));
    else
      out.push_back(skipped("fractional_sobolev_poincare", "Q <= eps p"));
    return out;
  });
}

std::vector<std::pair<double, double>> thm33_grid(const SuiteOptions& o) {
  if (!o.s && !o.alpha) return transfer_grid();
  return {{o.s.value_or(0.5), o.alpha.value_or(0.3)}};
}

SequenceParams thm43_params(double Q, const SuiteOptions& o) {
  auto sp = tl_default_params(Q, o.s.value_or(0.5), o.alpha.value_or(0.3), o.p.value_or(2.0),
                              o.q.value_or(2.0));
  if (o.delta) sp.delta = *o.delta;
  if (o.eps) sp.eps = *o.eps;
  if (o.eps_prime) sp.eps_prime = *o.eps_prime;
  if (o.t) sp.t = *o.t;
  return sp;
}

void thm33_suite(SuiteResult& res, const Corpus& corpus, const SuiteOptions& opts,
                 Execution mode) {
  const auto Q = geometry_Q(corpus);
  const auto grid = thm33_grid(opts);
  collect(res, corpus, mode, [&](const CorpusEntry& entry, const Vector<double>& u) {
    const auto& space = entry.space;
    std::vector<VerificationReport> out;
    for (const auto& [s, alpha] : grid) {
      TransferParams tp;
      tp.s = s;
      tp.alpha = alpha;
      tp.Q = Q[entry_index(corpus, entry)];
      tp.t = opts.t.value_or(tp.Q / (tp.Q + s));
      const auto g = canonical_gradient(space, u, s).g;
      auto tr = thm33_transfer(space, u, g, tp);
      auto rep = tr.report;
      rep.id = "thm33_s" + tag(s) + "_a" + tag(alpha);
      if (std::isfinite(rep.best_constant)) {
        const auto check =
            is_hajlasz_gradient(space, tr.maximal, tr.g_tilde, tr.exponent, opts.tol);
        rep.params["self_violation"] = check.worst_violation;
        if (!check.ok) {
          rep.pass = false;
          rep.notes.push_back("scaled candidate fails the gradient check");
        }
      }
      out.push_back(std::move(rep));
    }
    return out;
  });
}

void thm43_suite(SuiteResult& res, const Corpus& corpus, const SuiteOptions& opts,
                 Execution mode) {
  const auto Q = geometry_Q(corpus);
  for (double q : Q) validate_sequence_params(thm43_params(q, opts));
  collect(res, corpus, mode, [&](const CorpusEntry& entry, const Vector<double>& u) {
    const auto& space = entry.space;
    const auto sp = thm43_params(Q[entry_index(corpus, entry)], opts);
    const auto seq = canonical_fractional_gradient(space, u, sp.s);
    auto tr = thm43_sequence_transfer(space, u, seq, sp);
    auto rep = tr.report;
    if (std::isfinite(rep.best_constant)) {
      const auto check = is_fractional_gradient(space, tr.maximal, tr.g_tilde, sp.s + sp.alpha,
                                                opts.tol);
      rep.params["self_violation"] = check.worst_violation;
      if (!check.ok) {
        rep.pass = false;
        rep.notes.push_back("scaled candidate fails the gradient check");
      }
    }
    if (rep.truncation_delta > kTruncationTol) {
      rep.pass = false;
      rep.notes.push_back("truncation sensitivity above 1%");
    }
    return std::vector<VerificationReport>{rep};
  });
}

void fs_suite(SuiteResult& res, const Corpus& corpus, Execution mode) {
  std::vector<std::vector<VerificationReport>> out(corpus.entries.size());
  parallel_for(
      static_cast<Index>(corpus.entries.size()),
      [&](Index e) {
        const auto& entry = corpus.entries[static_cast<std::size_t>(e)];
        const auto& space = entry.space;
        const auto seed = sequence_seed(entry.id);
        auto& reps = out[static_cast<std::size_t>(e)];
        const auto seq = random_sequence(space.size(), 3, seed);
        for (const auto& [p, q] : std::vector<std::pair<double, double>>{{2.0, 2.0}, {1.5, 3.0}}) {
          auto rep = fefferman_stein_check(space, seq, p, q);
          rep.id = "fefferman_stein_p" + tag(p) + "_q" + tag(q);
          reps.push_back(std::move(rep));
        }
        const auto one = random_sequence(space.size(), 1, seed);
        auto rep = fefferman_stein_check(space, one, 2.0, 2.0);
        rep.id = "fefferman_stein_one_level";
        const auto radii = standard_radii(space, RadiusPolicy::distances());
        const Vector<double> g = one.levels.col(0);
        const auto m = fractional_maximal(space, g, 0.0, radii).value;
        const double scalar = lp_norm(m, space.weights(), 2.0) / lp_norm(g, space.weights(), 2.0);
        rep.params["scalar_ratio"] = scalar;
        if (!(std::abs(rep.best_constant - scalar) <= 1e-9 * std::max(1.0, scalar))) {
          rep.pass = false;
          rep.notes.push_back("one-level ratio differs from the scalar maximal ratio");
        }
        reps.push_back(std::move(rep));
        for (auto& r : reps) r.space_id = entry.id;
      },
      mode);
  for (auto& reps : out)
    for (auto& r : reps) {
      if (!res.reports.count(r.id)) res.order.push_back(r.id);
      res.ok = res.ok && r.pass;
      res.reports[r.id].push_back(std::move(r));
    }
}

void bounds_suite(SuiteResult& res, const Corpus& corpus, Execution mode) {
  for (const auto& id : bounds_theorem_ids()) {
    auto table = boundedness_experiment(corpus, id, default_bounds_params(id), mode);
    res.ok = res.ok && std::isfinite(table.max_ratio);
    res.order.push_back(id);
    res.tables.push_back(std::move(table));
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"poincare", "thm33", "thm43", "bounds", "fs"};
  return names;
}

const std::vector<std::pair<double, double>>& transfer_grid() {
  static const std::vector<std::pair<double, double>> grid = {{0.5, 0.3}, {1.0, 0.0}, {0.8, 0.5}};
  return grid;
}

std::uint64_t sequence_seed(const std::string& entry_id) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : entry_id) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void validate_suite_options(const std::string& suite, const SuiteOptions& o) {
  if (std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end())
    throw ValidationError("unknown suite '" + suite + "'");
  if (!(o.tol >= 0.0)) throw ValidationError("tolerance must be non-negative");
  if (suite == "thm33") {
    for (const auto& [s, alpha] : thm33_grid(o))
      if (!(alpha >= 0.0 && s + alpha > 0.0)) throw ValidationError("need alpha >= 0, s + alpha > 0");
    if (o.t && !(*o.t > 0.0)) throw ValidationError("t must be positive");
  }
  if (suite == "thm43") {
    const double s = o.s.value_or(0.5), alpha = o.alpha.value_or(0.3);
    const double sa = s + alpha;
    if (!(alpha >= 0.0 && sa > 0.0 && sa < 1.0)) throw ValidationError("need 0 < s + alpha < 1");
    if (o.delta && !(*o.delta > 0.0 && *o.delta < 1.0 - sa))
      throw ValidationError("need 0 < delta < 1 - s - alpha = " + io::format_double(1.0 - sa));
    const double eps = o.eps.value_or(0.5 * s);
    const double eps_prime = o.eps_prime.value_or(0.5 * (eps + s));
    if (!(eps > 0.0 && eps < eps_prime && eps_prime < s))
      throw ValidationError("need 0 < eps < eps' < s");
  }
}

SuiteResult run_suite(const std::string& suite, const Corpus& corpus, const SuiteOptions& opts,
                      Execution mode) {
  validate_suite_options(suite, opts);
  SuiteResult res;
  res.suite = suite;
  if (suite == "poincare")
    poincare_suite(res, corpus, mode);
  else if (suite == "thm33")
    thm33_suite(res, corpus, opts, mode);
  else if (suite == "thm43")
    thm43_suite(res, corpus, opts, mode);
  else if (suite == "bounds")
    bounds_suite(res, corpus, mode);
  else if (suite == "fs")
    fs_suite(res, corpus, mode);
  else
    throw ValidationError("unknown suite '" + suite + "'");
  return res;
}

void write_suite(const SuiteResult& res, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir + "': " + ec.message());
  const auto path = [&](const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
  };
  std::string csv;
  if (res.suite == "bounds") {
    csv = "theorem,space,function,source,target,ratio,semantics,skipped\n";
    for (const auto& t : res.tables) {
      io::Json j = {{"schema_version", io::kSchemaVersion}, {"suite", res.suite}};
      j["table"] = io::bounds_to_json(t);
      io::write_file(path(t.theorem_id + ".json"), j.dump(1) + "\n");
      for (const auto& r : t.rows)
        csv += t.theorem_id + "," + csv_field(r.space_id) + "," + csv_field(r.function_id) + "," +
               io::format_double(r.source) + "," + io::format_double(r.target) + "," +
               io::format_double(r.ratio) + "," + r.semantics + "," + (r.skipped ? "1" : "0") +
               "\n";
    }
  } else {
    csv = "inequality,space,function,best_constant,pass,truncation_delta\n";
    for (const auto& id : res.order) {
      io::Json j = {{"schema_version", io::kSchemaVersion}, {"suite", res.suite}, {"inequality", id}};
      if (res.suite == "thm33" || res.suite == "thm43") j["header"] = kFiniteNote;
      io::Json reps = io::Json::array();
      for (const auto& r : res.reports.at(id)) {
        reps.push_back(io::report_to_json(r));
        csv += id + "," + csv_field(r.space_id) + "," + csv_field(r.function_id) + "," +
               io::format_double(r.best_constant) + "," + (r.pass ? "1" : "0") + "," +
               (r.truncation_delta >= 0.0 ? io::format_double(r.truncation_delta) : "") + "\n";
      }
      j["reports"] = std::move(reps);
      io::write_file(path(id + ".json"), j.dump(1) + "\n");
    }
  }
  io::write_file(path("summary.csv"), csv);
}

}  // namespace fracmax
