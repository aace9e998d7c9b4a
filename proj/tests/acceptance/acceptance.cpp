#include "fracmax/corpus.hpp"
#include "fracmax/covering.hpp"
#include "fracmax/hajlasz.hpp"
#include "fracmax/io.hpp"
#include "fracmax/maximal.hpp"
#include "fracmax/suites.hpp"
#include "fracmax/verify.hpp"
#include "oracles/lp.hpp"

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

using namespace fracmax;
namespace fs = std::filesystem;

namespace {

constexpr Execution kFast = Execution::Parallel;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(double v) { return io::format_double(v); }

double rel(double a, double b) {
  if (a == b) return 0.0;
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

const Corpus& small() {
  static const Corpus c = build_corpus(builtin_corpus_spec("small"));
  return c;
}

const Corpus& standard() {
  static const Corpus c = build_corpus(builtin_corpus_spec("standard"));
  return c;
}

Outcome partition_of_unity() {
  Outcome out;
  double worst_sum = 0.0, worst_lip = 0.0;
  Index checked = 0;
  for (const auto* corpus : {&small(), &standard()})
    for (const auto& e : corpus->entries)
      for (double r : radius_scale_set(e.space, RadiusPolicy::dyadic())) {
        const auto cover = build_cover(e.space, r);
        const auto pou = build_partition_of_unity(e.space, cover, kFast);
        const auto audit = audit_partition(e.space, cover, pou);
        worst_sum = std::max(worst_sum, audit.worst_sum_error);
        worst_lip = std::max(worst_lip, audit.lip);
        ++checked;
        bool ok = audit.worst_sum_error <= 1e-12 && audit.support_exact && audit.nu_bound &&
                  audit.lip <= 2.0;
        // phi_i >= 1/N on every 3r-ball, checked pointwise
        for (Index i = 0; i < cover.size() && ok; ++i)
          for (Index y : cover.ball_3r[static_cast<std::size_t>(i)])
            ok = ok && pou.value(i, y) * static_cast<double>(pou.overlap) >= 1.0 - 1e-12;
        if (!ok) {
          out.pass = false;
          out.detail += " " + e.id + "@r=" + fmt(r);
        }
      }
  out.detail = std::to_string(checked) + " scales, max |sum-1| " + fmt(worst_sum) +
               ", max lip*r " + fmt(worst_lip) + (out.pass ? "" : "; failing:" + out.detail);
  return out;
}

Outcome comparability() {
  Outcome out;
  double worst_shift = 0.0;
  std::string worst;
  double band_lo = kInfinity, band_hi = 0.0;
  for (const auto& e : standard().entries) {
    const auto radii = standard_radii(e.space, RadiusPolicy::distances());
    const auto coarse = build_scale_family(e.space, RadiusPolicy::dyadic(2.0), kFast);
    const auto fine = build_scale_family(e.space, RadiusPolicy::dyadic(std::sqrt(2.0)), kFast);
    for (double alpha : {0.0, 0.3, 0.7}) {
      double lo[2] = {kInfinity, kInfinity}, hi[2] = {0.0, 0.0};
      const std::size_t count = std::min<std::size_t>(10, e.functions.size());
      for (std::size_t f = 0; f < count; ++f) {
        const auto a = comparability_report(e.space, e.functions[f], alpha, radii, coarse, kFast);
        const auto b = comparability_report(e.space, e.functions[f], alpha, radii, fine, kFast);
        if (!a.defined) continue;
        lo[0] = std::min(lo[0], a.c_low);
        hi[0] = std::max(hi[0], a.c_high);
        lo[1] = std::min(lo[1], b.c_low);
        hi[1] = std::max(hi[1], b.c_high);
      }
      band_lo = std::min(band_lo, lo[0]);
      band_hi = std::max(band_hi, hi[0]);
      const bool bounded = lo[0] > 0.0 && hi[0] < kInfinity && lo[1] > 0.0 && hi[1] < kInfinity;
      const double shift = std::max(std::abs(lo[1] / lo[0] - 1.0), std::abs(hi[1] / hi[0] - 1.0));
      if (shift > worst_shift) {
        worst_shift = shift;
        worst = e.id + " alpha=" + fmt(alpha) + " band [" + fmt(lo[0]) + ", " + fmt(hi[0]) +
                "] -> [" + fmt(lo[1]) + ", " + fmt(hi[1]) + "]";
      }
      if (!bounded || shift > 0.25) out.pass = false;
    }
  }
  out.detail = "band [" + fmt(band_lo) + ", " + fmt(band_hi) + "], worst shift under halving " +
               fmt(worst_shift) + " (" + worst + ")";
  return out;
}

Outcome polytope_oracle() {
  Outcome out;
  double worst_lp = 0.0, worst_besov = 0.0;
  Index spaces = 0;
  for (const auto& e : small().entries) {
    if (e.space.size() > 12) continue;
    ++spaces;
    for (const auto& u : e.functions)
      for (double s : {0.5, 1.0}) {
        const auto rows = oracle::gradient_rows(e.space, u, s);
        const double ref = oracle::simplex_l1_gradient(e.space.weights(), rows);
        const double got = optimal_gradient(e.space, u, s, 1.0).result.norm;
        worst_lp = std::max(worst_lp, std::abs(got - ref) / std::max(1.0, ref));
        if (e.space.size() <= 6) {
          const double vert = oracle::vertex_l1_gradient(e.space.weights(), rows);
          worst_lp = std::max(worst_lp, std::abs(got - vert) / std::max(1.0, vert));
        }
        for (auto [p, q] : std::vector<std::pair<double, double>>{{1, 1}, {2, 2}, {2, 1.5}, {1.5, 3}}) {
          const double dec = besov_norm(e.space, u, s, p, q).result.norm;
          const double joint = besov_norm_joint(e.space, u, s, p, q).result.norm;
          worst_besov = std::max(worst_besov, std::abs(dec - joint) / std::max(1.0, joint));
        }
      }
  }
  out.pass = worst_lp <= 1e-6 && worst_besov <= 1e-6 && spaces > 0;
  out.detail = std::to_string(spaces) + " spaces, worst L1 gap " + fmt(worst_lp) +
               ", worst besov decoupled/joint gap " + fmt(worst_besov);
  return out;
}

Outcome space_identification() {
  Outcome out;
  double worst = 0.0;
  Index n = 0;
  for (const auto* corpus : {&small(), &standard()})
    for (const auto& e : corpus->entries)
      for (const auto& u : e.functions) {
        const double tl = triebel_lizorkin_norm(e.space, u, 0.5, 2.0, kInfinity).result.norm;
        const double h = hajlasz_norm(e.space, u, 0.5, 2.0);
        worst = std::max(worst, std::abs(tl - h) / std::max(1.0, h));
        ++n;
      }
  out.pass = worst <= 1e-6;
  out.detail = std::to_string(n) + " instances, worst gap " + fmt(worst);
  return out;
}

Outcome transfer() {
  Outcome out;
  SuiteOptions opts;
  const auto base = run_suite("thm33", standard(), opts, kFast);
  Corpus scaled = standard();
  for (auto& e : scaled.entries)
    for (auto& f : e.functions) f *= 10.0;
  const auto big = run_suite("thm33", scaled, opts, kFast);

  bool finite = true, self = base.ok, invariant = true;
  double worst_scale = 0.0, worst_spread = 0.0;
  std::string spread_at;
  Index degenerate = 0;
  std::ostringstream spreads;
  for (const auto& id : base.order) {
    const auto& a = base.reports.at(id);
    const auto& b = big.reports.at(id);
    std::map<std::string, std::pair<double, double>> range;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double c = a[i].best_constant;
      finite = finite && std::isfinite(c);
      const double d = rel(c, b[i].best_constant);
      worst_scale = std::max(worst_scale, d);
      invariant = invariant && d <= 1e-10;
      if (c == 0.0) {
        ++degenerate;
        continue;
      }
      auto [it, fresh] = range.try_emplace(a[i].space_id, c, c);
      it->second.first = std::min(it->second.first, c);
      it->second.second = std::max(it->second.second, c);
    }
    for (const auto& [space, mm] : range) {
      const double spread = mm.second / mm.first;
      spreads << " " << id << "/" << space << "=" << fmt(std::round(spread * 10) / 10);
      if (spread > worst_spread) {
        worst_spread = spread;
        spread_at = id + " on " + space;
      }
    }
  }
  out.pass = finite && self && invariant && worst_spread <= 10.0;
  out.detail = std::string("finite ") + (finite ? "yes" : "no") + ", self-consistent " +
               (self ? "yes" : "no") + ", worst u->10u change " + fmt(worst_scale) +
               ", max spread " + fmt(worst_spread) + " (" + spread_at + "), " +
               std::to_string(degenerate) + " instances with C*=0 excluded from spread;" +
               spreads.str();
  return out;
}

Outcome sequence_transfer() {
  Outcome out;
  double worst_violation = 0.0, worst_delta = 0.0;
  bool ok = true, finite = true;
  for (const auto* corpus : {&small(), &standard()}) {
    const auto res = run_suite("thm43", *corpus, {}, kFast);
    ok = ok && res.ok;
    for (const auto& [id, reps] : res.reports)
      for (const auto& r : reps) {
        finite = finite && std::isfinite(r.best_constant);
        if (r.params.count("self_violation"))
          worst_violation = std::max(worst_violation, r.params.at("self_violation"));
        worst_delta = std::max(worst_delta, r.truncation_delta);
      }
  }
  out.pass = ok && finite && worst_violation <= 1e-10 && worst_delta <= 0.01;
  out.detail = "max self violation " + fmt(worst_violation) + ", max truncation change " +
               fmt(worst_delta);
  return out;
}

Outcome poincare() {
  Outcome out;
  bool finite = true, zero = true, stable = true;
  const auto res = run_suite("poincare", standard(), {}, kFast);
  for (const auto& [id, reps] : res.reports)
    for (const auto& r : reps) finite = finite && std::isfinite(r.best_constant);

  Corpus constants;
  for (const auto& e : standard().entries) {
    CorpusEntry c{e.id, e.space, {"const3"}, {Vector<double>::Constant(e.space.size(), 3.0)}};
    constants.entries.push_back(std::move(c));
  }
  const auto cres = run_suite("poincare", constants, {}, kFast);
  for (const auto& [id, reps] : cres.reports)
    for (const auto& r : reps) zero = zero && r.best_constant == 0.0;

  const auto r32 = run_suite("poincare", build_corpus(builtin_corpus_spec("refine32")), {}, kFast);
  const auto r64 = run_suite("poincare", build_corpus(builtin_corpus_spec("refine64")), {}, kFast);
  double worst = 0.0;
  std::string at;
  for (const std::string id : {"poincare", "sobolev_poincare", "fractional_poincare"}) {
    const auto& a = r32.reports.at(id);
    const auto& b = r64.reports.at(id);
    for (std::size_t i = 0; i < a.size(); ++i) {
      finite = finite && std::isfinite(a[i].best_constant) && std::isfinite(b[i].best_constant);
      const double d = rel(a[i].best_constant, b[i].best_constant);
      if (d > worst) {
        worst = d;
        at = id + "/" + a[i].function_id;
      }
    }
  }
  stable = worst <= 0.10;
  out.pass = finite && zero && stable;
  out.detail = std::string("finite ") + (finite ? "yes" : "no") + ", constants give 0 " +
               (zero ? "yes" : "no") + ", worst 32->64 change " + fmt(worst) + " (" + at + ")";
  return out;
}

Outcome boundedness() {
  Outcome out;
  const auto res = run_suite("bounds", standard(), {}, Execution::Reference);
  const fs::path path = fs::path(FRACMAX_BASELINE_DIR) / "bounds.json";
  io::Json current = io::Json::object();
  bool finite = true;
  std::string maxima;
  for (const auto& t : res.tables) {
    finite = finite && std::isfinite(t.max_ratio) && t.max_ratio > 0.0;
    current[t.theorem_id] = io::number(t.max_ratio);
    maxima += " " + t.theorem_id + "=" + fmt(t.max_ratio);
  }
  if (!fs::exists(path)) {
    fs::create_directories(path.parent_path());
    io::write_file(path.string(), current.dump(1) + "\n");
    out.pass = finite;
    out.detail = "baseline written;" + maxima;
    return out;
  }
  const auto base = io::parse_json(io::read_file(path.string()), path.string());
  double worst = 0.0;
  bool complete = true;
  for (auto it = current.begin(); it != current.end(); ++it) {
    if (!base.contains(it.key())) {
      complete = false;
      continue;
    }
    worst = std::max(worst, rel(io::to_double(it.value()), io::to_double(base.at(it.key()))));
  }
  out.pass = finite && complete && worst <= 1e-9;
  out.detail = "max drift from baseline " + fmt(worst) + ";" + maxima;
  return out;
}

Outcome fefferman_stein() {
  Outcome out;
  const auto res = run_suite("fs", standard(), {}, kFast);
  double worst = 0.0, worst_gap = 0.0;
  bool finite = true;
  for (const auto& [id, reps] : res.reports)
    for (const auto& r : reps) {
      finite = finite && std::isfinite(r.best_constant);
      worst = std::max(worst, r.best_constant);
      if (r.params.count("scalar_ratio"))
        worst_gap = std::max(worst_gap, std::abs(r.best_constant - r.params.at("scalar_ratio")));
    }
  out.pass = res.ok && finite && worst_gap <= 1e-9;
  out.detail = "max constant " + fmt(worst) + ", one-level vs scalar gap " + fmt(worst_gap);
  return out;
}

int cli(const std::string& args) {
  const int status =
      std::system((std::string(FRACMAX_CLI) + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    out[fs::relative(e.path(), dir).string()] = ss.str();
  }
  return out;
}

Outcome determinism() {
  Outcome out;
  const auto tmp = fs::temp_directory_path() / "fracmax_acceptance_determinism";
  fs::remove_all(tmp);
  fs::create_directories(tmp);
  const std::vector<std::string> runs = {
      "verify --suite poincare --corpus small", "verify --suite thm33 --corpus small",
      "verify --suite thm43 --corpus small",    "verify --suite fs --corpus small",
      "verify --suite bounds --corpus five_grid", "corpus make --spec standard"};
  Index files = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto a = tmp / ("a" + std::to_string(i)), b = tmp / ("b" + std::to_string(i));
    const int ca = cli("--deterministic " + runs[i] + " --out " + a.string());
    const int cb = cli("--deterministic " + runs[i] + " --out " + b.string());
    const auto sa = snapshot(a), sb = snapshot(b);
    files += static_cast<Index>(sa.size());
    if (ca != 0 || cb != 0 || sa.empty() || sa != sb) {
      out.pass = false;
      out.detail += " differs: " + runs[i] + ";";
    }
  }
  fs::remove_all(tmp);
  out.detail = std::to_string(runs.size()) + " paired runs, " + std::to_string(files) +
               " files compared" + (out.pass ? "" : ";" + out.detail);
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, Outcome (*)()>> criteria = {
      {"partition of unity", partition_of_unity},
      {"maximal comparability", comparability},
      {"gradient polytope oracle", polytope_oracle},
      {"space identification", space_identification},
      {"gradient transfer", transfer},
      {"sequence transfer", sequence_transfer},
      {"poincare suites", poincare},
      {"boundedness tables", boundedness},
      {"vector-valued maximal", fefferman_stein},
      {"determinism", determinism}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !o.pass;
    std::printf("%s criterion %zu (%s): %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
