#include "nsdiag/cli.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "nsdiag/corpus.hpp"
#include "nsdiag/errors.hpp"
#include "nsdiag/expr.hpp"
#include "nsdiag/parallel.hpp"
#include "nsdiag/regression.hpp"
#include "nsdiag/report.hpp"
#include "nsdiag/vecopt.hpp"

namespace nsdiag {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << text;
}

class Stopwatch {
 public:
  double lap() {
    auto now = std::chrono::steady_clock::now();
    double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

}  // namespace

ProperFunction resolve_function(const std::string& name, std::string* source_text) {
  for (const auto& n : corpus_names())
    if (n == name) {
      if (source_text) *source_text = "builtin:" + name;
      return corpus_entry(name).function;
    }
  std::ifstream probe(name);
  if (!probe) throw ConfigError("unknown function '" + name + "' (not a corpus entry or readable file)");
  const std::string text = read_file(name);
  if (source_text) *source_text = text;
  std::string stem = name.substr(name.find_last_of('/') + 1);
  stem = stem.substr(0, stem.find('.'));
  return parse_function_text(text, stem);
}

DirectionSet parse_directions(const std::string& spec, int dim, std::uint64_t seed) {
  if (spec == "axes") return DirectionSet::axis_and_diagonals(dim);
  if (spec.rfind("fibonacci:", 0) == 0) {
    int n = 0;
    try {
      std::size_t used = 0;
      n = std::stoi(spec.substr(10), &used);
      if (used != spec.size() - 10) n = 0;
    } catch (const std::exception&) {
      n = 0;
    }
    if (n < 1) throw ConfigError("directions: fibonacci:N needs a positive integer N");
    return DirectionSet::fibonacci(dim, n, seed);
  }
  if (spec.rfind("explicit:", 0) == 0) {
    std::stringstream ss(read_file(spec.substr(9)));
    std::vector<Vector> dirs;
    std::string line;
    while (std::getline(ss, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos || line[line.find_first_not_of(" \t")] == '#') continue;
      Vector v = parse_point(line);
      if (v.size() != dim) throw ConfigError("directions: vector of wrong dimension in " + spec.substr(9));
      dirs.push_back(v);
    }
    if (dirs.empty()) throw ConfigError("directions: no vectors in " + spec.substr(9));
    return DirectionSet::explicit_set(dirs);
  }
  throw ConfigError("directions: expected fibonacci:N, axes or explicit:<file>, got '" + spec + "'");
}

namespace {

const std::vector<std::string> kKinds{"dini1", "dini2", "hadamard1", "hadamard2", "ginchev2", "growth2"};

std::vector<std::string> parse_kinds(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string k;
  while (std::getline(ss, k, ',')) {
    if (k.empty()) continue;
    if (std::find(kKinds.begin(), kKinds.end(), k) == kKinds.end()) throw ConfigError("unknown estimate kind '" + k + "'");
    if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(k);
  }
  return out;
}

LiminfEstimate estimate_kind(const std::string& kind, const ProperFunction& f, const Vector& x, const Vector& u,
                             const SampleSchedule& s, const EstimatorOptions& eo) {
  if (kind == "dini1") return dini1(f, x, u, s);
  if (kind == "dini2") return dini2(f, x, u, s, eo);
  if (kind == "hadamard1") return hadamard1(f, x, u, s, eo);
  if (kind == "hadamard2") return hadamard2(f, x, LinearFunctional{Vector::Zero(f.dim)}, u, s, eo);
  if (kind == "ginchev2") return ginchev(f, x, u, s, eo)[2];
  return growth2(f, x, u, s);
}

struct CommonOptions {
  std::string directions = "fibonacci:64";
  std::string schedule;
  std::optional<std::uint64_t> seed;
  std::string oracle = "on";
  std::string report;
  std::string csv;
  unsigned threads = 0;
  bool no_timings = false;
  double zero_band = 1e-6;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--directions", o.directions, "fibonacci:N | axes | explicit:<file>");
  cmd->add_option("--schedule", o.schedule, "t0=..,tratio=..,eps0=..,epsratio=..,stages=..,samples=..,seed=..");
  cmd->add_option("--seed", o.seed, "seed for sampling and direction generation");
  cmd->add_option("--oracle", o.oracle, "on|off")->check(CLI::IsMember({"on", "off"}));
  cmd->add_option("--report", o.report, "JSON report path (default: stdout)");
  cmd->add_option("--csv", o.csv, "per-direction estimate table");
  cmd->add_option("--threads", o.threads, "worker cap (0: hardware concurrency)");
  cmd->add_flag("--no-timings", o.no_timings, "omit wall-clock timings from the report");
  cmd->add_option("--zero-band", o.zero_band, "tolerance for zero tests");
}

SampleSchedule schedule_of(const CommonOptions& o) {
  SampleSchedule s = o.schedule.empty() ? SampleSchedule{} : parse_schedule(o.schedule);
  if (o.seed) s.seed = *o.seed;
  s.validate();
  return s;
}

void print_verdicts(std::ostream& os, const std::vector<Verdict>& vs, const std::vector<OracleReport>& os_reports) {
  for (const auto& v : vs) {
    os << std::left << std::setw(24) << v.condition_id << std::setw(22) << to_string(v.outcome);
    if (!v.witnesses.empty() && v.outcome != Outcome::pass) {
      const auto& w = v.witnesses.front();
      os << w.kind << " u=(" << format_vector(w.direction) << ") " << to_string(w.estimate.trend) << ' '
         << w.estimate.best().to_string();
    }
    if (!v.note.empty()) os << "  [" << v.note << ']';
    os << '\n';
  }
  for (const auto& o : os_reports) {
    os << std::left << std::setw(24) << ("oracle:" + to_string(o.kind)) << std::setw(22) << to_string(o.outcome);
    if (o.counterexample) os << "counterexample (" << format_vector(*o.counterexample) << ")";
    if (!o.note.empty()) os << "  [" << o.note << ']';
    os << '\n';
  }
}

void emit_report(const AnalysisReport& rep, const CommonOptions& o, std::ostream& out) {
  const std::string text = report_to_json(rep).dump(2) + "\n";
  if (o.report.empty()) {
    out << text;
  } else {
    write_file(o.report, text);
    print_verdicts(out, rep.verdicts, rep.oracles);
  }
  if (!o.csv.empty()) write_file(o.csv, estimates_csv(rep.estimates, static_cast<int>(rep.point.size())));
}

}  // namespace

namespace {

struct AnalyzeOptions {
  CommonOptions common;
  std::string function;
  std::string point;
  std::string checks = "all";
  std::string kinds = "dini1,hadamard1,dini2,hadamard2";
};

int cmd_analyze(const AnalyzeOptions& a, std::ostream& out) {
  const CommonOptions& o = a.common;
  Stopwatch total, lap;
  std::string source;
  const ProperFunction f = resolve_function(a.function, &source);
  const Vector x = a.point.empty() ? Vector::Zero(f.dim) : parse_point(a.point);
  if (x.size() != f.dim)
    throw ConfigError("point has " + std::to_string(x.size()) + " components, " + f.name + " needs " +
                      std::to_string(f.dim));
  if (!f(x).is_finite()) throw ConfigError(f.name + " is +inf at the point");
  const SampleSchedule s = schedule_of(o);
  const DirectionSet dirs = parse_directions(o.directions, f.dim, s.seed);
  const std::vector<std::string> checks = expand_checks(a.checks);
  const std::vector<std::string> kinds = parse_kinds(a.kinds);
  CheckSettings st;
  st.classify.zero_band = o.zero_band;
  st.thm5_oracle = o.oracle == "on";

  AnalysisReport rep;
  rep.command = "analyze";
  rep.function_name = f.name;
  rep.function_source = source.rfind("builtin:", 0) == 0 ? "builtin" : a.function;
  rep.source_hash = fnv1a_hex(source);
  rep.point = x;
  rep.schedule = s;
  rep.directions = o.directions + " (" + std::to_string(dirs.size()) + " directions)";
  std::map<std::string, double> timings;

  rep.estimates.resize(dirs.size() * kinds.size());
  parallel_for(rep.estimates.size(), [&](std::size_t i) {
    const Vector& u = dirs.directions[i / kinds.size()];
    const std::string& k = kinds[i % kinds.size()];
    rep.estimates[i] = EstimateWitness{u, k, estimate_kind(k, f, x, u, s, st.classify.estimator())};
  });
  timings["estimates"] = lap.lap();
  for (const auto& tag : checks) {
    rep.verdicts.push_back(run_check(tag, f, x, dirs, s, st));
    timings["check:" + tag] = lap.lap();
  }
  if (o.oracle == "on") {
    const GridSpec grid = GridSpec::around(x);
    rep.oracles.push_back(local_min(f, x, grid));
    rep.oracles.push_back(isolated_order2(f, x, grid));
    timings["oracles"] = lap.lap();
  }
  timings["total"] = total.lap();
  if (!o.no_timings) rep.timings = timings;
  emit_report(rep, o, out);
  return kExitOk;
}

struct CorpusOptions {
  std::vector<std::string> entries;
  std::string schedule;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
};

// Tolerances read better as 1e-06 than as their exact binary expansion.
std::string brief(double v) {
  std::ostringstream os;
  os << std::setprecision(3) << v;
  return os.str();
}

int cmd_corpus(const CorpusOptions& c, std::ostream& out) {
  CommonOptions o;
  o.schedule = c.schedule;
  o.seed = c.seed;
  const SampleSchedule s = schedule_of(o);
  std::vector<CorpusEntry> entries;
  if (c.entries.empty())
    entries = corpus();
  else
    for (const auto& n : c.entries) entries.push_back(corpus_entry(n));

  int failed = 0, total = 0;
  std::vector<std::string> misses;
  for (const auto& e : entries) {
    const EntryResult r = run_entry(e, s);
    for (const auto& x : r.results) {
      ++total;
      const std::string want = x.expected.kind == ExpectKind::verdict || x.expected.kind == ExpectKind::oracle
                                   ? x.expected.outcome
                                   : (x.expected.trend ? to_string(*x.expected.trend)
                                                       : ExtReal(*x.expected.value).to_string() + " +- " +
                                                             brief(x.expected.tolerance));
      out << (x.ok ? "ok    " : "FAIL  ") << std::left << std::setw(15) << r.name << std::setw(44)
          << x.expected.label() << " expected " << want << ", got " << x.observed << '\n';
      if (!x.ok) {
        ++failed;
        misses.push_back(r.name + " " + x.expected.label() + ": " + x.observed);
      }
    }
  }
  out << (total - failed) << '/' << total << " expectations reproduced\n";
  if (failed) {
    out << "not reproduced:\n";
    for (const auto& m : misses) out << "  " << m << '\n';
  }
  return failed ? kExitFailure : kExitOk;
}

struct VecoptOptions {
  CommonOptions common;
  std::string problem;
  std::string candidate;
  std::string variants;
  std::vector<std::string> suite;  // n=.. seed=..
  bool suite_requested = false;
};

int run_equivalence(const std::vector<std::string>& args, std::ostream& out) {
  int n = 100;
  std::uint64_t seed = 7;
  for (const auto& a : args) {
    const auto eq = a.find('=');
    const std::string key = a.substr(0, eq), val = eq == std::string::npos ? "" : a.substr(eq + 1);
    try {
      if (key == "n")
        n = std::stoi(val);
      else if (key == "seed")
        seed = std::stoull(val);
      else
        throw ConfigError("equivalence suite: unknown setting '" + a + "'");
    } catch (const std::logic_error&) {
      throw ConfigError("equivalence suite: malformed setting '" + a + "'");
    }
  }
  const EquivalenceResult r = equivalence_suite(n, seed);
  out << "jimenez/isolmin agreement " << r.agreements << '/' << r.instances << " (" << r.yes_count
      << " isolated, " << (r.agreements - r.yes_count) << " not isolated)\n";
  for (const auto& d : r.disagreements) out << "  " << d << '\n';
  return r.agreements == r.instances ? kExitOk : kExitFailure;
}

int cmd_vecopt(const VecoptOptions& v, std::ostream& out, std::ostream& err) {
  if (v.suite_requested) return run_equivalence(v.suite, out);
  if (v.problem.empty()) throw ConfigError("vecopt: --problem is required");
  const CommonOptions& o = v.common;
  Stopwatch total, lap;
  const std::string text = read_file(v.problem);
  const VectorProblem p = parse_vector_problem(text);
  Vector xbar;
  if (!v.candidate.empty())
    xbar = parse_point(v.candidate);
  else if (p.candidate)
    xbar = *p.candidate;
  else
    throw ConfigError("vecopt: no candidate in the problem file and no --candidate");
  if (xbar.size() != p.dim) throw ConfigError("vecopt: candidate of wrong dimension");
  const SampleSchedule s = schedule_of(o);
  const DirectionSet dirs = parse_directions(o.directions, p.dim, s.seed);

  AnalysisReport rep;
  rep.command = "vecopt";
  rep.function_name = p.name;
  rep.function_source = v.problem;
  rep.source_hash = fnv1a_hex(text);
  rep.point = xbar;
  rep.schedule = s;
  rep.directions = o.directions + " (" + std::to_string(dirs.size()) + " directions)";
  VecoptSection sec;
  sec.f = p.f_source;
  sec.g = p.g_source;
  sec.C_generators = *complete(p.C).generators;
  sec.K_generators = *complete(p.K).generators;
  sec.feasible = feasible(p, xbar);
  std::map<std::string, double> timings;

  if (!sec.feasible) {
    const auto h = violated_constraint(p, xbar);
    if (h) sec.violated_halfspace = std::vector<double>(h->coeffs.data(), h->coeffs.data() + h->coeffs.size());
    rep.vecopt = sec;
    err << "candidate (" << format_vector(xbar) << ") is infeasible: -g(x) violates the K halfspace ("
        << (h ? format_vector(h->coeffs) : std::string("?")) << "), value " << (h ? (*h)(-p.g(xbar)) : 0.0) << '\n';
    if (!o.report.empty()) write_file(o.report, report_to_json(rep).dump(2) + "\n");
    return kExitInfeasible;
  }

  const ScalarizedF F = scalarize(p, xbar);
  sec.F_at_candidate = F(xbar);
  rep.vecopt = sec;
  ClassifyOptions co;
  co.zero_band = o.zero_band;
  const ProperFunction Ff = F.as_function();
  rep.estimates.resize(dirs.size() * 2);
  parallel_for(rep.estimates.size(), [&](std::size_t i) {
    const Vector& u = dirs.directions[i / 2];
    const std::string k = i % 2 ? "hadamard2" : "hadamard1";
    rep.estimates[i] = EstimateWitness{u, k, estimate_kind(k, Ff, xbar, u, s, co.estimator())};
  });
  timings["estimates"] = lap.lap();
  rep.verdicts.push_back(check_weak_min_necessary(p, xbar, dirs, s, co));
  timings["check:VecWeakMin"] = lap.lap();
  rep.verdicts.push_back(check_vector_isolated_order2(p, xbar, dirs, s, co));
  timings["check:VecIso2"] = lap.lap();

  if (o.oracle == "on") {
    std::vector<IsolationVariant> variants;
    if (v.variants.empty()) {
      variants.push_back(IsolationVariant::lambda);
      const PolyhedralCone O = PolyhedralCone::orthant(p.n_objectives);
      if (cone_subset(p.C, O) && cone_subset(O, p.C)) {
        variants.push_back(IsolationVariant::jimenez);
        variants.push_back(IsolationVariant::isolmin);
      }
    } else {
      std::stringstream ss(v.variants);
      std::string item;
      while (std::getline(ss, item, ',')) variants.push_back(isolation_variant_from_string(item));
    }
    const GridSpec grid = GridSpec::around(xbar);
    OracleReport lm = local_min(Ff, xbar, grid);
    lm.note = "local_min of the scalarization";
    rep.oracles.push_back(lm);
    for (auto var : variants) rep.oracles.push_back(vector_isolated_oracle(p, xbar, grid, 2, var));
    timings["oracles"] = lap.lap();
  }
  timings["total"] = total.lap();
  if (!o.no_timings) rep.timings = timings;
  emit_report(rep, o, out);
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical generalized derivatives and second-order optimality checks", "nsdiag"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kReportSchemaVersion);

  AnalyzeOptions an;
  CLI::App* analyze = app.add_subcommand("analyze", "estimate derivatives and classify a point");
  analyze->add_option("--function", an.function, "corpus name or function file")->required();
  analyze->add_option("--point", an.point, "comma-separated coordinates (default: origin)");
  analyze->add_option("--checks", an.checks, "comma list of condition tags, Thm2, or all");
  analyze->add_option("--kinds", an.kinds, "estimate table kinds: dini1,dini2,hadamard1,hadamard2,ginchev2,growth2");
  add_common(analyze, an.common);

  CorpusOptions co;
  CLI::App* corpus_cmd = app.add_subcommand("corpus", "reproduce the reference corpus");
  corpus_cmd->add_option("--entry", co.entries, "entry name (repeatable)");
  corpus_cmd->add_option("--schedule", co.schedule, "sampling schedule overrides");
  corpus_cmd->add_option("--seed", co.seed, "sampling seed");
  corpus_cmd->add_option("--threads", co.threads, "worker cap (0: hardware concurrency)");

  VecoptOptions vo;
  CLI::App* vec = app.add_subcommand("vecopt", "check a cone-constrained vector problem");
  vec->add_option("--problem", vo.problem, "problem JSON file");
  vec->add_option("--candidate", vo.candidate, "override the candidate point");
  vec->add_option("--variants", vo.variants, "oracle variants: jimenez,isolmin,lambda");
  vec->add_option("--equivalence-suite", vo.suite, "run the jimenez/isolmin suite: n=100 seed=7")->expected(0, 2);
  add_common(vec, vo.common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    out << kReportSchemaVersion << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (*analyze) {
      set_max_threads(an.common.threads);
      return cmd_analyze(an, out);
    }
    if (*corpus_cmd) {
      set_max_threads(co.threads);
      return cmd_corpus(co, out);
    }
    set_max_threads(vo.common.threads);
    vo.suite_requested = vec->count("--equivalence-suite") > 0;
    return cmd_vecopt(vo, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace nsdiag
