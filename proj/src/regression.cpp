#include "nsdiag/regression.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nsdiag/derivatives.hpp"
#include "nsdiag/errors.hpp"

namespace nsdiag {

const std::vector<std::string>& check_tags() {
  static const std::vector<std::string> tags{"Thm1",    "Thm1-Dini", "Thm2-b", "Thm2-c", "2Stat",   "2Invex",
                                             "SPC-Dini", "SPC-Had",  "LStab",  "Thm5",   "Subdiff0"};
  return tags;
}

std::vector<std::string> expand_checks(const std::string& csv) {
  std::vector<std::string> out;
  auto add = [&](const std::string& t) {
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
  };
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) continue;
    if (item == "all") {
      for (const auto& t : check_tags()) add(t);
    } else if (item == "Thm2") {
      add("Thm2-b");
      add("Thm2-c");
    } else if (std::find(check_tags().begin(), check_tags().end(), item) != check_tags().end()) {
      add(item);
    } else {
      throw ConfigError("unknown check tag '" + item + "'");
    }
  }
  if (out.empty()) throw ConfigError("no checks requested");
  return out;
}

Verdict run_check(const std::string& tag, const ProperFunction& f, const Vector& x, const DirectionSet& dirs,
                  const SampleSchedule& s, const CheckSettings& st) {
  const ClassifyOptions& opt = st.classify;
  Verdict v;
  if (tag == "Thm1") {
    v = check_necessary_local_min(f, x, dirs, s, opt);
  } else if (tag == "Thm1-Dini") {
    v = check_necessary_local_min_dini(f, x, dirs, s, opt);
  } else if (tag == "Thm2-b") {
    v = check_isolated_order2(f, x, dirs, s, Thm2Variant::b, opt);
  } else if (tag == "Thm2-c") {
    v = check_isolated_order2(f, x, dirs, s, Thm2Variant::c, opt);
  } else if (tag == "2Stat") {
    v = is_2stationary(f, x, dirs, s, opt);
  } else if (tag == "2Invex") {
    v = check_2invex_on_box(f, f.domain_box, st.invex_grid, dirs, s, opt).verdict;
  } else if (tag == "SPC-Dini") {
    v = check_strong_pseudoconvex(f, x, dirs, s, SpcMode::dini, opt).verdict;
  } else if (tag == "SPC-Had") {
    v = check_strong_pseudoconvex(f, x, dirs, s, SpcMode::hadamard, opt).verdict;
  } else if (tag == "LStab") {
    v = check_lstability(f, x, dirs, s, {1e-1, 1e-2, 1e-3, 1e-4}, opt).verdict;
  } else if (tag == "Thm5") {
    v = thm5_report(f, x, dirs, s, opt, st.thm5_oracle).verdict;
  } else if (tag == "Subdiff0") {
    v = subdiff_contains(f, x, LinearFunctional{Vector::Zero(f.dim)}, dirs, s, opt.estimator());
  } else {
    throw ConfigError("unknown check tag '" + tag + "'");
  }
  v.condition_id = tag;
  return v;
}

OracleReport run_oracle(const std::string& kind, const ProperFunction& f, const Vector& x, const GridSpec& grid) {
  switch (oracle_kind_from_string(kind)) {
    case OracleKind::local_min: return local_min(f, x, grid);
    case OracleKind::isolated_order2: return isolated_order2(f, x, grid);
    default: throw ConfigError("oracle '" + kind + "' needs a box, not a point");
  }
}

bool EntryResult::ok() const { return failures() == 0; }

int EntryResult::failures() const {
  return static_cast<int>(std::count_if(results.begin(), results.end(), [](const auto& r) { return !r.ok; }));
}

namespace {

LiminfEstimate estimate_for(const Expectation& e, const ProperFunction& f, const Vector& x, const SampleSchedule& s,
                            const EstimatorOptions& eo) {
  switch (e.kind) {
    case ExpectKind::dini1: return dini1(f, x, e.direction, s);
    case ExpectKind::dini2: return dini2(f, x, e.direction, s, eo);
    case ExpectKind::hadamard1: return hadamard1(f, x, e.direction, s, eo);
    case ExpectKind::hadamard2:
      return hadamard2(f, x, LinearFunctional{Vector::Zero(f.dim)}, e.direction, s, eo);
    case ExpectKind::ginchev2: return ginchev(f, x, e.direction, s, eo)[2];
    case ExpectKind::growth2: return growth2(f, x, e.direction, s);
    default: break;
  }
  throw ConfigError("not a derivative expectation");
}

}  // namespace

EntryResult run_entry(const CorpusEntry& entry, const SampleSchedule& s, const CheckSettings& st) {
  EntryResult res;
  res.name = entry.function.name;
  const ProperFunction& f = entry.function;
  const Vector& x = entry.candidate;
  const DirectionSet dirs = DirectionSet::defaults(f.dim);
  for (const Expectation& e : entry.expected) {
    ExpectationResult r;
    r.expected = e;
    try {
      if (e.kind == ExpectKind::verdict) {
        const Verdict v = run_check(e.check, f, x, dirs, s, st);
        r.observed = to_string(v.outcome);
        r.ok = r.observed == e.outcome;
      } else if (e.kind == ExpectKind::oracle) {
        const OracleReport o = run_oracle(e.check, f, x, GridSpec::around(x));
        r.observed = to_string(o.outcome);
        r.ok = r.observed == e.outcome;
      } else {
        const LiminfEstimate est = estimate_for(e, f, x, s, st.classify.estimator());
        r.observed = to_string(est.trend) + " " + est.best().to_string();
        if (e.trend) {
          r.ok = est.trend == *e.trend;
        } else {
          const ExtReal b = est.best();
          r.ok = est.trend == Trend::converged && b.is_finite() && std::abs(b.value() - *e.value) <= e.tolerance;
        }
      }
    } catch (const std::exception& ex) {
      r.observed = std::string("error: ") + ex.what();
      r.ok = false;
    }
    res.results.push_back(std::move(r));
  }
  return res;
}

}  // namespace nsdiag
