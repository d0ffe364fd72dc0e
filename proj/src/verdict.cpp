#include "nsdiag/verdict.hpp"

namespace nsdiag {

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::pass: return "PASS";
    case Outcome::fail: return "FAIL";
    case Outcome::inconclusive: return "INCONCLUSIVE";
    case Outcome::precondition_not_met: return "PRECONDITION_NOT_MET";
  }
  return "INCONCLUSIVE";
}

Outcome outcome_from_string(const std::string& s) {
  if (s == "PASS") return Outcome::pass;
  if (s == "FAIL") return Outcome::fail;
  if (s == "INCONCLUSIVE") return Outcome::inconclusive;
  if (s == "PRECONDITION_NOT_MET") return Outcome::precondition_not_met;
  throw ConfigError("unknown outcome '" + s + "'");
}

Truth holds_ge(const LiminfEstimate& est, double band, double offset) {
  switch (est.trend) {
    case Trend::diverging_plus_inf: return Truth::yes;
    case Trend::diverging_minus_inf: return Truth::no;
    case Trend::converged: return est.upper() - offset >= -band ? Truth::yes : Truth::no;
    default: return Truth::unknown;
  }
}

Truth holds_gt(const LiminfEstimate& est, double band, double offset) {
  switch (est.trend) {
    case Trend::diverging_plus_inf: return Truth::yes;
    case Trend::diverging_minus_inf: return Truth::no;
    case Trend::converged:
      if (est.lower() - offset > band) return Truth::yes;
      if (est.upper() - offset <= band) return Truth::no;
      return Truth::unknown;
    default: return Truth::unknown;
  }
}

Truth holds_zero(const LiminfEstimate& est, double band, double offset) {
  switch (est.trend) {
    case Trend::diverging_plus_inf:
    case Trend::diverging_minus_inf: return Truth::no;
    case Trend::converged:
      return (est.lower() - offset <= band && est.upper() - offset >= -band) ? Truth::yes : Truth::no;
    default: return Truth::unknown;
  }
}

void VerdictBuilder::record(Truth t, const Vector& u, const std::string& kind, const LiminfEstimate& est) {
  if (t == Truth::no) {
    ++failures_;
    v_.witnesses.push_back({u, kind, est});
  } else if (t == Truth::unknown) {
    unknown_.push_back({u, kind, est});
  }
}

Verdict VerdictBuilder::finish(std::string note) {
  if (failures_ > 0) {
    v_.outcome = Outcome::fail;
  } else if (!unknown_.empty()) {
    v_.outcome = Outcome::inconclusive;
    v_.witnesses = std::move(unknown_);
  } else {
    v_.outcome = Outcome::pass;
  }
  v_.note = std::move(note);
  return v_;
}

}  // namespace nsdiag
