#include "nsdiag/report.hpp"

#include <cstdio>
#include <sstream>

#include "nsdiag/errors.hpp"

namespace nsdiag {

using nlohmann::json;

namespace {

// Finite reals as numbers, infinities as "+inf" / "-inf".
json real_to_json(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) throw DomainError("report: NaN is not representable");
  return v > 0 ? "+inf" : "-inf";
}

double real_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j == "+inf") return std::numeric_limits<double>::infinity();
  if (j == "-inf") return -std::numeric_limits<double>::infinity();
  throw ConfigError("report: expected a number or +inf/-inf");
}

json reals_to_json(const std::vector<double>& vs) {
  json a = json::array();
  for (double v : vs) a.push_back(real_to_json(v));
  return a;
}

std::vector<double> reals_from_json(const json& j) {
  std::vector<double> out;
  for (const auto& v : j) out.push_back(real_from_json(v));
  return out;
}

json vec_to_json(const Vector& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(real_to_json(v[i]));
  return a;
}

Vector vec_from_json(const json& j) {
  const std::vector<double> vs = reals_from_json(j);
  return Eigen::Map<const Vector>(vs.data(), static_cast<Eigen::Index>(vs.size()));
}

json vecs_to_json(const std::vector<Vector>& vs) {
  json a = json::array();
  for (const auto& v : vs) a.push_back(vec_to_json(v));
  return a;
}

std::vector<Vector> vecs_from_json(const json& j) {
  std::vector<Vector> out;
  for (const auto& v : j) out.push_back(vec_from_json(v));
  return out;
}

json ext_list(const std::vector<ExtReal>& vs) {
  json a = json::array();
  for (const auto& v : vs) a.push_back(real_to_json(v.value()));
  return a;
}

std::vector<ExtReal> ext_list_from(const json& j) {
  std::vector<ExtReal> out;
  for (const auto& v : j) out.emplace_back(real_from_json(v));
  return out;
}

json witness_to_json(const EstimateWitness& w) {
  return json{{"direction", vec_to_json(w.direction)}, {"kind", w.kind}, {"estimate", estimate_to_json(w.estimate)}};
}

EstimateWitness witness_from_json(const json& j) {
  return EstimateWitness{vec_from_json(j.at("direction")), j.at("kind").get<std::string>(),
                         estimate_from_json(j.at("estimate"))};
}

json verdict_to_json(const Verdict& v) {
  json w = json::array();
  for (const auto& x : v.witnesses) w.push_back(witness_to_json(x));
  return json{{"condition", v.condition_id}, {"outcome", to_string(v.outcome)}, {"zero_band", v.zero_band},
              {"note", v.note}, {"witnesses", w}};
}

Verdict verdict_from_json(const json& j) {
  Verdict v;
  v.condition_id = j.at("condition").get<std::string>();
  v.outcome = outcome_from_string(j.at("outcome").get<std::string>());
  v.zero_band = j.at("zero_band").get<double>();
  v.note = j.at("note").get<std::string>();
  for (const auto& w : j.at("witnesses")) v.witnesses.push_back(witness_from_json(w));
  return v;
}

json oracle_to_json(const OracleReport& o) {
  json j{{"kind", to_string(o.kind)},
         {"outcome", to_string(o.outcome)},
         {"radii", reals_to_json(o.radii)},
         {"C_estimates", reals_to_json(o.C_estimates)},
         {"note", o.note}};
  j["counterexample"] = o.counterexample ? vec_to_json(*o.counterexample) : json(nullptr);
  j["counterexample_value"] = o.counterexample_value ? real_to_json(*o.counterexample_value) : json(nullptr);
  return j;
}

OracleReport oracle_from_json(const json& j) {
  OracleReport o;
  o.kind = oracle_kind_from_string(j.at("kind").get<std::string>());
  o.outcome = oracle_outcome_from_string(j.at("outcome").get<std::string>());
  o.radii = reals_from_json(j.at("radii"));
  o.C_estimates = reals_from_json(j.at("C_estimates"));
  o.note = j.at("note").get<std::string>();
  if (!j.at("counterexample").is_null()) o.counterexample = vec_from_json(j.at("counterexample"));
  if (!j.at("counterexample_value").is_null()) o.counterexample_value = real_from_json(j.at("counterexample_value"));
  return o;
}

json schedule_to_json(const SampleSchedule& s) {
  return json{{"t0", s.t0},
              {"tratio", s.t_ratio},
              {"eps0", s.eps0},
              {"epsratio", s.eps_ratio},
              {"stages", s.stages},
              {"samples", s.samples_per_stage},
              {"seed", s.seed},
              {"trend_tol", s.trend_tol},
              {"divergence_threshold", s.divergence_threshold}};
}

SampleSchedule schedule_from_json(const json& j) {
  SampleSchedule s;
  s.t0 = j.at("t0").get<double>();
  s.t_ratio = j.at("tratio").get<double>();
  s.eps0 = j.at("eps0").get<double>();
  s.eps_ratio = j.at("epsratio").get<double>();
  s.stages = j.at("stages").get<int>();
  s.samples_per_stage = j.at("samples").get<int>();
  s.seed = j.at("seed").get<std::uint64_t>();
  s.trend_tol = j.at("trend_tol").get<double>();
  s.divergence_threshold = j.at("divergence_threshold").get<double>();
  return s;
}

}  // namespace

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json estimate_to_json(const LiminfEstimate& e) {
  return json{{"value", real_to_json(e.value.value())},
              {"limit", real_to_json(e.limit.value())},
              {"trend", to_string(e.trend)},
              {"extrapolated", e.extrapolated},
              {"stage_infima", ext_list(e.stage_infima)},
              {"stage_anchors", ext_list(e.stage_anchors)},
              {"witness", json{{"t", e.witness.t}, {"direction", vec_to_json(e.witness.direction)}}}};
}

LiminfEstimate estimate_from_json(const json& j) {
  LiminfEstimate e;
  e.value = ExtReal(real_from_json(j.at("value")));
  e.limit = ExtReal(real_from_json(j.at("limit")));
  e.trend = trend_from_string(j.at("trend").get<std::string>());
  e.extrapolated = j.at("extrapolated").get<bool>();
  e.stage_infima = ext_list_from(j.at("stage_infima"));
  e.stage_anchors = ext_list_from(j.at("stage_anchors"));
  e.witness.t = j.at("witness").at("t").get<double>();
  e.witness.direction = vec_from_json(j.at("witness").at("direction"));
  return e;
}

json report_to_json(const AnalysisReport& r) {
  json j;
  j["schema_version"] = kReportSchemaVersion;
  j["command"] = r.command;
  j["function"] = json{{"name", r.function_name}, {"source", r.function_source}, {"source_hash", r.source_hash}};
  j["point"] = vec_to_json(r.point);
  j["schedule"] = schedule_to_json(r.schedule);
  j["directions"] = r.directions;
  j["estimates"] = json::array();
  for (const auto& e : r.estimates) j["estimates"].push_back(witness_to_json(e));
  j["verdicts"] = json::array();
  for (const auto& v : r.verdicts) j["verdicts"].push_back(verdict_to_json(v));
  j["oracles"] = json::array();
  for (const auto& o : r.oracles) j["oracles"].push_back(oracle_to_json(o));
  if (r.vecopt) {
    const VecoptSection& v = *r.vecopt;
    j["vecopt"] = json{{"f", v.f},
                       {"g", v.g},
                       {"C_generators", vecs_to_json(v.C_generators)},
                       {"K_generators", vecs_to_json(v.K_generators)},
                       {"feasible", v.feasible},
                       {"violated_halfspace", v.violated_halfspace ? reals_to_json(*v.violated_halfspace) : json(nullptr)},
                       {"F_at_candidate", real_to_json(v.F_at_candidate)}};
  }
  if (r.timings) j["timings"] = *r.timings;
  return j;
}

AnalysisReport report_from_json(const json& j) {
  try {
    if (j.at("schema_version") != kReportSchemaVersion) throw ConfigError("report: unsupported schema version");
    AnalysisReport r;
    r.command = j.at("command").get<std::string>();
    r.function_name = j.at("function").at("name").get<std::string>();
    r.function_source = j.at("function").at("source").get<std::string>();
    r.source_hash = j.at("function").at("source_hash").get<std::string>();
    r.point = vec_from_json(j.at("point"));
    r.schedule = schedule_from_json(j.at("schedule"));
    r.directions = j.at("directions").get<std::string>();
    for (const auto& e : j.at("estimates")) r.estimates.push_back(witness_from_json(e));
    for (const auto& v : j.at("verdicts")) r.verdicts.push_back(verdict_from_json(v));
    for (const auto& o : j.at("oracles")) r.oracles.push_back(oracle_from_json(o));
    if (j.contains("vecopt")) {
      const json& v = j.at("vecopt");
      VecoptSection s;
      s.f = v.at("f").get<std::vector<std::string>>();
      s.g = v.at("g").get<std::vector<std::string>>();
      s.C_generators = vecs_from_json(v.at("C_generators"));
      s.K_generators = vecs_from_json(v.at("K_generators"));
      s.feasible = v.at("feasible").get<bool>();
      if (!v.at("violated_halfspace").is_null()) s.violated_halfspace = reals_from_json(v.at("violated_halfspace"));
      s.F_at_candidate = real_from_json(v.at("F_at_candidate"));
      r.vecopt = s;
    }
    if (j.contains("timings")) r.timings = j.at("timings").get<std::map<std::string, double>>();
    return r;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("report: ") + e.what());
  }
}

std::string estimates_csv(const std::vector<EstimateWitness>& rows, int dim) {
  std::ostringstream os;
  for (int i = 1; i <= dim; ++i) os << 'd' << i << ',';
  os << "kind,value,trend,limit\n";
  os.precision(17);
  for (const auto& r : rows) {
    for (int i = 0; i < dim; ++i) os << r.direction[i] << ',';
    os << r.kind << ',' << r.estimate.value.to_string() << ',' << to_string(r.estimate.trend) << ','
       << r.estimate.limit.to_string() << '\n';
  }
  return os.str();
}

}  // namespace nsdiag
