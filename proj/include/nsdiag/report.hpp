#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nsdiag/oracle.hpp"
#include "nsdiag/verdict.hpp"

namespace nsdiag {

inline constexpr const char* kReportSchemaVersion = "1.0.0";

/// Vector-problem section of a vecopt report.
struct VecoptSection {
  std::vector<std::string> f;
  std::vector<std::string> g;
  std::vector<Vector> C_generators;
  std::vector<Vector> K_generators;
  bool feasible = false;
  std::optional<std::vector<double>> violated_halfspace;
  double F_at_candidate = 0.0;
};

/// Everything a run produced; serialized as the versioned JSON report.
struct AnalysisReport {
  std::string command = "analyze";
  std::string function_name;
  std::string function_source;  // "builtin", a file path, or "vecopt"
  std::string source_hash;      // FNV-1a of the defining text, hex
  Vector point;
  SampleSchedule schedule;
  std::string directions;  // generator description
  std::vector<EstimateWitness> estimates;
  std::vector<Verdict> verdicts;
  std::vector<OracleReport> oracles;
  std::optional<VecoptSection> vecopt;
  std::optional<std::map<std::string, double>> timings;  // seconds
};

/// 64-bit FNV-1a as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

nlohmann::json report_to_json(const AnalysisReport& r);
AnalysisReport report_from_json(const nlohmann::json& j);

nlohmann::json estimate_to_json(const LiminfEstimate& e);
LiminfEstimate estimate_from_json(const nlohmann::json& j);

/// Per-direction table: d1..dn,kind,value,trend,limit.
std::string estimates_csv(const std::vector<EstimateWitness>& rows, int dim);

}  // namespace nsdiag
