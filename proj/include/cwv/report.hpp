#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cwv/steering.hpp"

namespace cwv {

enum class CheckStatus { pass, fail, skip, error };

const char* to_string(CheckStatus s);

// One verified identity: lhs and rhs evaluated along two algebraic routes,
// compared at a tolerance. Skipped checks keep their reason in `detail`.
struct CheckRecord {
  std::string id;
  std::string identity;  // the algebraic statement being checked
  std::optional<Complex> lhs;
  std::optional<Complex> rhs;
  std::optional<double> deviation;
  std::optional<double> tolerance;
  CheckStatus status = CheckStatus::skip;
  std::string detail;

  static CheckRecord compared(std::string id, std::string identity, Complex lhs, Complex rhs,
                              double tolerance, std::string detail = "");
  static CheckRecord skipped(std::string id, std::string identity, std::string reason);
  static CheckRecord errored(std::string id, std::string identity, std::string message);
};

struct ReportSummary {
  int pass = 0;
  int fail = 0;
  int skip = 0;
  int error = 0;
  int total() const { return pass + fail + skip + error; }
};

struct Report {
  std::string scenario;
  std::vector<CheckRecord> checks;
  std::optional<ContextTable> table;

  ReportSummary summary() const;
  bool all_passed() const;  // no fail and no error records
};

const CheckRecord* find_check(const Report& r, const std::string& id);

enum class ReportFormat { json, csv, text };

std::optional<ReportFormat> report_format_from_string(const std::string& word);

// Deterministic serialization: identical reports yield identical bytes.
// json: structured dump, sorted keys, floats at 17 significant digits.
// csv:  one row per check.
// text: aligned human-readable summary.
std::string emit_report(const Report& r, ReportFormat format);

nlohmann::json report_to_json(const Report& r);
std::string context_table_text(const ContextTable& table);

}  // namespace cwv
