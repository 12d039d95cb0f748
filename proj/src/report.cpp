#include "cwv/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "cwv/jsonio.hpp"

namespace cwv {

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::skip: return "skip";
    case CheckStatus::error: return "error";
  }
  return "?";
}

CheckRecord CheckRecord::compared(std::string id, std::string identity, Complex lhs, Complex rhs,
                                  double tolerance, std::string detail) {
  CheckRecord r;
  r.id = std::move(id);
  r.identity = std::move(identity);
  r.lhs = lhs;
  r.rhs = rhs;
  r.deviation = std::abs(lhs - rhs);
  r.tolerance = tolerance;
  r.status = *r.deviation <= tolerance ? CheckStatus::pass : CheckStatus::fail;
  r.detail = std::move(detail);
  return r;
}

CheckRecord CheckRecord::skipped(std::string id, std::string identity, std::string reason) {
  CheckRecord r;
  r.id = std::move(id);
  r.identity = std::move(identity);
  r.status = CheckStatus::skip;
  r.detail = std::move(reason);
  return r;
}

CheckRecord CheckRecord::errored(std::string id, std::string identity, std::string message) {
  CheckRecord r;
  r.id = std::move(id);
  r.identity = std::move(identity);
  r.status = CheckStatus::error;
  r.detail = std::move(message);
  return r;
}

ReportSummary Report::summary() const {
  ReportSummary s;
  for (const CheckRecord& c : checks) {
    switch (c.status) {
      case CheckStatus::pass: ++s.pass; break;
      case CheckStatus::fail: ++s.fail; break;
      case CheckStatus::skip: ++s.skip; break;
      case CheckStatus::error: ++s.error; break;
    }
  }
  return s;
}

bool Report::all_passed() const {
  const ReportSummary s = summary();
  return s.fail == 0 && s.error == 0;
}

const CheckRecord* find_check(const Report& r, const std::string& id) {
  for (const CheckRecord& c : r.checks) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

std::optional<ReportFormat> report_format_from_string(const std::string& word) {
  if (word == "json") return ReportFormat::json;
  if (word == "csv") return ReportFormat::csv;
  if (word == "text") return ReportFormat::text;
  return std::nullopt;
}

namespace {

nlohmann::json optional_complex_to_json(const std::optional<Complex>& z) {
  if (!z.has_value()) return nullptr;
  return complex_to_json(*z);
}

nlohmann::json table_to_json(const ContextTable& t) {
  nlohmann::json j;
  j["m_dim"] = t.m_basis.dim();
  j["nu_dim"] = t.nu_basis.dim();
  nlohmann::json cells = nlohmann::json::array();
  for (size_t m = 0; m < t.cells.size(); ++m) {
    for (size_t n = 0; n < t.cells[m].size(); ++n) {
      const ContextCell& c = t.cells[m][n];
      nlohmann::json cell;
      cell["m"] = m;
      cell["nu"] = n;
      cell["joint_probability"] = c.joint_probability;
      cell["conditional_probability"] = c.conditional_probability;
      cell["weak_value"] = optional_complex_to_json(c.weak_value);
      cells.push_back(std::move(cell));
    }
  }
  j["cells"] = std::move(cells);
  nlohmann::json rows = nlohmann::json::array();
  for (size_t m = 0; m < t.per_m.size(); ++m) {
    const ContextRow& r = t.per_m[m];
    nlohmann::json row;
    row["m"] = m;
    row["probability"] = r.probability;
    row["estimate"] = optional_complex_to_json(r.estimate);
    row["residual"] = r.residual.has_value() ? nlohmann::json(*r.residual) : nullptr;
    rows.push_back(std::move(row));
  }
  j["per_m"] = std::move(rows);
  return j;
}

std::string csv_double(const std::optional<double>& v) {
  if (!v.has_value()) return "";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", *v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

std::string short_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string short_complex(const Complex& z) {
  if (z.imag() == 0.0) return short_double(z.real());
  std::string out = short_double(z.real());
  out += z.imag() < 0 ? "-" : "+";
  out += short_double(std::abs(z.imag()));
  out += "i";
  return out;
}

}  // namespace

nlohmann::json report_to_json(const Report& r) {
  nlohmann::json j;
  j["name"] = r.scenario;
  nlohmann::json checks = nlohmann::json::array();
  for (const CheckRecord& c : r.checks) {
    nlohmann::json check;
    check["id"] = c.id;
    check["identity"] = c.identity;
    check["lhs"] = optional_complex_to_json(c.lhs);
    check["rhs"] = optional_complex_to_json(c.rhs);
    check["deviation"] = c.deviation.has_value() ? nlohmann::json(*c.deviation) : nullptr;
    check["tolerance"] = c.tolerance.has_value() ? nlohmann::json(*c.tolerance) : nullptr;
    check["status"] = to_string(c.status);
    check["detail"] = c.detail;
    checks.push_back(std::move(check));
  }
  j["checks"] = std::move(checks);
  const ReportSummary s = r.summary();
  j["summary"] = nlohmann::json{
      {"pass", s.pass}, {"fail", s.fail}, {"skip", s.skip}, {"error", s.error}, {"total", s.total()}};
  if (r.table.has_value()) j["table"] = table_to_json(*r.table);
  return j;
}

std::string context_table_text(const ContextTable& t) {
  std::ostringstream out;
  out << "context table (" << t.m_basis.dim() << " outcomes x " << t.nu_basis.dim()
      << " reference outcomes)\n";
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%4s %4s %14s %14s %24s\n", "m", "nu", "joint", "conditional",
                "weak value");
  out << buf;
  for (size_t m = 0; m < t.cells.size(); ++m) {
    for (size_t n = 0; n < t.cells[m].size(); ++n) {
      const ContextCell& c = t.cells[m][n];
      std::snprintf(buf, sizeof(buf), "%4zu %4zu %14.8g %14.8g %24s\n", m, n, c.joint_probability,
                    c.conditional_probability,
                    c.weak_value.has_value() ? short_complex(*c.weak_value).c_str() : "undefined");
      out << buf;
    }
  }
  out << "per-outcome aggregates\n";
  std::snprintf(buf, sizeof(buf), "%4s %14s %24s %14s\n", "m", "P(m)", "estimate A(m)",
                "residual");
  out << buf;
  for (size_t m = 0; m < t.per_m.size(); ++m) {
    const ContextRow& r = t.per_m[m];
    std::snprintf(buf, sizeof(buf), "%4zu %14.8g %24s %14s\n", m, r.probability,
                  r.estimate.has_value() ? short_complex(*r.estimate).c_str() : "undefined",
                  r.residual.has_value() ? short_double(*r.residual).c_str() : "undefined");
    out << buf;
  }
  return out.str();
}

std::string emit_report(const Report& r, ReportFormat format) {
  switch (format) {
    case ReportFormat::json:
      return dump_json(report_to_json(r));
    case ReportFormat::csv: {
      std::string out = "scenario,check_id,identity,lhs_re,lhs_im,rhs_re,rhs_im,deviation,status\n";
      for (const CheckRecord& c : r.checks) {
        out += csv_field(r.scenario) + "," + csv_field(c.id) + "," + csv_field(c.identity) + ",";
        out += c.lhs.has_value() ? csv_double(c.lhs->real()) : "";
        out += ",";
        out += c.lhs.has_value() ? csv_double(c.lhs->imag()) : "";
        out += ",";
        out += c.rhs.has_value() ? csv_double(c.rhs->real()) : "";
        out += ",";
        out += c.rhs.has_value() ? csv_double(c.rhs->imag()) : "";
        out += ",";
        out += csv_double(c.deviation);
        out += ",";
        out += to_string(c.status);
        out += "\n";
      }
      return out;
    }
    case ReportFormat::text: {
      std::ostringstream out;
      out << "scenario: " << r.scenario << "\n";
      for (const CheckRecord& c : r.checks) {
        char head[64];
        std::snprintf(head, sizeof(head), "  %-5s %-36s", to_string(c.status), c.id.c_str());
        out << head;
        if (c.status == CheckStatus::pass || c.status == CheckStatus::fail) {
          if (c.lhs.has_value()) out << " lhs=" << short_complex(*c.lhs);
          if (c.rhs.has_value()) out << " rhs=" << short_complex(*c.rhs);
          if (c.deviation.has_value()) out << " dev=" << short_double(*c.deviation);
          if (c.tolerance.has_value()) out << " tol=" << short_double(*c.tolerance);
          if (!c.detail.empty()) out << "  (" << c.detail << ")";
        } else {
          out << " (" << c.detail << ")";
        }
        out << "\n";
      }
      const ReportSummary s = r.summary();
      out << "summary: " << s.pass << " pass, " << s.fail << " fail, " << s.skip << " skip, "
          << s.error << " error\n";
      if (r.table.has_value()) out << context_table_text(*r.table);
      return out.str();
    }
  }
  throw IoError("emit_report: unknown format");
}

}  // namespace cwv
