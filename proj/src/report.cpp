#include "qepi/report.hpp"

#include <cmath>
#include <cstdio>

namespace qepi {

ReportRow make_row(std::string suite, std::uint64_t seed, int trial,
                   const CheckReport& report, bool normative) {
  ReportRow row;
  row.suite = std::move(suite);
  row.check = report.name;
  row.seed = seed;
  row.trial = trial;
  row.margin = report.margin;
  row.tolerance = report.tolerance;
  row.passed = report.passed;
  row.normative = normative;
  row.inputs = report.inputs;
  row.diagnostics = report.diagnostics;
  return row;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  // shortest representation that round-trips
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    if (back == v) break;
  }
  return buf;
}

namespace {

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 4);
  for (char c : s) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::string json_number(double v) {
  // JSON has no nan/inf literals
  if (!std::isfinite(v)) return "null";
  return format_double(v);
}

std::string diagnostics_json(const ReportRow& row) {
  std::string j = "{\"inputs\":\"" + json_escape(row.inputs) + "\"";
  j += ",\"normative\":";
  j += row.normative ? "true" : "false";
  for (const auto& [key, value] : row.diagnostics) {
    j += ",\"" + json_escape(key) + "\":" + json_number(value);
  }
  j += "}";
  return j;
}

std::string csv_quote(const std::string& field) {
  std::string out = "\"";
  for (char c : field) {
    out += c;
    if (c == '"') out += '"';
  }
  out += '"';
  return out;
}

}  // namespace

void write_csv(std::ostream& out, const ReportHeader& header,
               const std::vector<ReportRow>& rows) {
  for (const auto& [key, value] : header) {
    out << "# " << key << "=" << value << "\n";
  }
  out << "suite,check,seed,trial,margin,tolerance,passed,diagnostics\n";
  for (const ReportRow& row : rows) {
    out << row.suite << ',' << row.check << ',' << row.seed << ','
        << row.trial << ',' << format_double(row.margin) << ','
        << format_double(row.tolerance) << ','
        << (row.passed ? "true" : "false") << ','
        << csv_quote(diagnostics_json(row)) << "\n";
  }
}

void write_jsonl(std::ostream& out, const ReportHeader& header,
                 const std::vector<ReportRow>& rows) {
  out << "{\"header\":{";
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out << ',';
    out << '"' << json_escape(header[i].first) << "\":\""
        << json_escape(header[i].second) << '"';
  }
  out << "}}\n";
  for (const ReportRow& row : rows) {
    out << "{\"suite\":\"" << json_escape(row.suite) << "\",\"check\":\""
        << json_escape(row.check) << "\",\"seed\":" << row.seed
        << ",\"trial\":" << row.trial
        << ",\"margin\":" << json_number(row.margin)
        << ",\"tolerance\":" << json_number(row.tolerance)
        << ",\"passed\":" << (row.passed ? "true" : "false")
        << ",\"diagnostics\":" << diagnostics_json(row) << "}\n";
  }
}

}  // namespace qepi
