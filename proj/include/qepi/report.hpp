#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "qepi/check_report.hpp"

namespace qepi {

// One report row. Column order in CSV is fixed:
// suite, check, seed, trial, margin, tolerance, passed, diagnostics.
// The diagnostics column is a JSON object carrying the input provenance,
// the normative flag and all numeric diagnostics.
struct ReportRow {
  std::string suite;
  std::string check;
  std::uint64_t seed = 0;
  int trial = 0;
  double margin = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  bool normative = true;
  std::string inputs;
  std::map<std::string, double> diagnostics;
};

ReportRow make_row(std::string suite, std::uint64_t seed, int trial,
                   const CheckReport& report, bool normative = true);

// Deterministic shortest round-trip decimal rendering of a double.
std::string format_double(double v);

// Header metadata (rendered as '#' comment lines in CSV, or a single leading
// JSON object in JSON-lines).
using ReportHeader = std::vector<std::pair<std::string, std::string>>;

void write_csv(std::ostream& out, const ReportHeader& header,
               const std::vector<ReportRow>& rows);
void write_jsonl(std::ostream& out, const ReportHeader& header,
                 const std::vector<ReportRow>& rows);

}  // namespace qepi
