#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qepi/report.hpp"

namespace qepi {

// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "QEPI_REPORT_DIR";

struct RunConfig {
  std::string suite = "all";
  std::uint64_t seed = 0;
  int trials = 20;
  int cutoff = 16;  // per-mode Fock dimension for random-state ensembles
  std::vector<double> lambda_grid = {0.25, 0.5, 0.75};
  std::vector<double> t_grid = {0.25, 0.5, 1.0};
  // Per-check tolerance overrides, keyed by check name.
  std::map<std::string, double> tolerances;
  std::string out;             // empty: <output dir>/report-<suite>.<ext>
  std::string format = "csv";  // csv | jsonl
};

const std::vector<std::string>& suite_names();

// key=value per line, '#' comments; unknown keys raise ConfigError with the
// line number. Tolerance overrides are spelled tol.<check>=<value>.
RunConfig parse_config_file(const std::string& path);

// Throws ConfigError on any invariant violation.
void validate_config(const RunConfig& cfg);

std::string default_output_dir();
std::string output_path(const RunConfig& cfg);

// Executes the named suite (or all of them), writes the report, and returns
// the process exit status: 0 if every normative row passed, 1 otherwise.
// Configuration problems throw ConfigError (exit status 2 at the CLI); a
// partial report is flushed if a trial aborts mid-run.
int run_suite(const RunConfig& cfg);

// Rows only, no I/O; used by run_suite and by tests.
std::vector<ReportRow> collect_rows(const RunConfig& cfg);

// Deterministic text summary of a state-constructor spec: moments, entropy,
// symplectic spectrum of the gaussification, tail mass. Gaussian
// constructors additionally report the exact phase-space backend.
std::string describe_state(const std::string& spec_text, int cutoff = 24);

}  // namespace qepi
