#pragma once

#include <map>
#include <string>

namespace qepi {

// Result of one inequality or identity verification. `margin` is the signed
// slack in the natural units of the check; the check passes iff
// margin >= -tolerance.
struct CheckReport {
  std::string name;
  std::string inputs;  // provenance: constructor names, seeds, parameters
  double margin = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::map<std::string, double> diagnostics;
};

inline CheckReport make_report(std::string name, std::string inputs,
                               double margin, double tolerance,
                               std::map<std::string, double> diagnostics = {}) {
  CheckReport r;
  r.name = std::move(name);
  r.inputs = std::move(inputs);
  r.margin = margin;
  r.tolerance = tolerance;
  r.passed = margin >= -tolerance;
  r.diagnostics = std::move(diagnostics);
  return r;
}

}  // namespace qepi
