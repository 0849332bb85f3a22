#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "phonoscat/materials.hpp"

namespace phonoscat::app {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Oracle-equivalence and scaling-slope checks on built-in devices.
std::vector<CheckResult> run_selftest(const MaterialDatabase& db);

/// Prints one PASS/FAIL line per check and returns the exit code.
int selftest_command(std::ostream& out, std::ostream& err);

}  // namespace phonoscat::app
