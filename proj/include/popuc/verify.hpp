#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace popuc::verify {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

struct Options {
  /// Run only the criterion with this id, or those whose name starts with this prefix.
  std::optional<std::string> only;
  /// Replace every accuracy tolerance (forces failures when absurdly small).
  std::optional<double> tolerance;
  unsigned seed = 20240917u;
};

const std::vector<std::string>& criterion_names();

/// Runs the acceptance criteria; writes one line per criterion to `log` if given.
std::vector<CriterionResult> run(const Options& opts, std::ostream* log = nullptr);

std::string format(const CriterionResult& r);

}  // namespace popuc::verify
