#pragma once

#include <string>
#include <vector>

namespace shapedecomp {

// Outcome of a batch of named identity checks.
struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct Report {
  std::vector<CheckResult> checks;

  void add(std::string name, bool pass, std::string detail = {}) {
    checks.push_back({std::move(name), pass, std::move(detail)});
  }
  void merge(const Report& other) { checks.insert(checks.end(), other.checks.begin(), other.checks.end()); }
  bool all_pass() const noexcept {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

}  // namespace shapedecomp
