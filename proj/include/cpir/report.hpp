// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

namespace cpir {

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Named pass/fail checks; failures are data, not exceptions.
struct Report {
  std::vector<Check> checks;

  void add(std::string name, bool pass, std::string detail = {}) {
    checks.push_back({std::move(name), pass, std::move(detail)});
  }
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  const Check* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
  bool passed(const std::string& name) const {
    const Check* c = find(name);
    return c != nullptr && c->pass;
  }
};

}  // namespace cpir
