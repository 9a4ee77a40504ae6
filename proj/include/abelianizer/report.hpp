#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace abelianizer {

struct Violation {
  std::string key;
  std::string expected;
  std::string actual;
};

/// Outcome of one consistency check. `pass()` iff no violations.
struct CheckReport {
  std::string name;
  std::size_t instances = 0;
  std::vector<Violation> violations;
  std::vector<std::string> notes;

  bool pass() const { return violations.empty(); }

  void fail(std::string key, std::string expected, std::string actual) {
    violations.push_back({std::move(key), std::move(expected), std::move(actual)});
  }

  void merge(const CheckReport& o) {
    instances += o.instances;
    violations.insert(violations.end(), o.violations.begin(), o.violations.end());
    notes.insert(notes.end(), o.notes.begin(), o.notes.end());
  }
};

inline void to_json(nlohmann::json& j, const Violation& v) {
  j = {{"key", v.key}, {"expected", v.expected}, {"actual", v.actual}};
}

}  // namespace abelianizer
