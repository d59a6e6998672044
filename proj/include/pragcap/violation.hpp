#pragma once

#include <string>
#include <vector>

namespace pragcap {

/// One finding from a validation pass. Findings with note=true are
/// informational and do not make the validated object invalid.
struct Violation {
  std::string code;
  std::string message;
  bool note = false;
};

inline std::size_t error_count(const std::vector<Violation>& vs) {
  std::size_t n = 0;
  for (const auto& v : vs)
    if (!v.note) ++n;
  return n;
}

}  // namespace pragcap
