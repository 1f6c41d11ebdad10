#include "chaineval/errors.hpp"

namespace chaineval {

ValidationError::ValidationError(std::vector<std::string> findings)
    : std::runtime_error(join(findings)), findings_(std::move(findings)) {}

ValidationError::ValidationError(std::string finding)
    : ValidationError(std::vector<std::string>{std::move(finding)}) {}

std::string ValidationError::join(const std::vector<std::string>& findings) {
  if (findings.empty()) {
    return "validation failed";
  }
  std::string msg = findings.front();
  for (std::size_t i = 1; i < findings.size(); ++i) {
    msg += "; ";
    msg += findings[i];
  }
  return msg;
}

}  // namespace chaineval
