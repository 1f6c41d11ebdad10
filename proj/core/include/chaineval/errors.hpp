#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace chaineval {

// File missing, unreadable, or unwritable. Kept distinct from content
// problems so the CLI can map it to its own exit code.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input bytes are not the expected format (bad JSON, malformed CSV row).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Structurally well-formed input that violates a documented invariant.
// Carries every violation found, not just the first.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> findings);
  explicit ValidationError(std::string finding);

  const std::vector<std::string>& findings() const { return findings_; }

 private:
  static std::string join(const std::vector<std::string>& findings);

  std::vector<std::string> findings_;
};

}  // namespace chaineval
