#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace eitcorr {

/// Raised when a computation produces non-finite or otherwise unusable
/// numbers (diverging fields, zero-variance records, missing crossings).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by config ingestion. Carries every violation found, not just the
/// first one.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> issues);

  const std::vector<std::string>& issues() const noexcept { return issues_; }

 private:
  std::vector<std::string> issues_;
};

/// Throws std::invalid_argument listing all `issues` if non-empty.
void throw_if_invalid(const std::vector<std::string>& issues, const char* what);

}  // namespace eitcorr
