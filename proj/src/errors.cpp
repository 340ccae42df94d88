#include "eitcorr/errors.hpp"

#include <sstream>

namespace eitcorr {

namespace {

std::string join(const std::vector<std::string>& issues) {
  std::ostringstream os;
  for (std::size_t i = 0; i < issues.size(); ++i) {
    if (i) os << "; ";
    os << issues[i];
  }
  return os.str();
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> issues)
    : std::runtime_error("invalid configuration: " + join(issues)), issues_(std::move(issues)) {}

void throw_if_invalid(const std::vector<std::string>& issues, const char* what) {
  if (!issues.empty()) throw std::invalid_argument(std::string(what) + ": " + join(issues));
}

}  // namespace eitcorr
