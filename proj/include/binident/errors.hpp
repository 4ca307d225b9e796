#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace binident {

// Base error carrying a machine-readable category. The CLI reports the
// category on stderr and tests key off it, so the strings are stable.
class Error : public std::runtime_error {
 public:
  Error(std::string category, const std::string& message)
      : std::runtime_error(message), category_(std::move(category)) {}
  const std::string& category() const { return category_; }

 private:
  std::string category_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message) : Error("config", message) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& message) : Error("config_parse", message) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& message) : Error("domain", message) {}
};

class FitError : public Error {
 public:
  explicit FitError(const std::string& message) : Error("fit_window", message) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message) : Error("io", message) {}
};

// One violated configuration rule. `code` names the rule, `message` says
// what to fix.
struct ValidationIssue {
  std::string code;
  std::string message;
};

// Thrown by the config validator with the complete list of violations, not
// just the first one found.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<ValidationIssue> issues)
      : Error("config_validation", join(issues)), issues_(std::move(issues)) {}

  const std::vector<ValidationIssue>& issues() const { return issues_; }

  bool has(const std::string& code) const {
    for (const auto& issue : issues_) {
      if (issue.code == code) return true;
    }
    return false;
  }

 private:
  static std::string join(const std::vector<ValidationIssue>& issues) {
    std::string out = "invalid configuration:";
    for (const auto& issue : issues) {
      out += "\n  [" + issue.code + "] " + issue.message;
    }
    return out;
  }

  std::vector<ValidationIssue> issues_;
};

}  // namespace binident
