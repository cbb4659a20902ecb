#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace durion {

/// Base class of every failure the library reports.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A value left its domain: negative result, zero denominator, scalar out of
/// range, voice longer than its completion target, and the like.
struct domain_error : error {
  using error::error;
};

/// Indeterminate arithmetic form (inf - inf, 0 * inf, inf / inf).
struct undefined_form_error : domain_error {
  using domain_error::domain_error;
};

/// Malformed input text. line is 1-based; 0 means no position applies.
class parse_error : public error {
 public:
  explicit parse_error(const std::string& message, std::size_t line = 0)
      : error(line ? "line " + std::to_string(line) + ": " + message : message),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Input is well formed but uses a construct outside the supported subset.
class unsupported_error : public error {
 public:
  explicit unsupported_error(const std::string& feature, std::size_t line = 0)
      : error(line ? "line " + std::to_string(line) +
                         ": unsupported feature: " + feature
                   : "unsupported feature: " + feature),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace durion
