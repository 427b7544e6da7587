#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vapor {

/// Broad classification used by the command line runner to choose exit codes.
enum class ErrorCategory { Config, Numeric };

class Error : public std::runtime_error {
 public:
  Error(std::string kind, ErrorCategory category, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)), category_(category) {}

  std::string_view kind() const noexcept { return kind_; }
  ErrorCategory category() const noexcept { return category_; }

 private:
  std::string kind_;
  ErrorCategory category_;
};

#define VAPOR_DEFINE_ERROR(Name, Category)                             \
  class Name : public Error {                                          \
   public:                                                             \
    explicit Name(const std::string& what)                             \
        : Error(#Name, ErrorCategory::Category, what) {}               \
  }

VAPOR_DEFINE_ERROR(DegenerateSteadyState, Numeric);
VAPOR_DEFINE_ERROR(NoRoot, Numeric);
VAPOR_DEFINE_ERROR(BadGrid, Config);
VAPOR_DEFINE_ERROR(WrongSpace, Numeric);
VAPOR_DEFINE_ERROR(TableRange, Numeric);
VAPOR_DEFINE_ERROR(NotReached, Numeric);
VAPOR_DEFINE_ERROR(DegenerateImage, Numeric);
VAPOR_DEFINE_ERROR(IoError, Config);
VAPOR_DEFINE_ERROR(FormatError, Config);

#undef VAPOR_DEFINE_ERROR

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error("ParseError", ErrorCategory::Config, what),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

/// Carries every violated invariant, not just the first one found.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> violations)
      : Error("ValidationError", ErrorCategory::Config, join(violations)),
        violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& items) {
    std::string out = "invalid configuration:";
    for (const auto& item : items) out += "\n  " + item;
    return out;
  }

  std::vector<std::string> violations_;
};

}  // namespace vapor
