#pragma once

#include <stdexcept>
#include <string>

namespace featrange {

struct SourcePos {
  int line = 0;
  int col = 0;
};

class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& msg)
      : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(SourcePos pos, const std::string& msg, std::string expected = {})
      : Error("SyntaxError", std::to_string(pos.line) + ":" + std::to_string(pos.col) + ": " + msg +
                                 (expected.empty() ? "" : " (expected " + expected + ")")),
        pos_(pos),
        expected_(std::move(expected)) {}
  SourcePos pos() const { return pos_; }
  const std::string& expected() const { return expected_; }

 private:
  SourcePos pos_;
  std::string expected_;
};

#define FEATRANGE_ERROR(Name)                                             \
  class Name : public Error {                                             \
   public:                                                                \
    explicit Name(const std::string& msg) : Error(#Name, msg) {}          \
  };

FEATRANGE_ERROR(SemanticError)
FEATRANGE_ERROR(MissingBinding)
FEATRANGE_ERROR(UnsupportedEvent)
FEATRANGE_ERROR(ValidationError)
FEATRANGE_ERROR(UnboundedInvariant)
FEATRANGE_ERROR(NonRectangularFlow)
FEATRANGE_ERROR(DimensionMismatch)
FEATRANGE_ERROR(BoundViolation)
FEATRANGE_ERROR(ResourceExhausted)
FEATRANGE_ERROR(NoMatch)

#undef FEATRANGE_ERROR

}  // namespace featrange
