#pragma once

#include <stdexcept>
#include <string>

namespace treefac {

/// Base class for every domain error. `kind()` is the stable error name
/// reported by the command-line front-end.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define TREEFAC_DEFINE_ERROR(Name)                                       \
  class Name : public Error {                                            \
   public:                                                               \
    explicit Name(const std::string& message) : Error(#Name, message) {} \
  }

TREEFAC_DEFINE_ERROR(StructureError);
TREEFAC_DEFINE_ERROR(DepthBudgetExceeded);
TREEFAC_DEFINE_ERROR(Exhausted);
TREEFAC_DEFINE_ERROR(IndexOutOfRange);
TREEFAC_DEFINE_ERROR(AllOpenCircuit);
TREEFAC_DEFINE_ERROR(Inconclusive);
TREEFAC_DEFINE_ERROR(NotBiased);
TREEFAC_DEFINE_ERROR(Mismatch);
TREEFAC_DEFINE_ERROR(InvalidArgument);

#undef TREEFAC_DEFINE_ERROR

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error("ParseError", "line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace treefac
