#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace jacalg {

/// Operands live in different ambient variable counts, or an index is out of range.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Arity of a map does not match its arguments or slot index.
class ArityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed textual input. `position()` is a 0-based character offset.
class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::invalid_argument(what + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// An expansion or enumeration would exceed its configured budget.
class ResourceError : public std::runtime_error {
 public:
  ResourceError(const std::string& what, std::size_t requested)
      : std::runtime_error(what), requested_(requested) {}

  std::size_t requested() const noexcept { return requested_; }

 private:
  std::size_t requested_;
};

/// A search window is too small to certify a result; `required()` is the
/// smallest acceptable per-slot degree bound.
class WindowError : public std::invalid_argument {
 public:
  WindowError(const std::string& what, long required)
      : std::invalid_argument(what), required_(required) {}

  long required() const noexcept { return required_; }

 private:
  long required_;
};

/// Checked integer arithmetic overflowed.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

}  // namespace jacalg
