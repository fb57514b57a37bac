#pragma once

#include <stdexcept>
#include <string>

namespace pblab {

/// Raised when the grid is too coarse to host a requested construction.
/// Carries an estimate of the node count per axis that would suffice.
class resolution_error : public std::runtime_error {
public:
  resolution_error(const std::string& what, int suggested_nx)
      : std::runtime_error(what), suggested_nx_(suggested_nx) {}

  int suggested_nx() const { return suggested_nx_; }

private:
  int suggested_nx_;
};

/// Raised when evaluating an expression produces a non-finite value.
class eval_error : public std::runtime_error {
public:
  eval_error(const std::string& what, double x, double y)
      : std::runtime_error(what), x_(x), y_(y) {}

  double x() const { return x_; }
  double y() const { return y_; }

private:
  double x_, y_;
};

/// Raised by the expression parser; `offset` is the 0-based position in the
/// input text where the problem was detected.
class parse_error : public std::runtime_error {
public:
  parse_error(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (at offset " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::size_t offset() const { return offset_; }

private:
  std::size_t offset_;
};

}  // namespace pblab
