#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace subangle {

/// A mathematical precondition of an operation does not hold.
class MathError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Jacobi sweeps were exhausted before the off-diagonal mass vanished.
class ConvergenceError : public MathError {
 public:
  explicit ConvergenceError(int sweeps)
      : MathError("sym_eigen: no convergence after " + std::to_string(sweeps) +
                  " sweeps"),
        sweeps_(sweeps) {}

  int sweeps() const noexcept { return sweeps_; }

 private:
  int sweeps_;
};

/// Malformed matrix input. `line()` is 1-based, 0 when not line specific.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(line == 0 ? what
                                     : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace subangle
