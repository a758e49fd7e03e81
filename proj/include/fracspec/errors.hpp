#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracspec {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class GridMismatch : public Error {
 public:
  GridMismatch() : Error("fields live on different grids") {}
};

class GridTooLarge : public Error {
 public:
  GridTooLarge(std::size_t points, std::size_t cap)
      : Error("grid has " + std::to_string(points) +
              " points, above the quadratic-cost cap of " + std::to_string(cap)),
        points(points),
        cap(cap) {}
  std::size_t points;
  std::size_t cap;
};

class GridTooLargeForOracle : public Error {
 public:
  GridTooLargeForOracle(std::size_t points, std::size_t cap)
      : Error("dense oracle refused: " + std::to_string(points) +
              " unknowns exceeds cap " + std::to_string(cap)) {}
};

class DilationOutOfBox : public Error {
 public:
  DilationOutOfBox(double t, double wrapped_fraction)
      : Error("dilation t=" + std::to_string(t) + " pushes a mass fraction " +
              std::to_string(wrapped_fraction) + " outside the box"),
        t(t),
        wrapped_fraction(wrapped_fraction) {}
  double t;
  double wrapped_fraction;
};

class TailViolation : public Error {
 public:
  using Error::Error;
};

class DepthViolation : public Error {
 public:
  using Error::Error;
};

class ZeroField : public Error {
 public:
  ZeroField() : Error("operation undefined on the zero field") {}
};

class NoConvergence : public Error {
 public:
  NoConvergence(int iterations, double best_residual)
      : Error("eigensolver did not converge after " + std::to_string(iterations) +
              " iterations (best residual " + std::to_string(best_residual) + ")"),
        iterations(iterations),
        best_residual(best_residual) {}
  int iterations;
  double best_residual;
};

class KTooLarge : public Error {
 public:
  using Error::Error;
};

class EmptyConstraint : public Error {
 public:
  EmptyConstraint()
      : Error("weight 1-g vanishes identically; the constraint set is empty") {}
};

class NotConverged : public Error {
 public:
  NotConverged(double residual, double tol)
      : Error("eigenpair residual " + std::to_string(residual) + " exceeds tolerance " +
              std::to_string(tol)) {}
};

class DegeneratePair : public Error {
 public:
  DegeneratePair(double gap)
      : Error("eigenvalues differ by only " + std::to_string(gap) +
              "; orthogonality is basis-dependent") {}
};

class NotNodal : public Error {
 public:
  using Error::Error;
};

class DenominatorVanishes : public Error {
 public:
  DenominatorVanishes(double t) : Error("path normalization vanishes at t=" + std::to_string(t)) {}
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
        line(line) {}
  std::size_t line;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> problems)
      : Error(join(problems)), problems(std::move(problems)) {}
  std::vector<std::string> problems;

 private:
  static std::string join(const std::vector<std::string>& items) {
    std::string out = "invalid configuration:";
    for (const auto& item : items) out += "\n  - " + item;
    return out;
  }
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace fracspec
