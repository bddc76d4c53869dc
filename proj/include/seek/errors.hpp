#ifndef SEEK_ERRORS_HPP
#define SEEK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace seek {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or out-of-contract input documents and arguments (CLI exit code 2).
class InputError : public Error {
public:
  explicit InputError(const std::string& msg) : Error(msg) {}
};

// Invalid or degenerate geometry (overlapping rooms, rooms too small, ...).
class GeometryError : public Error {
public:
  explicit GeometryError(const std::string& msg) : Error(msg) {}
};

// No path exists between the requested endpoints.
class NoPathError : public Error {
public:
  explicit NoPathError(const std::string& msg) : Error(msg) {}
};

// Operation called on an object in the wrong state (e.g. locations not sampled).
class StateError : public Error {
public:
  explicit StateError(const std::string& msg) : Error(msg) {}
};

// Iterative solver failed to reach the requested tolerance.
class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string& msg, double residual)
      : Error(msg), residual_(residual) {}
  double residual() const { return residual_; }

private:
  double residual_;
};

// The simulation contract was violated (e.g. commanded step into a wall).
class SimContractError : public Error {
public:
  explicit SimContractError(const std::string& msg) : Error(msg) {}
};

// No reachable free cell close enough to a confirmed candidate; the
// episode is marked as a failure.
class InspectUnreachableError : public Error {
public:
  explicit InspectUnreachableError(const std::string& msg) : Error(msg) {}
};

}  // namespace seek

#endif  // SEEK_ERRORS_HPP
