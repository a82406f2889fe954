#pragma once

#include <stdexcept>
#include <string>

namespace gedprog {

/// Failure classes surfaced by the CLI as process exit codes.
enum class ErrorClass : int {
  usage = 2,
  data = 3,
  backend = 4,
  internal = 5,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, const std::string& what)
      : std::runtime_error(what), class_(cls) {}

  ErrorClass error_class() const noexcept { return class_; }
  int exit_code() const noexcept { return static_cast<int>(class_); }

 private:
  ErrorClass class_;
};

/// Malformed or inconsistent input files.
class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ErrorClass::data, what) {}
};

/// Candidate generator could not be reached or kept failing.
class BackendError : public Error {
 public:
  explicit BackendError(const std::string& what)
      : Error(ErrorClass::backend, what) {}
};

/// The sandbox itself failed (fork/exec/pipe), as opposed to the program
/// under evaluation misbehaving.
class RunnerError : public Error {
 public:
  explicit RunnerError(const std::string& what)
      : Error(ErrorClass::internal, what) {}
};

}  // namespace gedprog
