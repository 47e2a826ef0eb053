#pragma once

#include <stdexcept>
#include <string>

namespace pmean {

/// Base of every library error. `exit_code()` is the stable CLI exit status.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what, int code = 1) : std::runtime_error(what), code_(code) {}
  int exit_code() const noexcept { return code_; }

 private:
  int code_;
};

/// Malformed input: bad model file, out-of-range argument.
class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error(what, 1) {}
};

/// A grid or sieve range exceeds the configured bound.
class BoundExceeded : public Error {
 public:
  explicit BoundExceeded(const std::string& what) : Error(what, 2) {}
};

/// A requested precision cannot be reached.
class PrecisionUnreachable : public Error {
 public:
  PrecisionUnreachable(const std::string& constant, const std::string& what, double achievable = 0.0)
      : Error(constant + ": " + what, 3), constant_(constant), achievable_(achievable) {}
  const std::string& constant() const noexcept { return constant_; }
  double achievable() const noexcept { return achievable_; }

 private:
  std::string constant_;
  double achievable_;
};

/// A checkpoint grid is malformed (unsorted, empty, too many points).
class BadGrid : public Error {
 public:
  explicit BadGrid(const std::string& what) : Error(what, 2) {}
};

class UnknownCheck : public Error {
 public:
  explicit UnknownCheck(const std::string& name) : Error("unknown check: " + name, 4) {}
};

class IllConditioned : public Error {
 public:
  IllConditioned(const std::string& what, double condition)
      : Error(what, 5), condition_(condition) {}
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

}  // namespace pmean
