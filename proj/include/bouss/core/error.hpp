#pragma once

#include <stdexcept>
#include <string>

namespace bouss {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed configuration text. `line` is 1-based, 0 when not applicable.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& msg, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// A configuration value that parsed but violates an invariant.
class ValidationError : public Error {
 public:
  ValidationError(const std::string& key, const std::string& msg)
      : Error("invalid '" + key + "': " + msg), key_(key) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

// Hyperbolic step exceeded Courant number 1; the caller may retry with a smaller dt.
class StepRejected : public Error {
 public:
  StepRejected(double courant)
      : Error("step rejected, observed Courant number " + std::to_string(courant)),
        courant_(courant) {}
  double courant() const { return courant_; }

 private:
  double courant_;
};

}  // namespace bouss
