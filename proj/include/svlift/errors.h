#pragma once

#include <stdexcept>
#include <string>

namespace svlift {

/// Argument outside the mathematical domain of an operation (e.g. t <= 0 for a singular kernel).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A truncated integral whose neglected part exceeds the requested tolerance.
class TailError : public std::runtime_error {
 public:
  TailError(const std::string& what, double value, double tail)
      : std::runtime_error(what), value_(value), tail_(tail) {}
  double value() const { return value_; }
  double tail() const { return tail_; }

 private:
  double value_;
  double tail_;
};

/// Factor values left the representable range during time stepping.
class ExplosionError : public std::runtime_error {
 public:
  ExplosionError(const std::string& what, double time)
      : std::runtime_error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

/// Fixed-point iteration that stopped contracting.
class ContractionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent experiment configuration. Carries the 1-based source line (0 if unknown).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace svlift
