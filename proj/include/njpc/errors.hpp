#pragma once

#include <stdexcept>
#include <string>

namespace njpc {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InfeasibleScheme : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// Non-binary indicator, negative or decreasing failure time.
class InvalidSample : public Error {
 public:
  using Error::Error;
};

class NonPositiveParams : public Error {
 public:
  using Error::Error;
};

class InvalidScale : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

// Argument outside its documented domain (confidence level, count, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class OracleTooLarge : public Error {
 public:
  using Error::Error;
};

class DegenerateConditioning : public Error {
 public:
  using Error::Error;
};

class InsufficientSurvivors : public Error {
 public:
  using Error::Error;
};

// Thrown by fit() when every observed failure came from one population.
class MleDoesNotExist : public Error {
 public:
  MleDoesNotExist(int failures_pop1, int k)
      : Error("MLE does not exist: m_k = " + std::to_string(failures_pop1) +
              " (need 1 <= m_k <= " + std::to_string(k - 1) + ")"),
        failures_pop1_(failures_pop1) {}

  int failures_pop1() const noexcept { return failures_pop1_; }

 private:
  int failures_pop1_;
};

class ConfigError : public Error {
 public:
  ConfigError(int line, std::string key, const std::string& what)
      : Error("line " + std::to_string(line) + ": " +
              (key.empty() ? std::string() : "key '" + key + "': ") + what),
        line_(line),
        key_(std::move(key)) {}

  int line() const noexcept { return line_; }
  const std::string& key() const noexcept { return key_; }

 private:
  int line_;
  std::string key_;
};

}  // namespace njpc
