#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace easter {

// Base of everything the library throws on purpose. Thrown directly for
// file-system failures.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid scenario / weights / geometry supplied by the user.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message, std::string field = {})
      : Error(field.empty() ? message : field + ": " + message),
        message_(message),
        field_(std::move(field)) {}

  const std::string& message() const { return message_; }
  // JSON pointer of the offending scenario field; empty when unknown.
  const std::string& field() const { return field_; }

 private:
  std::string message_;
  std::string field_;
};

// A caller broke a documented precondition (negative prediction time,
// non-increasing timestamps, ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

// Internal defect: a structural guarantee did not hold.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace easter
