#pragma once

#include <stdexcept>
#include <string>

namespace fink {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input (text formats, parameters outside preconditions).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Two elements were summed whose supports are not ordered f < g.
class OverlapError : public Error {
 public:
  using Error::Error;
};

class LevelMismatch : public Error {
 public:
  using Error::Error;
};

/// A node, cardinality or digit budget ran out. Never means "no answer exists".
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// The available width is smaller than what a construction needs.
class InsufficientWidth : public Error {
 public:
  InsufficientWidth(const std::string& what, std::string plan = {})
      : Error(what), plan_(std::move(plan)) {}
  const std::string& plan() const { return plan_; }

 private:
  std::string plan_;
};

/// Internal consistency sentinel: a constructed object failed re-verification.
class VerificationFailed : public Error {
 public:
  using Error::Error;
};

/// Sentinel for searches that a theorem guarantees to succeed.
class SearchFailed : public Error {
 public:
  using Error::Error;
};

class UnknownName : public Error {
 public:
  using Error::Error;
};

}  // namespace fink
