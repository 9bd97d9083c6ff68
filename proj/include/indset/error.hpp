// Copyright 2026 The indset Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace indset {

// Base of every error raised by the library. Subclasses name the failure
// condition; callers that only care about "something went wrong" catch this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class CapExceeded : public Error {
 public:
  using Error::Error;
};

class ArityMismatch : public Error {
 public:
  using Error::Error;
};

class KindMismatch : public Error {
 public:
  using Error::Error;
};

// Query language errors.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t pos, const std::string& msg)
      : Error("syntax error at " + std::to_string(pos) + ": " + msg), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

class TypeError : public Error {
 public:
  using Error::Error;
};

class RecursionError : public Error {
 public:
  using Error::Error;
};

// Solver process errors.
class SolverNotFound : public Error {
 public:
  using Error::Error;
};

class ProtocolError : public Error {
 public:
  ProtocolError(const std::string& msg, std::string raw)
      : Error(msg), raw_(std::move(raw)) {}
  const std::string& raw_output() const { return raw_; }

 private:
  std::string raw_;
};

class SolverFailure : public Error {
 public:
  SolverFailure(const std::string& msg, std::string script_path = {})
      : Error(script_path.empty() ? msg : msg + " (script: " + script_path + ")"),
        script_path_(std::move(script_path)) {}
  const std::string& script_path() const { return script_path_; }

 private:
  std::string script_path_;
};

// Downgrade runtime errors.
class DuplicateName : public Error {
 public:
  using Error::Error;
};

class UnknownQuery : public Error {
 public:
  using Error::Error;
};

class UnknownSecret : public Error {
 public:
  using Error::Error;
};

class PolicyViolation : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace indset
