// Copyright 2026 The homcount Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace homcount {

/// Base class of every error raised by the library. The CLI maps these to
/// exit code 2 (data / validation failure).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates a mathematical precondition (not simple, not a tree, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Vertex index outside [0, n).
class IndexError : public Error {
 public:
  using Error::Error;
};

/// Length / shape mismatch between arguments.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Work guard exceeded (brute force, exact treewidth, DP tables).
class SizeError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input; carries the offending file and 1-based line.
class ParseError : public Error {
 public:
  ParseError(const std::string& file, std::size_t line, const std::string& what)
      : Error(file + ":" + std::to_string(line) + ": " + what), file_(file), line_(line) {}

  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

/// Same as ParseError but for structural problems (edge crossing graphs, ...).
class FormatError : public ParseError {
 public:
  using ParseError::ParseError;
};

}  // namespace homcount
