#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace cgeem {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data does not match the channel schema (missing mandatory channel,
/// unknown unit, bad header).
class SchemaError : public Error {
 public:
  explicit SchemaError(std::string channel, const std::string& what)
      : Error(what), channel_(std::move(channel)) {}
  const std::string& channel() const noexcept { return channel_; }

 private:
  std::string channel_;
};

/// Malformed file content: non-monotone time, unparsable number, wrong
/// column count.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// A channel has a hole longer than twice its native sample period.
class GapError : public Error {
 public:
  GapError(std::string channel, double t_begin, double t_end, const std::string& what)
      : Error(what), channel_(std::move(channel)), t_begin_(t_begin), t_end_(t_end) {}
  const std::string& channel() const noexcept { return channel_; }
  double gap_begin() const noexcept { return t_begin_; }
  double gap_end() const noexcept { return t_end_; }

 private:
  std::string channel_;
  double t_begin_;
  double t_end_;
};

/// Invalid configuration or argument (precondition violation).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Iteration failed to converge, matrix lost definiteness, etc.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// TSFC <= 0: the thrust model is singular at the requested parameters.
class SingularModelError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// A single estimator step could not be completed. Carries the index of the
/// failing sample within the segment.
class StepError : public NumericError {
 public:
  StepError(std::size_t step, const std::string& what)
      : NumericError(what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// Statistic undefined for the input (zero mean for CV, zero variance for
/// correlation).
class DegenerateError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace cgeem
