#pragma once

#include <stdexcept>
#include <string>

namespace fairgap {

// Base class for all toolkit errors. Subclasses exist so callers (and the CLI
// exit-code mapping) can distinguish input problems from numerical failures.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// --- dataset / instance validation -----------------------------------------

class EmptyDatasetError : public Error {
 public:
  EmptyDatasetError() : Error("dataset is empty") {}
};

class DimensionMismatchError : public Error {
 public:
  explicit DimensionMismatchError(std::size_t row)
      : Error("feature dimension mismatch at row " + std::to_string(row)), row(row) {}
  std::size_t row;
};

class NonBinaryLabelError : public Error {
 public:
  explicit NonBinaryLabelError(std::size_t row)
      : Error("label is not 0/1 at row " + std::to_string(row)), row(row) {}
  std::size_t row;
};

class InvalidInstanceError : public Error {
 public:
  explicit InvalidInstanceError(const std::string& msg) : Error("invalid instance: " + msg) {}
};

class GroupWithZeroMassError : public Error {
 public:
  explicit GroupWithZeroMassError(int group)
      : Error("group " + std::to_string(group) + " has zero mass"), group(group) {}
  int group;
};

// --- scores and losses ------------------------------------------------------

class UnknownSupportPointError : public Error {
 public:
  explicit UnknownSupportPointError(int x_id)
      : Error("table score has no value for x_id " + std::to_string(x_id)), x_id(x_id) {}
  int x_id;
};

class UnsupportedScoreVariantError : public Error {
 public:
  explicit UnsupportedScoreVariantError(const std::string& what)
      : Error("score variant not usable here: " + what) {}
};

class NonpositiveKappaError : public Error {
 public:
  NonpositiveKappaError() : Error("strong-convexity constant must be positive") {}
};

class NegativeExcessError : public Error {
 public:
  explicit NegativeExcessError(double value)
      : Error("excess risk is negative beyond tolerance: " + std::to_string(value)) {}
};

// --- gaps / bounds ----------------------------------------------------------

class ValueOutOfRangeError : public Error {
 public:
  explicit ValueOutOfRangeError(std::size_t index)
      : Error("score value out of [0,1] at index " + std::to_string(index)), index(index) {}
  std::size_t index;
};

class EmptyBucketAllError : public Error {
 public:
  explicit EmptyBucketAllError(int bucket)
      : Error("quantile bucket " + std::to_string(bucket) + " received no samples") {}
};

class DegenerateLabelError : public Error {
 public:
  DegenerateLabelError() : Error("Var[Y] = 0: label is degenerate") {}
};

class DegenerateGroupLabelError : public Error {
 public:
  explicit DegenerateGroupLabelError(int group)
      : Error("group " + std::to_string(group) + " has base rate 0 or 1"), group(group) {}
  int group;
};

class NotSquareLossError : public Error {
 public:
  NotSquareLossError() : Error("operation is defined for square loss only") {}
};

class MissingExcessRiskError : public Error {
 public:
  MissingExcessRiskError() : Error("bound requires an excess risk but none was provided") {}
};

// --- training / synthetic constructions ------------------------------------

class NonFiniteFeatureError : public Error {
 public:
  explicit NonFiniteFeatureError(std::size_t row)
      : Error("non-finite feature at row " + std::to_string(row)), row(row) {}
  std::size_t row;
};

class DivergenceDetectedError : public Error {
 public:
  DivergenceDetectedError() : Error("training loss increased for too many consecutive steps") {}
};

class EmptySampleError : public Error {
 public:
  EmptySampleError() : Error("least-squares fit needs at least one sample") {}
};

class NonUnitThetaError : public Error {
 public:
  NonUnitThetaError() : Error("direction must be unit-norm") {}
};

class SpanViolationError : public Error {
 public:
  SpanViolationError() : Error("attribute direction lies in span of theta-hat; fibers degenerate") {}
};

}  // namespace fairgap
