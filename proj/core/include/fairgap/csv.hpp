#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fairgap/dataset.hpp"
#include "fairgap/errors.hpp"

namespace fairgap {

// Errors raised by ingestion; the CLI maps these to exit code 2.
class CsvError : public Error {
 public:
  explicit CsvError(const std::string& msg) : Error(msg) {}
};

class MissingColumnError : public CsvError {
 public:
  explicit MissingColumnError(const std::string& name)
      : CsvError("missing column: " + name) {}
};

class ParseError : public CsvError {
 public:
  ParseError(std::size_t row, const std::string& col, const std::string& value)
      : CsvError("cannot parse value \"" + value + "\" in column " + col + " at row " +
                 std::to_string(row)) {}
};

// A column mismatch between a trained model's encoder and the audited data;
// mapped to exit code 3 by the CLI.
class EncoderMismatchError : public Error {
 public:
  explicit EncoderMismatchError(const std::string& msg)
      : Error("model/data mismatch: " + msg) {}
};

enum class ColumnKind { Numeric, Categorical };

struct ColumnSpec {
  std::string name;
  ColumnKind kind = ColumnKind::Numeric;
};

struct CsvSchema {
  std::string label_col;
  std::string attribute_col;
  std::optional<std::string> score_col;
  std::vector<ColumnSpec> feature_cols;
  char delimiter = ',';
};

// One-hot encoder state: per categorical column, the category list in order
// of first appearance. Numeric columns occupy one slot with an empty list.
struct EncoderState {
  std::vector<ColumnSpec> columns;
  std::vector<std::vector<std::string>> categories;  // parallel to columns
  int encoded_dim() const;
};

struct LoadedCsv {
  LabeledDataset dataset;
  std::vector<double> scores;  // empty when schema.score_col is absent
  EncoderState encoder;
};

// Parses an RFC-4180-style CSV (quoted fields, embedded delimiters/newlines,
// doubled quotes) with a required header.
std::vector<std::vector<std::string>> parse_csv(std::istream& in, char delimiter = ',');

// Loads and encodes a CSV file per the schema. Categorical features one-hot
// encoded by first appearance; attribute densified; optional score column
// validated to [0, 1]. Throws CsvError subclasses.
LoadedCsv load_csv(const std::string& path, const CsvSchema& schema);

// Re-encodes rows under a frozen encoder (audit with a trained model). Unseen
// categories or missing columns throw EncoderMismatchError.
LoadedCsv load_csv_with_encoder(const std::string& path, const CsvSchema& schema,
                                const EncoderState& encoder);

}  // namespace fairgap
