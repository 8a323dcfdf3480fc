#include "fairgap/csv.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace fairgap {

namespace {

// Strict double parse; the whole field must be consumed.
bool parse_double(const std::string& field, double& out) {
  if (field.empty()) return false;
  char* end = nullptr;
  out = std::strtod(field.c_str(), &end);
  return end == field.c_str() + field.size();
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::unordered_map<std::string, std::size_t> index;

  std::size_t column(const std::string& name) const {
    auto it = index.find(name);
    if (it == index.end()) throw MissingColumnError(name);
    return it->second;
  }
};

Table read_table(const std::string& path, char delimiter) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CsvError("cannot open file: " + path);
  std::vector<std::vector<std::string>> records = parse_csv(in, delimiter);
  if (records.empty()) throw CsvError("file has no header: " + path);

  Table table;
  table.header = std::move(records.front());
  records.erase(records.begin());
  table.rows = std::move(records);
  for (std::size_t j = 0; j < table.header.size(); ++j) table.index[table.header[j]] = j;
  return table;
}

std::string field_at(const Table& table, std::size_t row, std::size_t col,
                     const std::string& name) {
  if (col >= table.rows[row].size())
    throw ParseError(row + 1, name, "<missing field>");
  return table.rows[row][col];
}

LoadedCsv load_impl(const std::string& path, const CsvSchema& schema,
                    const EncoderState* frozen) {
  const Table table = read_table(path, schema.delimiter);

  const std::size_t label_col = table.column(schema.label_col);
  const std::size_t attr_col = table.column(schema.attribute_col);
  std::size_t score_col = 0;
  if (schema.score_col) score_col = table.column(*schema.score_col);

  const std::vector<ColumnSpec>& specs = frozen ? frozen->columns : schema.feature_cols;
  if (frozen) {
    // The frozen encoder's columns must all exist in this file.
    for (const ColumnSpec& spec : specs) {
      if (!table.index.contains(spec.name))
        throw EncoderMismatchError("data is missing model column " + spec.name);
    }
  }
  std::vector<std::size_t> spec_cols;
  spec_cols.reserve(specs.size());
  for (const ColumnSpec& spec : specs) spec_cols.push_back(table.column(spec.name));

  // Pass 1: collect categories in first-appearance order (or verify against a
  // frozen encoder).
  EncoderState encoder;
  encoder.columns = specs;
  encoder.categories.resize(specs.size());
  if (frozen) encoder.categories = frozen->categories;
  for (std::size_t c = 0; c < specs.size(); ++c) {
    if (specs[c].kind != ColumnKind::Categorical) continue;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const std::string value = field_at(table, r, spec_cols[c], specs[c].name);
      auto& cats = encoder.categories[c];
      if (std::find(cats.begin(), cats.end(), value) == cats.end()) {
        if (frozen)
          throw EncoderMismatchError("unseen category \"" + value + "\" in column " +
                                     specs[c].name);
        cats.push_back(value);
      }
    }
  }

  // Pass 2: encode rows.
  std::vector<RawSample> samples;
  samples.reserve(table.rows.size());
  std::vector<double> scores;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    RawSample sample;
    for (std::size_t c = 0; c < specs.size(); ++c) {
      const std::string value = field_at(table, r, spec_cols[c], specs[c].name);
      if (specs[c].kind == ColumnKind::Numeric) {
        double v = 0.0;
        if (!parse_double(value, v)) throw ParseError(r + 1, specs[c].name, value);
        sample.features.push_back(v);
      } else {
        const auto& cats = encoder.categories[c];
        const auto it = std::find(cats.begin(), cats.end(), value);
        for (std::size_t k = 0; k < cats.size(); ++k) {
          sample.features.push_back(k == static_cast<std::size_t>(it - cats.begin()) ? 1.0 : 0.0);
        }
      }
    }

    const std::string label = field_at(table, r, label_col, schema.label_col);
    if (!parse_double(label, sample.label)) throw ParseError(r + 1, schema.label_col, label);
    sample.attribute = field_at(table, r, attr_col, schema.attribute_col);
    samples.push_back(std::move(sample));

    if (schema.score_col) {
      const std::string score = field_at(table, r, score_col, *schema.score_col);
      double v = 0.0;
      if (!parse_double(score, v) || v < 0.0 || v > 1.0)
        throw ParseError(r + 1, *schema.score_col, score);
      scores.push_back(v);
    }
  }

  LoadedCsv out{validate_dataset(samples), std::move(scores), std::move(encoder)};
  return out;
}

}  // namespace

int EncoderState::encoded_dim() const {
  int dim = 0;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    dim += columns[c].kind == ColumnKind::Numeric
               ? 1
               : static_cast<int>(categories[c].size());
  }
  return dim;
}

std::vector<std::vector<std::string>> parse_csv(std::istream& in, char delimiter) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(record));
    record.clear();
  };

  char c = 0;
  while (in.get(c)) {
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && !field_started) {
      in_quotes = true;
      field_started = true;
    } else if (c == delimiter) {
      end_field();
    } else if (c == '\n') {
      end_record();
    } else if (c == '\r') {
      // swallowed; \r\n handled when the \n arrives
    } else {
      field.push_back(c);
      field_started = true;
    }
  }
  if (in_quotes) throw CsvError("unterminated quoted field");
  if (field_started || !record.empty() || !field.empty()) end_record();
  return records;
}

LoadedCsv load_csv(const std::string& path, const CsvSchema& schema) {
  return load_impl(path, schema, nullptr);
}

LoadedCsv load_csv_with_encoder(const std::string& path, const CsvSchema& schema,
                                const EncoderState& encoder) {
  return load_impl(path, schema, &encoder);
}

}  // namespace fairgap
