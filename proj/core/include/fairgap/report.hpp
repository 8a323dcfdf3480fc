#pragma once

#include <string>

#include "fairgap/csv.hpp"
#include "fairgap/dataset.hpp"
#include "fairgap/gaps.hpp"

#include <json.hpp>

namespace fairgap {

inline constexpr const char* kToolVersion = "0.1.0";

// The audit report written by the CLI: version, dataset summary, gaps, bound
// verdicts, binning config, loss, and provenance (input hash, seed, tool
// version). Serialization is schema-stable: only documented fields, sorted
// keys, shortest round-trip doubles — byte-identical across runs.
struct ReportDocument {
  std::string version = "1";
  std::size_t n = 0;
  int d_encoded = 0;
  int num_groups = 0;
  GroupStats groups;
  std::vector<std::string> group_names;
  GapReport gaps;
  std::string input_sha256;
  std::uint64_t seed = 0;
};

nlohmann::json to_json(const GapReport& report);
nlohmann::json to_json(const ReportDocument& doc);

nlohmann::json encoder_to_json(const EncoderState& encoder);
EncoderState encoder_from_json(const nlohmann::json& j);

// SHA-256 of a file's bytes, lowercase hex. Throws Error on I/O failure.
std::string sha256_file(const std::string& path);

}  // namespace fairgap
