#include "fairgap/report.hpp"

#include <fstream>
#include <vector>

#include <openssl/evp.h>

#include "fairgap/errors.hpp"

namespace fairgap {

using nlohmann::json;

json to_json(const GapReport& report) {
  json bounds = json::object();
  for (const auto& [name, verdict] : report.bounds) {
    bounds[name] = {{"value", verdict.value},
                    {"satisfied", verdict.satisfied},
                    {"slack", verdict.slack},
                    {"kind", verdict.is_lower ? "lower" : "upper"}};
  }
  json j = {{"suf", report.suf},
            {"cal", report.cal},
            {"sep", report.sep},
            {"ind", report.ind},
            {"per_group_suf", report.per_group_suf},
            {"per_group_cal", report.per_group_cal},
            {"single_group_cal", report.single_group_cal},
            {"bounds", bounds},
            {"metadata",
             {{"binning", {{"B", report.num_buckets}, {"mode", report.binning_mode}}},
              {"loss", report.loss_name},
              {"n", report.n},
              {"tolerance", report.tolerance}}}};
  if (report.excess_risk) j["excess_risk"] = *report.excess_risk;
  return j;
}

json to_json(const ReportDocument& doc) {
  return {{"version", doc.version},
          {"dataset",
           {{"n", doc.n},
            {"d_encoded", doc.d_encoded},
            {"K", doc.num_groups},
            {"group_names", doc.group_names},
            {"group_masses", doc.groups.p_a},
            {"base_rates", doc.groups.q_a},
            {"base_rate_overall", doc.groups.q_bar}}},
          {"gaps", to_json(doc.gaps)},
          {"provenance",
           {{"input_sha256", doc.input_sha256},
            {"seed", doc.seed},
            {"tool_version", kToolVersion}}}};
}

json encoder_to_json(const EncoderState& encoder) {
  json cols = json::array();
  for (std::size_t c = 0; c < encoder.columns.size(); ++c) {
    cols.push_back({{"name", encoder.columns[c].name},
                    {"kind", encoder.columns[c].kind == ColumnKind::Numeric ? "numeric"
                                                                            : "categorical"},
                    {"categories", encoder.categories[c]}});
  }
  return {{"columns", cols}};
}

EncoderState encoder_from_json(const json& j) {
  EncoderState encoder;
  for (const json& col : j.at("columns")) {
    ColumnSpec spec;
    spec.name = col.at("name").get<std::string>();
    spec.kind =
        col.at("kind").get<std::string>() == "numeric" ? ColumnKind::Numeric : ColumnKind::Categorical;
    encoder.columns.push_back(spec);
    encoder.categories.push_back(col.at("categories").get<std::vector<std::string>>());
  }
  return encoder;
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file for hashing: " + path);

  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
    EVP_MD_CTX_free(ctx);
    throw Error("sha256 init failed");
  }
  std::vector<char> buffer(1 << 16);
  while (in) {
    in.read(buffer.data(), static_cast<std::streamsize>(buffer.size()));
    if (in.gcount() > 0) EVP_DigestUpdate(ctx, buffer.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);

  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

}  // namespace fairgap
