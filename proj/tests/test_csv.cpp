#include <doctest.h>

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "fairgap/csv.hpp"
#include "fairgap/errors.hpp"
#include "fairgap/report.hpp"

using namespace fairgap;

namespace {

// Writes content to a unique temp file and removes it on destruction.
class TempCsv {
 public:
  explicit TempCsv(const std::string& content) {
    static int counter = 0;
    path_ = (std::filesystem::temp_directory_path() /
             ("fairgap_test_" + std::to_string(::getpid()) + "_" +
              std::to_string(counter++) + ".csv"))
                .string();
    std::ofstream out(path_, std::ios::binary);
    out << content;
  }
  ~TempCsv() { std::filesystem::remove(path_); }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

CsvSchema basic_schema() {
  CsvSchema schema;
  schema.label_col = "y";
  schema.attribute_col = "a";
  schema.feature_cols = {{"age", ColumnKind::Numeric}, {"color", ColumnKind::Categorical}};
  return schema;
}

const char* kBasicCsv =
    "age,color,a,y\n"
    "30,red,f,1\n"
    "25,blue,m,0\n"
    "41,green,f,1\n"
    "33,red,m,0\n";

}  // namespace

TEST_CASE("parse_csv handles quoting, embedded delimiters and CRLF") {
  std::istringstream in(
      "name,note\r\n"
      "\"Smith, Jo\",\"says \"\"hi\"\"\"\r\n"
      "plain,\"two\nlines\"\n");
  const auto records = parse_csv(in);
  REQUIRE(records.size() == 3);
  CHECK(records[1][0] == "Smith, Jo");
  CHECK(records[1][1] == "says \"hi\"");
  CHECK(records[2][1] == "two\nlines");

  std::istringstream bad("a,b\n\"open,1\n");
  CHECK_THROWS_AS(parse_csv(bad), CsvError);

  std::istringstream semicolon("a;b\n1;2\n");
  CHECK(parse_csv(semicolon, ';')[1][0] == "1");
}

TEST_CASE("load_csv one-hot encodes categoricals by first appearance") {
  const TempCsv file(kBasicCsv);
  const LoadedCsv loaded = load_csv(file.path(), basic_schema());

  CHECK(loaded.encoder.encoded_dim() == 4);  // 1 numeric + 3 colors
  CHECK(loaded.dataset.dim() == 4);
  CHECK(loaded.dataset.size() == 4);
  CHECK(loaded.dataset.num_groups() == 2);
  CHECK(loaded.dataset.group_names() == std::vector<std::string>{"f", "m"});
  CHECK(loaded.scores.empty());

  // Row 0: age 30, color red -> slot 1 (red first).
  const auto x0 = loaded.dataset.features(0);
  CHECK(x0[0] == 30.0);
  CHECK(x0[1] == 1.0);
  CHECK(x0[2] == 0.0);
  CHECK(x0[3] == 0.0);
  // Row 2: green is the third category seen.
  const auto x2 = loaded.dataset.features(2);
  CHECK(x2[3] == 1.0);

  CHECK(loaded.encoder.categories[1] ==
        std::vector<std::string>{"red", "blue", "green"});
}

TEST_CASE("load_csv reads and validates an optional score column") {
  const TempCsv file(
      "s,a,y\n"
      "0.25,g0,1\n"
      "0.75,g1,0\n");
  CsvSchema schema;
  schema.label_col = "y";
  schema.attribute_col = "a";
  schema.score_col = "s";
  schema.feature_cols = {{"s", ColumnKind::Numeric}};
  const LoadedCsv loaded = load_csv(file.path(), schema);
  CHECK(loaded.scores == std::vector<double>{0.25, 0.75});

  const TempCsv bad(
      "s,a,y\n"
      "1.25,g0,1\n");
  CHECK_THROWS_AS(load_csv(bad.path(), schema), ParseError);
}

TEST_CASE("load_csv error cases") {
  const TempCsv file(kBasicCsv);
  CsvSchema schema = basic_schema();
  schema.label_col = "label";
  CHECK_THROWS_AS(load_csv(file.path(), schema), MissingColumnError);

  const TempCsv bad_number(
      "age,color,a,y\n"
      "thirty,red,f,1\n");
  CHECK_THROWS_AS(load_csv(bad_number.path(), basic_schema()), ParseError);

  const TempCsv bad_label(
      "age,color,a,y\n"
      "30,red,f,2\n");
  CHECK_THROWS_AS(load_csv(bad_label.path(), basic_schema()), Error);

  CHECK_THROWS_AS(load_csv("/nonexistent/fairgap.csv", basic_schema()), CsvError);
}

TEST_CASE("encoder state round-trips through JSON") {
  const TempCsv file(kBasicCsv);
  const LoadedCsv loaded = load_csv(file.path(), basic_schema());
  const EncoderState restored = encoder_from_json(encoder_to_json(loaded.encoder));

  REQUIRE(restored.columns.size() == loaded.encoder.columns.size());
  for (std::size_t i = 0; i < restored.columns.size(); ++i) {
    CHECK(restored.columns[i].name == loaded.encoder.columns[i].name);
    CHECK(restored.columns[i].kind == loaded.encoder.columns[i].kind);
  }
  CHECK(restored.categories == loaded.encoder.categories);
  CHECK(restored.encoded_dim() == 4);
}

TEST_CASE("frozen encoder keeps slots stable and rejects drift") {
  const TempCsv train_file(kBasicCsv);
  const EncoderState encoder = load_csv(train_file.path(), basic_schema()).encoder;

  // New data listing the categories in a different order must reuse the
  // training slots.
  const TempCsv audit_file(
      "age,color,a,y\n"
      "22,green,f,0\n"
      "28,red,m,1\n");
  const LoadedCsv audited = load_csv_with_encoder(audit_file.path(), basic_schema(), encoder);
  CHECK(audited.dataset.features(0)[3] == 1.0);  // green keeps slot 3
  CHECK(audited.dataset.features(1)[1] == 1.0);  // red keeps slot 1

  const TempCsv unseen(
      "age,color,a,y\n"
      "22,purple,f,0\n");
  CHECK_THROWS_AS(load_csv_with_encoder(unseen.path(), basic_schema(), encoder),
                  EncoderMismatchError);

  const TempCsv missing_col(
      "age,a,y\n"
      "22,f,0\n");
  CHECK_THROWS_AS(load_csv_with_encoder(missing_col.path(), basic_schema(), encoder),
                  EncoderMismatchError);
}
