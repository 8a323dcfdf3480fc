// fairgap: audits fairness gaps of score functions on tabular CSV data,
// trains L1-regularized logistic scores, runs learning-curve and synthetic
// lower-bound experiments, and emits JSON/CSV reports.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "fairgap/bounds.hpp"
#include "fairgap/csv.hpp"
#include "fairgap/erm.hpp"
#include "fairgap/gaps.hpp"
#include "fairgap/losses.hpp"
#include "fairgap/report.hpp"
#include "fairgap/rng.hpp"
#include "fairgap/synth.hpp"

namespace {

using nlohmann::json;

// Flag/validation problems discovered after CLI11 parsing; mapped to exit 2.
class UsageError : public fairgap::Error {
 public:
  explicit UsageError(const std::string& msg) : Error(msg) {}
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string token;
  for (char c : text) {
    if (c == sep) {
      out.push_back(token);
      token.clear();
    } else {
      token.push_back(c);
    }
  }
  if (!token.empty()) out.push_back(token);
  return out;
}

std::vector<fairgap::ColumnSpec> parse_features(const std::string& spec) {
  std::vector<fairgap::ColumnSpec> out;
  if (spec.empty()) return out;
  for (const std::string& token : split(spec, ',')) {
    const std::vector<std::string> parts = split(token, ':');
    if (parts.size() != 2 || (parts[1] != "numeric" && parts[1] != "categorical"))
      throw UsageError("feature spec must be name:numeric or name:categorical, got " + token);
    out.push_back({parts[0], parts[1] == "numeric" ? fairgap::ColumnKind::Numeric
                                                   : fairgap::ColumnKind::Categorical});
  }
  return out;
}

std::vector<std::size_t> parse_n_grid(const std::string& spec) {
  std::vector<std::size_t> grid;
  for (const std::string& token : split(spec, ',')) {
    const long v = std::stol(token);
    if (v <= 0) throw UsageError("sample counts must be positive");
    grid.push_back(static_cast<std::size_t>(v));
  }
  if (grid.empty()) throw UsageError("empty n-grid");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (grid[i] <= grid[i - 1]) throw UsageError("n-grid must be strictly ascending");
  }
  return grid;
}

fairgap::BinningConfig binning_from_flags(int buckets, const std::string& mode, int min_cell) {
  fairgap::BinningConfig config;
  config.num_buckets = buckets;
  config.min_cell = min_cell;
  if (mode == "equal") {
    config.mode = fairgap::BinningMode::EqualWidth;
  } else if (mode == "quantile") {
    config.mode = fairgap::BinningMode::Quantile;
  } else {
    throw UsageError("--binning must be equal or quantile");
  }
  if (buckets < 2) throw UsageError("--buckets must be >= 2");
  return config;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw fairgap::Error("cannot write " + path);
  out << content;
}

json model_to_json(const fairgap::LogisticScore& score, const fairgap::EncoderState& encoder) {
  return {{"weights", score.weights},
          {"bias", score.bias},
          {"encoder", fairgap::encoder_to_json(encoder)}};
}

fairgap::TabularInstance instance_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open tabular spec: " + path);
  json j;
  in >> j;
  std::vector<fairgap::TabularCell> cells;
  for (const json& cell : j.at("support")) {
    cells.push_back({cell.at("x").get<int>(), cell.at("a").get<int>(),
                     cell.at("mass").get<double>(), cell.at("p_y1").get<double>()});
  }
  return fairgap::TabularInstance::validated(std::move(cells));
}

// --- audit ------------------------------------------------------------------

struct AuditArgs {
  std::string data, label_col, attr_col, features, score_col, model_path;
  std::string loss = "square";
  std::string binning = "equal";
  int buckets = 10;
  int min_cell = 2;
  std::uint64_t seed = 0;
  std::string out, plot_out;
};

int run_audit(const AuditArgs& args) {
  if (args.score_col.empty() == args.model_path.empty())
    throw UsageError("exactly one of --score-col and --model is required");

  fairgap::CsvSchema schema;
  schema.label_col = args.label_col;
  schema.attribute_col = args.attr_col;
  schema.feature_cols = parse_features(args.features);
  const fairgap::BinningConfig binning =
      binning_from_flags(args.buckets, args.binning, args.min_cell);
  const fairgap::BregmanLoss loss = fairgap::BregmanLoss::from_name(args.loss);

  fairgap::LoadedCsv loaded;
  std::vector<double> values;
  if (!args.score_col.empty()) {
    schema.score_col = args.score_col;
    loaded = fairgap::load_csv(args.data, schema);
    values = loaded.scores;
  } else {
    std::ifstream in(args.model_path);
    if (!in) throw UsageError("cannot open model file: " + args.model_path);
    json m;
    in >> m;
    fairgap::LogisticScore score;
    score.weights = m.at("weights").get<std::vector<double>>();
    score.bias = m.at("bias").get<double>();
    const fairgap::EncoderState encoder = fairgap::encoder_from_json(m.at("encoder"));
    if (encoder.encoded_dim() != static_cast<int>(score.weights.size()))
      throw fairgap::EncoderMismatchError("weight vector does not match encoder width");
    loaded = fairgap::load_csv_with_encoder(args.data, schema, encoder);
    values.resize(loaded.dataset.size());
    for (std::size_t i = 0; i < loaded.dataset.size(); ++i) {
      values[i] = fairgap::eval_score(fairgap::Score{score}, loaded.dataset.features(i));
    }
  }

  fairgap::ReportDocument doc;
  doc.gaps = fairgap::estimate_gaps(loaded.dataset, values, binning, &loss);
  doc.n = loaded.dataset.size();
  doc.d_encoded = loaded.dataset.dim();
  doc.num_groups = loaded.dataset.num_groups();
  doc.groups = fairgap::group_stats(loaded.dataset);
  doc.group_names = loaded.dataset.group_names();
  doc.input_sha256 = fairgap::sha256_file(args.data);
  doc.seed = args.seed;

  write_text_file(args.out, fairgap::to_json(doc).dump(2) + "\n");
  if (!args.plot_out.empty()) {
    std::ofstream plot(args.plot_out, std::ios::binary);
    if (!plot) throw fairgap::Error("cannot write " + args.plot_out);
    fairgap::write_plot_csv(plot, fairgap::calibration_plot_data(loaded.dataset, values, binning));
  }
  std::cout << "suf=" << fmt(doc.gaps.suf) << " cal=" << fmt(doc.gaps.cal)
            << " sep=" << fmt(doc.gaps.sep) << " ind=" << fmt(doc.gaps.ind) << "\n";
  return 0;
}

// --- train ------------------------------------------------------------------

struct TrainArgs {
  std::string data, label_col, attr_col, features;
  double l1 = 0.0, lr = 0.1, grad_tol = 1e-7;
  int iters = 5000;
  std::uint64_t seed = 0;
  std::string model_out;
};

int run_train(const TrainArgs& args) {
  fairgap::CsvSchema schema;
  schema.label_col = args.label_col;
  schema.attribute_col = args.attr_col;
  schema.feature_cols = parse_features(args.features);
  const fairgap::LoadedCsv loaded = fairgap::load_csv(args.data, schema);

  fairgap::TrainConfig config;
  config.loss = fairgap::LossKind::Logistic;
  config.l1_lambda = args.l1;
  config.learning_rate = args.lr;
  config.max_iters = args.iters;
  config.grad_tol = args.grad_tol;
  config.seed = args.seed;

  const fairgap::TrainResult result = fairgap::train_logistic(loaded.dataset, config);
  write_text_file(args.model_out, model_to_json(result.score, loaded.encoder).dump(2) + "\n");
  std::cout << "final_loss=" << fmt(result.final_loss) << " iterations=" << result.iterations
            << "\n";
  return 0;
}

// --- curve ------------------------------------------------------------------

struct CurveArgs {
  std::string source;
  std::string n_grid = "64,256,1024,4096";
  int trials = 5;
  std::size_t test_n = 10000;
  std::uint64_t seed = 0;
  double l1 = 0.0, lr = 0.1;
  int iters = 5000;
  int buckets = 10;
  std::string binning = "equal";
  std::string out;
};

int run_curve(const CurveArgs& args) {
  const std::vector<std::size_t> grid = parse_n_grid(args.n_grid);
  fairgap::TrainConfig config;
  config.l1_lambda = args.l1;
  config.learning_rate = args.lr;
  config.max_iters = args.iters;
  config.seed = args.seed;

  fairgap::CurveSource source = [&]() -> fairgap::CurveSource {
    if (args.source == "circle") {
      config.loss = fairgap::LossKind::Square;
      return fairgap::CircleSource{fairgap::CircleInstance::make({1.0, 0.0}), {0.0, 1.0}};
    }
    config.loss = fairgap::LossKind::Logistic;
    return instance_from_json_file(args.source);
  }();

  const std::vector<fairgap::CurveRow> rows = fairgap::learning_curve(
      source, grid, args.trials, config, args.test_n,
      binning_from_flags(args.buckets, args.binning, 2));

  std::string csv = "n,trial,suf,cal,sep,ind,test_loss\n";
  for (const fairgap::CurveRow& row : rows) {
    csv += std::to_string(row.n) + "," + std::to_string(row.trial) + "," + fmt(row.suf) + "," +
           fmt(row.cal) + "," + fmt(row.sep) + "," + fmt(row.ind) + "," + fmt(row.test_loss) +
           "\n";
  }
  write_text_file(args.out, csv);
  return 0;
}

// --- synth ------------------------------------------------------------------

struct LbArgs {
  std::string n_grid = "64,256,1024,4096,16384";
  int trials = 200;
  std::uint64_t seed = 1;
  std::string out, slopes_out;
};

int run_lb(const LbArgs& args) {
  const fairgap::ScalingSummary summary =
      fairgap::lb_experiment(parse_n_grid(args.n_grid), args.trials, args.seed);

  std::string csv = "n,trial,suf,cal,excess\n";
  for (const fairgap::ScalingRow& row : summary.rows) {
    csv += std::to_string(row.n) + "," + std::to_string(row.trial) + "," + fmt(row.suf) + "," +
           fmt(row.cal) + "," + fmt(row.excess) + "\n";
  }
  write_text_file(args.out, csv);

  const json slopes = {{"suf_slope", summary.suf_slope},
                       {"cal_slope", summary.cal_slope},
                       {"excess_slope", summary.excess_slope}};
  const std::string slopes_path =
      args.slopes_out.empty() ? args.out + ".slopes.json" : args.slopes_out;
  write_text_file(slopes_path, slopes.dump(2) + "\n");
  return 0;
}

struct ImbalanceArgs {
  std::string p_grid = "0.45,0.25,0.125,0.0625";
  std::size_t n = 4096;
  int trials = 200;
  std::uint64_t seed = 1;
  std::string out;
};

int run_imbalance(const ImbalanceArgs& args) {
  std::vector<double> grid;
  for (const std::string& token : split(args.p_grid, ',')) grid.push_back(std::stod(token));
  if (grid.empty()) throw UsageError("empty p-grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0 && grid[i] < 0.5)) throw UsageError("p values must lie in (0, 1/2)");
    if (i > 0 && grid[i] >= grid[i - 1]) throw UsageError("p-grid must be strictly descending");
  }

  const std::vector<fairgap::ImbalanceRow> rows =
      fairgap::imbalance_experiment(grid, args.n, args.trials, args.seed);
  std::string csv = "p,mean_minority_suf,mean_minority_cal\n";
  for (const fairgap::ImbalanceRow& row : rows) {
    csv += fmt(row.p) + "," + fmt(row.mean_minority_suf) + "," + fmt(row.mean_minority_cal) + "\n";
  }
  write_text_file(args.out, csv);
  return 0;
}

struct KlArgs {
  int pairs = 100;
  std::size_t resolution = 100000;
  std::uint64_t seed = 1;
  double bound_scale = 1.0;
};

int run_klcheck(const KlArgs& args) {
  fairgap::Rng rng(args.seed);
  bool all_ok = true;
  for (int i = 0; i < args.pairs; ++i) {
    const double a1 = rng.uniform() * 6.283185307179586;
    const double a2 = rng.uniform() * 6.283185307179586;
    const fairgap::Vec2 theta1{std::cos(a1), std::sin(a1)};
    const fairgap::Vec2 theta2{std::cos(a2), std::sin(a2)};
    const fairgap::KlCheck check = fairgap::kl_bound_check(theta1, theta2, args.resolution);
    // --bound-scale probes tightness: the check passes only when the measured
    // KL stays below scale * bound.
    const double bound = args.bound_scale * check.bound;
    const bool ok = check.kl_per_sample <= bound;
    std::cout << (ok ? "OK" : "VIOLATION") << " pair=" << i
              << " kl=" << fmt(check.kl_per_sample) << " bound=" << fmt(bound) << "\n";
    all_ok = all_ok && ok;
  }
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fairness-gap auditing toolkit"};
  app.require_subcommand(1);

  AuditArgs audit;
  CLI::App* cmd_audit = app.add_subcommand("audit", "estimate gaps of a score on CSV data");
  cmd_audit->add_option("--data", audit.data, "input CSV file")->required();
  cmd_audit->add_option("--label-col", audit.label_col, "binary label column (0/1)")->required();
  cmd_audit->add_option("--attr-col", audit.attr_col, "group attribute column")->required();
  cmd_audit->add_option("--features", audit.features, "feature spec, e.g. \"age:numeric,race:categorical\"");
  cmd_audit->add_option("--score-col", audit.score_col, "column holding precomputed scores in [0,1]");
  cmd_audit->add_option("--model", audit.model_path, "trained model JSON (alternative to --score-col)");
  cmd_audit->add_option("--loss", audit.loss, "loss for excess-risk bounds: square | logistic");
  cmd_audit->add_option("--buckets", audit.buckets, "number of score buckets (default 10)");
  cmd_audit->add_option("--binning", audit.binning, "bucket layout: equal | quantile");
  cmd_audit->add_option("--min-cell", audit.min_cell, "minimum samples per plot cell (default 2)");
  cmd_audit->add_option("--seed", audit.seed, "seed recorded in the report provenance");
  cmd_audit->add_option("--out", audit.out, "output report JSON path")->required();
  cmd_audit->add_option("--plot-out", audit.plot_out, "optional calibration-plot CSV path");

  TrainArgs train;
  CLI::App* cmd_train = app.add_subcommand("train", "train an L1 logistic score");
  cmd_train->add_option("--data", train.data, "input CSV file")->required();
  cmd_train->add_option("--label-col", train.label_col, "binary label column (0/1)")->required();
  cmd_train->add_option("--attr-col", train.attr_col, "group attribute column (excluded from features)")->required();
  cmd_train->add_option("--features", train.features, "feature spec, e.g. \"age:numeric,race:categorical\"");
  cmd_train->add_option("--l1", train.l1, "L1 regularization strength (default 0)");
  cmd_train->add_option("--lr", train.lr, "gradient step size");
  cmd_train->add_option("--iters", train.iters, "maximum iterations");
  cmd_train->add_option("--grad-tol", train.grad_tol, "gradient max-norm stopping tolerance");
  cmd_train->add_option("--seed", train.seed, "seed recorded in the model file");
  cmd_train->add_option("--model-out", train.model_out, "output model JSON path")->required();

  CurveArgs curve;
  CLI::App* cmd_curve = app.add_subcommand("curve", "learning-curve experiment");
  cmd_curve->add_option("--source", curve.source, "data source: \"circle\" or a tabular spec JSON path")->required();
  cmd_curve->add_option("--n-grid", curve.n_grid, "comma-separated training-set sizes");
  cmd_curve->add_option("--trials", curve.trials, "trials per size");
  cmd_curve->add_option("--test-n", curve.test_n, "shared test-set size");
  cmd_curve->add_option("--seed", curve.seed, "experiment seed");
  cmd_curve->add_option("--l1", curve.l1, "L1 regularization strength");
  cmd_curve->add_option("--lr", curve.lr, "gradient step size");
  cmd_curve->add_option("--iters", curve.iters, "maximum training iterations");
  cmd_curve->add_option("--buckets", curve.buckets, "score buckets for gap estimation");
  cmd_curve->add_option("--binning", curve.binning, "bucket layout: equal | quantile");
  cmd_curve->add_option("--out", curve.out, "output CSV path (one row per n, trial)")->required();

  CLI::App* cmd_synth = app.add_subcommand("synth", "synthetic lower-bound experiments");
  cmd_synth->require_subcommand(1);

  LbArgs lb;
  CLI::App* cmd_lb = cmd_synth->add_subcommand("lb", "scaling-law experiment");
  cmd_lb->add_option("--n-grid", lb.n_grid, "comma-separated sample sizes");
  cmd_lb->add_option("--trials", lb.trials, "trials per size");
  cmd_lb->add_option("--seed", lb.seed, "experiment seed");
  cmd_lb->add_option("--out", lb.out, "output CSV path")->required();
  cmd_lb->add_option("--slopes-out", lb.slopes_out, "fitted log-log slopes JSON (default <out>.slopes.json)");

  ImbalanceArgs imbalance;
  CLI::App* cmd_imbalance = cmd_synth->add_subcommand("imbalance", "group-imbalance experiment");
  cmd_imbalance->add_option("--p-grid", imbalance.p_grid, "comma-separated minority masses, strictly decreasing in (0, 0.5)");
  cmd_imbalance->add_option("--n", imbalance.n, "samples per trial");
  cmd_imbalance->add_option("--trials", imbalance.trials, "trials per p");
  cmd_imbalance->add_option("--seed", imbalance.seed, "experiment seed");
  cmd_imbalance->add_option("--out", imbalance.out, "output CSV path")->required();

  KlArgs kl;
  CLI::App* cmd_kl = cmd_synth->add_subcommand("klcheck", "per-sample KL bound check");
  cmd_kl->add_option("--pairs", kl.pairs, "number of random direction pairs");
  cmd_kl->add_option("--resolution", kl.resolution, "quadrature resolution");
  cmd_kl->add_option("--seed", kl.seed, "pair-sampling seed");
  cmd_kl->add_option("--bound-scale", kl.bound_scale,
                     "scale factor on the KL bound (tightness probe)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage/flag errors are exit 2; --help is 0
  }

  try {
    if (cmd_audit->parsed()) return run_audit(audit);
    if (cmd_train->parsed()) return run_train(train);
    if (cmd_curve->parsed()) return run_curve(curve);
    if (cmd_lb->parsed()) return run_lb(lb);
    if (cmd_imbalance->parsed()) return run_imbalance(imbalance);
    if (cmd_kl->parsed()) return run_klcheck(kl);
  } catch (const fairgap::EncoderMismatchError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const fairgap::DivergenceDetectedError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
