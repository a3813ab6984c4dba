// Command-line front end: extract / train / predict / evaluate.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "prism/error.hpp"
#include "prism/evaluate.hpp"
#include "prism/features_io.hpp"
#include "prism/image.hpp"
#include "prism/lda.hpp"
#include "prism/manifest.hpp"
#include "prism/metrics.hpp"
#include "prism/parallel.hpp"
#include "prism/radial.hpp"
#include "prism/split.hpp"

namespace {

using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

struct ExtractArgs {
  std::string manifest;
  std::string output;
  int n_r = 64;
  unsigned workers = 1;
};

struct TrainArgs {
  std::string features;
  std::string output;
  std::string subset = "all";
  std::string normalization = "zscore";
  double lambda = -1.0;  // < 0 means the automatic default
  std::vector<std::string> fake_labels;
};

struct PredictArgs {
  std::string model;
  std::vector<std::string> images;
  std::string manifest;
  std::string output;
};

struct EvaluateArgs {
  std::string features;
  std::string output;
  std::string subset = "all";
  std::string normalization = "zscore";
  bool ablation = false;
  double lambda = -1.0;
  int n_splits = 1000;
  double ratio = 0.8;
  std::string grouping = "prompt-pairs";
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::string split_file;
  std::vector<std::string> fake_labels;
};

prism::LdaConfig make_lda_config(const std::string& subset, double lambda,
                                 const std::string& normalization) {
  prism::LdaConfig config;
  config.subset = prism::subset_from_name(subset);
  config.normalization = prism::normalization_from_name(normalization);
  if (lambda >= 0.0) config.lambda = lambda;
  return config;
}

void apply_fake_labels(prism::FeatureTable& table,
                       const std::vector<std::string>& fake_labels) {
  if (fake_labels.empty()) return;
  std::set<std::string> fake(fake_labels.begin(), fake_labels.end());
  std::vector<std::string> mapped =
      prism::binarize_labels(table.labels(), fake);
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    table.rows[i].label = mapped[i];
  }
}

// ---------------------------------------------------------------- extract

int run_extract(const ExtractArgs& args) {
  prism::Manifest manifest = prism::read_manifest(args.manifest);
  if (manifest.duplicate_path_count > 0) {
    std::cerr << "warning: " << manifest.duplicate_path_count
              << " duplicate path(s) in manifest\n";
  }

  const std::size_t n = manifest.entries.size();
  std::vector<std::optional<prism::Vector>> results(n);
  std::vector<std::string> failures(n);

  // Binnings depend only on the image dimensions; share them across workers.
  std::map<std::pair<prism::Index, prism::Index>, prism::RadialBinning> binnings;
  std::mutex binnings_mutex;

  prism::parallel_for(n, args.workers, [&](std::size_t i) {
    const prism::ManifestEntry& entry = manifest.entries[i];
    try {
      prism::RgbImage image = prism::decode_image(entry.path);
      const prism::RadialBinning* binning = nullptr;
      {
        std::lock_guard<std::mutex> lock(binnings_mutex);
        auto key = std::make_pair(image.rows(), image.cols());
        auto it = binnings.find(key);
        if (it == binnings.end()) {
          it = binnings.emplace(key, prism::make_binning(image.rows(),
                                                         image.cols(), args.n_r))
                   .first;
        }
        binning = &it->second;
      }
      results[i] = prism::extract_features(image, *binning);
    } catch (const prism::Error& e) {
      failures[i] = e.what();
    }
  });

  prism::FeatureTable table;
  std::size_t failed = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!results[i]) {
      ++failed;
      std::cerr << "failed: " << manifest.entries[i].path.string() << " ("
                << failures[i] << ")\n";
      continue;
    }
    prism::FeatureRow row;
    row.path = manifest.entries[i].path.string();
    row.label = manifest.entries[i].label;
    row.prompt_id = manifest.entries[i].prompt_id;
    row.values = std::move(*results[i]);
    table.rows.push_back(std::move(row));
  }

  if (table.rows.empty()) {
    std::cerr << "error: all " << n << " entries failed to decode\n";
    return kExitData;
  }
  prism::write_features(table, args.output);
  std::cout << "extracted " << table.rows.size() << " of " << n
            << " entries (" << failed << " failed) -> " << args.output << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- train

int run_train(const TrainArgs& args) {
  prism::FeatureTable table = prism::read_features(args.features);
  apply_fake_labels(table, args.fake_labels);

  prism::LdaModel model =
      prism::fit(table.matrix(), table.labels(),
                 make_lda_config(args.subset, args.lambda, args.normalization));
  prism::save_model(model, args.output);

  long correct = 0;
  prism::Matrix features = table.matrix();
  for (prism::Index i = 0; i < features.rows(); ++i) {
    if (prism::predict(model, features.row(i).transpose()).label ==
        table.rows[static_cast<std::size_t>(i)].label) {
      ++correct;
    }
  }

  std::map<std::string, long> counts;
  for (const auto& row : table.rows) ++counts[row.label];

  std::cout << "model -> " << args.output << "\n"
            << "classes: " << model.class_count() << " (";
  bool first = true;
  for (const std::string& lab : model.labels) {
    if (!first) std::cout << ", ";
    std::cout << lab << "=" << counts[lab];
    first = false;
  }
  std::cout << ")\nembedding dimension: " << model.embedding_dim() << "\n"
            << "training accuracy: "
            << static_cast<double>(correct) / static_cast<double>(features.rows())
            << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- predict

int run_predict(const PredictArgs& args) {
  prism::LdaModel model = prism::load_model(args.model);
  if (model.n_r <= 0) {
    prism::raise(prism::errc::invalid_argument,
                 "model was not trained on radial image features");
  }

  std::vector<std::string> paths = args.images;
  if (!args.manifest.empty()) {
    prism::Manifest manifest = prism::read_manifest(args.manifest);
    for (const auto& entry : manifest.entries) {
      paths.push_back(entry.path.string());
    }
  }
  if (paths.empty()) {
    prism::raise(prism::errc::invalid_argument, "no images to predict");
  }

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!args.output.empty()) {
    file.open(args.output);
    if (!file) {
      prism::raise(prism::errc::io_error, "cannot open " + args.output);
    }
    out = &file;
  }

  int failed = 0;
  for (const std::string& path : paths) {
    ordered_json record;
    record["path"] = path;
    try {
      prism::RgbImage image = prism::decode_image(path);
      prism::Vector features = prism::extract_features(image, model.n_r);
      prism::Prediction prediction = prism::predict(model, features);
      record["label"] = prediction.label;
      ordered_json posteriors;
      for (prism::Index k = 0; k < model.class_count(); ++k) {
        posteriors[model.labels[static_cast<std::size_t>(k)]] =
            prediction.posterior[k];
      }
      record["posteriors"] = std::move(posteriors);
    } catch (const prism::Error& e) {
      record["error"] = e.what();
      ++failed;
    }
    (*out) << record.dump() << "\n";
  }
  return failed == static_cast<int>(paths.size()) ? kExitData : kExitOk;
}

// ---------------------------------------------------------------- evaluate

std::vector<bool> load_published_split(const std::string& split_file,
                                       const prism::FeatureTable& table) {
  std::ifstream in(split_file);
  if (!in) prism::raise(prism::errc::file_not_found, split_file);
  std::map<std::string, bool> assignment;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != "path,set") {
        prism::raise(prism::errc::parse_error,
                     "split file must start with header 'path,set'");
      }
      continue;
    }
    auto comma = line.rfind(',');
    if (comma == std::string::npos) {
      prism::raise(prism::errc::parse_error,
                   "split file line " + std::to_string(line_no) + ": no comma");
    }
    std::string set = line.substr(comma + 1);
    if (set != "train" && set != "test") {
      prism::raise(prism::errc::parse_error,
                   "split file line " + std::to_string(line_no) +
                       ": set must be 'train' or 'test'");
    }
    assignment[line.substr(0, comma)] = (set == "test");
  }

  std::vector<bool> is_test(table.rows.size(), false);
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    auto it = assignment.find(table.rows[i].path);
    if (it == assignment.end()) {
      prism::raise(prism::errc::parse_error,
                   "split file does not cover '" + table.rows[i].path + "'");
    }
    is_test[i] = it->second;
  }
  return is_test;
}

int run_evaluate(const EvaluateArgs& args) {
  prism::FeatureTable table = prism::read_features(args.features);
  apply_fake_labels(table, args.fake_labels);

  prism::ProtocolConfig config;
  config.lda = make_lda_config(args.subset, args.lambda, args.normalization);
  config.n_splits = args.n_splits;
  config.ratio = args.ratio;
  config.grouping = prism::grouping_from_name(args.grouping);
  config.seed = args.seed;
  config.workers = args.workers;

  std::vector<bool> published;
  if (config.grouping == prism::Grouping::published) {
    if (args.split_file.empty()) {
      prism::raise(prism::errc::invalid_argument,
                   "published grouping needs --split-file");
    }
    published = load_published_split(args.split_file, table);
    config.published_test = &published;
    config.n_splits = 1;
  }

  // Shared splits so the ablation comparison is paired per split.
  prism::SplitOptions split_options;
  split_options.n_splits = config.n_splits;
  split_options.ratio = config.ratio;
  split_options.grouping = config.grouping;
  split_options.seed = config.seed;
  split_options.published_test = config.published_test;
  std::vector<prism::SplitSpec> splits =
      prism::make_splits(table.prompt_ids(), table.labels(), split_options);

  ordered_json report;
  if (!args.ablation) {
    prism::ResamplingSummary summary = prism::run_protocol(table, splits, config);
    report = prism::report_to_json(summary, config);
    std::cout << "accuracy: " << summary.accuracy.mean << " +/- "
              << summary.accuracy.stddev << " (5-95%: " << summary.accuracy.p5
              << "-" << summary.accuracy.p95 << ")\n"
              << "weighted F1: " << summary.weighted_f1.mean
              << ", average split: " << summary.average_split << "\n";
  } else {
    const prism::FeatureSubset subsets[3] = {prism::FeatureSubset::all,
                                             prism::FeatureSubset::magnitude,
                                             prism::FeatureSubset::phase};
    report["format"] = "prism-ablation-report";
    report["version"] = 1;
    std::vector<prism::ResamplingSummary> summaries;
    for (prism::FeatureSubset subset : subsets) {
      prism::ProtocolConfig sub_config = config;
      sub_config.lda.subset = subset;
      prism::ResamplingSummary summary =
          prism::run_protocol(table, splits, sub_config);
      report["runs"][prism::subset_name(subset)] =
          prism::report_to_json(summary, sub_config);
      std::cout << prism::subset_name(subset)
                << ": accuracy " << summary.accuracy.mean << " +/- "
                << summary.accuracy.stddev << "\n";
      summaries.push_back(std::move(summary));
    }
    // Paired per-split accuracies, ready for an external paired t-test.
    ordered_json paired = ordered_json::array();
    for (int s = 0; s < config.n_splits; ++s) {
      paired.push_back({
          {"split", s},
          {"all", summaries[0].per_split[static_cast<std::size_t>(s)].accuracy},
          {"magnitude", summaries[1].per_split[static_cast<std::size_t>(s)].accuracy},
          {"phase", summaries[2].per_split[static_cast<std::size_t>(s)].accuracy},
      });
    }
    report["paired_accuracy"] = std::move(paired);
  }

  prism::write_report(report, args.output);
  std::cout << "report -> " << args.output << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PRISM: radial frequency-domain fingerprinting of generated images"};
  app.require_subcommand(1);

  ExtractArgs extract_args;
  auto* extract = app.add_subcommand(
      "extract", "Decode images from a manifest and write radial DFT features");
  extract->add_option("--manifest", extract_args.manifest, "Manifest CSV")
      ->required();
  extract->add_option("--output", extract_args.output, "Feature CSV to write")
      ->required();
  extract->add_option("--n-r", extract_args.n_r, "Radial bins per channel plane")
      ->default_val(64)
      ->check(CLI::PositiveNumber);
  extract->add_option("--workers", extract_args.workers, "Decoder worker threads")
      ->default_val(1)
      ->check(CLI::PositiveNumber);

  TrainArgs train_args;
  auto* train = app.add_subcommand("train", "Fit the LDA attribution model");
  train->add_option("--features", train_args.features, "Feature CSV")->required();
  train->add_option("--output", train_args.output, "Model file to write")
      ->required();
  train->add_option("--subset", train_args.subset,
                    "Feature subset: all, magnitude or phase")
      ->default_val("all")
      ->check(CLI::IsMember({"all", "magnitude", "phase"}));
  train->add_option("--normalization", train_args.normalization,
                    "Per-feature normalization: zscore or minmax")
      ->default_val("zscore")
      ->check(CLI::IsMember({"zscore", "minmax"}));
  train->add_option("--lambda", train_args.lambda,
                    "Scatter ridge; negative selects the automatic default")
      ->default_val(-1.0);
  train->add_option("--fake-labels", train_args.fake_labels,
                    "Relabel these sources as 'fake' and the rest as 'real'")
      ->delimiter(',');

  PredictArgs predict_args;
  auto* predict = app.add_subcommand("predict", "Attribute images with a model");
  predict->add_option("--model", predict_args.model, "Model file")->required();
  predict->add_option("images", predict_args.images, "Image files");
  predict->add_option("--manifest", predict_args.manifest,
                      "Manifest CSV of images to predict");
  predict->add_option("--output", predict_args.output,
                      "Write JSON lines here instead of stdout");

  EvaluateArgs evaluate_args;
  auto* evaluate = app.add_subcommand(
      "evaluate", "Resampled split evaluation over a feature file");
  evaluate->add_option("--features", evaluate_args.features, "Feature CSV")
      ->required();
  evaluate->add_option("--output", evaluate_args.output, "Report JSON to write")
      ->required();
  evaluate->add_option("--subset", evaluate_args.subset,
                       "Feature subset: all, magnitude or phase")
      ->default_val("all")
      ->check(CLI::IsMember({"all", "magnitude", "phase"}));
  evaluate->add_flag("--ablation", evaluate_args.ablation,
                     "Run all three subsets and emit paired per-split accuracies");
  evaluate->add_option("--normalization", evaluate_args.normalization,
                       "Per-feature normalization: zscore or minmax")
      ->default_val("zscore")
      ->check(CLI::IsMember({"zscore", "minmax"}));
  evaluate->add_option("--lambda", evaluate_args.lambda,
                       "Scatter ridge; negative selects the automatic default")
      ->default_val(-1.0);
  evaluate->add_option("--n-splits", evaluate_args.n_splits, "Resampled splits")
      ->default_val(1000)
      ->check(CLI::PositiveNumber);
  evaluate->add_option("--ratio", evaluate_args.ratio, "Train share")
      ->default_val(0.8);
  evaluate->add_option("--grouping", evaluate_args.grouping,
                       "prompt-pairs, random-stratified or published")
      ->default_val("prompt-pairs")
      ->check(CLI::IsMember({"prompt-pairs", "random-stratified", "published"}));
  evaluate->add_option("--seed", evaluate_args.seed, "Master seed")
      ->default_val(0);
  evaluate->add_option("--workers", evaluate_args.workers,
                       "Concurrent per-split evaluations")
      ->default_val(1)
      ->check(CLI::PositiveNumber);
  evaluate->add_option("--split-file", evaluate_args.split_file,
                       "CSV 'path,set' with published train/test membership");
  evaluate->add_option("--fake-labels", evaluate_args.fake_labels,
                       "Relabel these sources as 'fake' and the rest as 'real'")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (extract->parsed()) return run_extract(extract_args);
    if (train->parsed()) return run_train(train_args);
    if (predict->parsed()) return run_predict(predict_args);
    if (evaluate->parsed()) return run_evaluate(evaluate_args);
    return kExitUsage;
  } catch (const prism::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
