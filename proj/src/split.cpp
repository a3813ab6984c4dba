#include "prism/split.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "prism/error.hpp"
#include "prism/rng.hpp"

namespace prism {

namespace {

constexpr int kPairGroups = 20;  // prompt couples (p_i, p_{i+20})

int pair_group(int prompt_id) { return (prompt_id - 1) % kPairGroups; }

SplitSpec finalize(std::vector<Index> train, std::vector<Index> test,
                   std::uint64_t stream, Grouping grouping) {
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  SplitSpec spec;
  spec.seed = stream;
  spec.train_indices = std::move(train);
  spec.test_indices = std::move(test);
  spec.grouping = grouping;
  return spec;
}

SplitSpec prompt_pair_split(const std::vector<std::optional<int>>& prompt_ids,
                            double ratio, std::uint64_t stream) {
  const double test_groups_real = (1.0 - ratio) * kPairGroups;
  const int test_groups = static_cast<int>(std::lround(test_groups_real));
  if (std::abs(test_groups_real - test_groups) > 1e-9 || test_groups < 1 ||
      test_groups >= kPairGroups) {
    raise(errc::invalid_ratio,
          "prompt-pair grouping needs ratio*20 integral with both sides nonempty");
  }

  // Partial Fisher-Yates: the first test_groups entries become the test side.
  std::vector<int> groups(kPairGroups);
  for (int g = 0; g < kPairGroups; ++g) groups[static_cast<std::size_t>(g)] = g;
  SplitMix64 rng(stream);
  for (int i = 0; i < test_groups; ++i) {
    int j = i + static_cast<int>(rng.bounded(static_cast<std::uint64_t>(kPairGroups - i)));
    std::swap(groups[static_cast<std::size_t>(i)], groups[static_cast<std::size_t>(j)]);
  }
  std::array<bool, kPairGroups> in_test{};
  for (int i = 0; i < test_groups; ++i) in_test[static_cast<std::size_t>(groups[static_cast<std::size_t>(i)])] = true;

  std::vector<Index> train, test;
  for (std::size_t i = 0; i < prompt_ids.size(); ++i) {
    const int g = pair_group(*prompt_ids[i]);
    (in_test[static_cast<std::size_t>(g)] ? test : train).push_back(static_cast<Index>(i));
  }
  return finalize(std::move(train), std::move(test), stream, Grouping::prompt_pairs);
}

SplitSpec stratified_split(const std::vector<std::string>& labels, double ratio,
                           std::uint64_t stream) {
  std::map<std::string, std::vector<Index>> by_label;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    by_label[labels[i]].push_back(static_cast<Index>(i));
  }

  SplitMix64 rng(stream);
  std::vector<Index> train, test;
  for (auto& [label, members] : by_label) {
    rng.shuffle(members);
    const auto n = static_cast<long>(members.size());
    long n_train = std::lround(ratio * static_cast<double>(n));
    if (n >= 2) n_train = std::clamp(n_train, 1L, n - 1);
    else n_train = n;
    for (long i = 0; i < n; ++i) {
      (i < n_train ? train : test).push_back(members[static_cast<std::size_t>(i)]);
    }
  }
  return finalize(std::move(train), std::move(test), stream,
                  Grouping::random_stratified);
}

}  // namespace

const char* grouping_name(Grouping grouping) {
  switch (grouping) {
    case Grouping::prompt_pairs: return "prompt-pairs";
    case Grouping::random_stratified: return "random-stratified";
    case Grouping::published: return "published";
  }
  return "prompt-pairs";
}

Grouping grouping_from_name(const std::string& name) {
  if (name == "prompt-pairs") return Grouping::prompt_pairs;
  if (name == "random-stratified") return Grouping::random_stratified;
  if (name == "published") return Grouping::published;
  raise(errc::invalid_argument, "unknown grouping '" + name + "'");
}

std::vector<SplitSpec> make_splits(const std::vector<std::optional<int>>& prompt_ids,
                                   const std::vector<std::string>& labels,
                                   const SplitOptions& options) {
  if (labels.empty()) raise(errc::invalid_argument, "no items to split");
  if (options.n_splits < 1) raise(errc::invalid_argument, "n_splits must be >= 1");
  if (!(options.ratio > 0.0 && options.ratio < 1.0)) {
    raise(errc::invalid_ratio, "ratio must lie in (0, 1)");
  }

  if (options.grouping == Grouping::prompt_pairs) {
    if (prompt_ids.size() != labels.size()) {
      raise(errc::length_mismatch, "prompt_ids and labels differ in length");
    }
    for (std::size_t i = 0; i < prompt_ids.size(); ++i) {
      if (!prompt_ids[i]) {
        raise(errc::missing_prompt_id,
              "item " + std::to_string(i) + " has no prompt_id");
      }
    }
  }

  std::vector<SplitSpec> splits;
  splits.reserve(static_cast<std::size_t>(options.n_splits));

  if (options.grouping == Grouping::published) {
    if (!options.published_test ||
        options.published_test->size() != labels.size()) {
      raise(errc::invalid_argument,
            "published grouping needs a test-membership list of matching length");
    }
    std::vector<Index> train, test;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      ((*options.published_test)[i] ? test : train).push_back(static_cast<Index>(i));
    }
    if (train.empty() || test.empty()) {
      raise(errc::invalid_argument, "published split leaves one side empty");
    }
    // The published partition is fixed; replicate it per requested split.
    for (int s = 0; s < options.n_splits; ++s) {
      splits.push_back(finalize(train, test, derive_stream(options.seed, 0),
                                Grouping::published));
    }
    return splits;
  }

  for (int s = 0; s < options.n_splits; ++s) {
    const std::uint64_t stream =
        derive_stream(options.seed, static_cast<std::uint64_t>(s));
    if (options.grouping == Grouping::prompt_pairs) {
      splits.push_back(prompt_pair_split(prompt_ids, options.ratio, stream));
    } else {
      splits.push_back(stratified_split(labels, options.ratio, stream));
    }
  }
  return splits;
}

std::vector<std::string> binarize_labels(const std::vector<std::string>& labels,
                                         const std::set<std::string>& fake_labels) {
  if (fake_labels.empty()) {
    raise(errc::invalid_argument, "fake label set is empty");
  }
  std::set<std::string> observed(labels.begin(), labels.end());
  for (const std::string& lab : fake_labels) {
    if (!observed.count(lab)) {
      raise(errc::unknown_label, "fake label '" + lab + "' never occurs");
    }
  }

  std::vector<std::string> out;
  out.reserve(labels.size());
  bool any_real = false;
  bool any_fake = false;
  for (const std::string& lab : labels) {
    if (fake_labels.count(lab)) {
      out.emplace_back("fake");
      any_fake = true;
    } else {
      out.emplace_back("real");
      any_real = true;
    }
  }
  if (!any_real) raise(errc::empty_class, "binarization leaves no real class");
  if (!any_fake) raise(errc::empty_class, "binarization leaves no fake class");
  return out;
}

std::vector<ManifestEntry> binarize(std::vector<ManifestEntry> entries,
                                    const std::set<std::string>& fake_labels) {
  std::vector<std::string> labels;
  labels.reserve(entries.size());
  for (const ManifestEntry& e : entries) labels.push_back(e.label);
  std::vector<std::string> mapped = binarize_labels(labels, fake_labels);
  for (std::size_t i = 0; i < entries.size(); ++i) entries[i].label = mapped[i];
  return entries;
}

}  // namespace prism
