#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "slotfill/corpus.hpp"

namespace slotfill {

inline constexpr std::size_t kNumFeatures = 18;

/// Bit j set <=> the word is a member of feature j's keyword set (0-based j).
using FeatureMask = std::uint32_t;
static_assert(kNumFeatures <= 32);

struct FeatureDef {
  int index = 0;  // 1-based, as in the manifest
  std::string name;
  std::vector<int> labels;  // sorted label indexes; filled in for the remainder row too
  bool remainder = false;
};

/// Partition of the label inventory into named features.
class FeatureSpec {
 public:
  /// Rows are `index<TAB>name<TAB>comma-separated label indexes | remainder`.
  static FeatureSpec parse(std::string_view manifest, const LabelInventory& inventory);
  static FeatureSpec load(const std::filesystem::path& path, const LabelInventory& inventory);

  /// Features ordered by their manifest index.
  const std::vector<FeatureDef>& features() const noexcept { return features_; }
  std::size_t size() const noexcept { return features_.size(); }
  std::size_t inventory_size() const noexcept { return feature_of_label_.size(); }

  /// 0-based position of a named feature.
  std::optional<std::size_t> find(std::string_view name) const;
  /// 0-based feature holding a 1-based label index.
  std::size_t feature_of_label(int label) const;

  std::string serialize() const;

 private:
  std::vector<FeatureDef> features_;
  std::vector<std::size_t> feature_of_label_;
};

/// Number of labels grouped under the 1-based feature index (n_j).
std::size_t label_count(const FeatureSpec& spec, std::size_t feature);

struct Gazetteer {
  std::string feature_name;
  std::set<std::string> keywords;
};

/// Entries of a gazetteer file: normalized, whitespace-collapsed, with blank
/// lines and `#` comments dropped. Entries may still hold several words.
std::vector<std::string> parse_gazetteer_entries(std::string_view text);

struct MultiwordSplit {
  std::set<std::string> first_words;
  std::set<std::string> rest_words;
};

/// First word of every entry goes to `first_words`, the remaining words to
/// `rest_words`.
MultiwordSplit split_multiword(std::span<const std::string> entries);

/// Maps file-level entries onto features. A file for `<base>_1` whose partner
/// `<base>_2` exists is split with split_multiword; every other file
/// contributes all words of all entries to its own feature.
std::vector<Gazetteer> gazetteers_from_entries(
    const FeatureSpec& spec, const std::map<std::string, std::vector<std::string>>& entries_by_feature);

/// Reads every `<feature_name>.txt` in `dir`.
std::vector<Gazetteer> load_gazetteer_dir(const std::filesystem::path& dir, const FeatureSpec& spec);

/// Parses `name<TAB>weight` rows; features without a row keep weight 1.0.
std::vector<double> parse_weights(std::string_view text, const FeatureSpec& spec);

/// Keyword sets S_j, label counts n_j and weights for every feature.
class FeatureRegistry {
 public:
  FeatureRegistry(FeatureSpec spec, std::vector<std::set<std::string>> keyword_sets,
                  std::vector<double> weights);

  const FeatureSpec& spec() const noexcept { return spec_; }
  std::size_t size() const noexcept { return spec_.size(); }
  const std::set<std::string>& keyword_set(std::size_t feature) const { return keyword_sets_.at(feature); }
  std::span<const double> label_counts() const noexcept { return label_counts_; }
  std::span<const double> weights() const noexcept { return weights_; }
  std::size_t total_keywords() const noexcept;

  /// Membership of the normalized word in each feature set.
  FeatureMask mask(std::string_view word) const;
  std::array<bool, kNumFeatures> membership(std::string_view word) const;

 private:
  FeatureSpec spec_;
  std::vector<std::set<std::string>> keyword_sets_;
  std::vector<double> label_counts_;
  std::vector<double> weights_;
  std::unordered_map<std::string, FeatureMask> masks_;
};

/// S_j = gazetteer keywords of j plus the norms of corpus tokens whose label
/// belongs to j. `corpus` may be null. Empty `weights` means all 1.0.
FeatureRegistry build_keyword_sets(const FeatureSpec& spec, std::span<const Gazetteer> gazetteers,
                                   const Corpus* corpus, std::vector<double> weights = {});

/// Persisted registry, so that evaluation sees the keyword sets used in training.
std::string serialize_registry(const FeatureRegistry& registry);
FeatureRegistry parse_registry(std::string_view text, const LabelInventory& inventory);
void save_registry(const FeatureRegistry& registry, const std::filesystem::path& path);
FeatureRegistry load_registry(const std::filesystem::path& path, const LabelInventory& inventory);

}  // namespace slotfill
