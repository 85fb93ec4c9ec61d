#include "slotfill/feature_registry.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "slotfill/error.hpp"
#include "text_util.hpp"

namespace slotfill {

namespace {

int parse_int(std::string_view field, std::size_t line_no, std::string_view what) {
  field = detail::trim(field);
  int value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw ParseError("invalid " + std::string(what) + " '" + std::string(field) + "'", line_no);
  }
  return value;
}

std::vector<std::string_view> tab_or_ws_fields(std::string_view line) {
  if (line.find('\t') != std::string_view::npos) {
    std::vector<std::string_view> out;
    for (auto f : detail::split(line, '\t')) out.push_back(detail::trim(f));
    while (!out.empty() && out.back().empty()) out.pop_back();
    return out;
  }
  return detail::split_ws(line);
}

}  // namespace

FeatureSpec FeatureSpec::parse(std::string_view manifest, const LabelInventory& inventory) {
  std::vector<FeatureDef> rows;
  std::size_t line_no = 0;
  for (std::string_view raw : detail::lines(manifest)) {
    ++line_no;
    const std::string_view line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = tab_or_ws_fields(line);
    if (fields.size() != 3) throw ParseError("expected 'index name labels'", line_no);

    FeatureDef def;
    def.index = parse_int(fields[0], line_no, "feature index");
    def.name = std::string(fields[1]);
    if (fields[2] == "remainder") {
      def.remainder = true;
    } else {
      for (auto item : detail::split(fields[2], ',')) {
        if (detail::trim(item).empty()) continue;  // tolerate a trailing comma
        const int label = parse_int(item, line_no, "label index");
        if (!inventory.contains(label)) {
          throw ConfigError("feature '" + def.name + "': label index " + std::to_string(label) +
                            " out of range 1.." + std::to_string(inventory.size()));
        }
        def.labels.push_back(label);
      }
      if (def.labels.empty()) throw ConfigError("feature '" + def.name + "' lists no labels");
    }
    rows.push_back(std::move(def));
  }

  if (rows.size() != kNumFeatures) {
    throw ConfigError("feature manifest must list " + std::to_string(kNumFeatures) + " features, found " +
                      std::to_string(rows.size()));
  }
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.index < b.index; });
  std::set<std::string_view> names;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].index != static_cast<int>(i) + 1) {
      throw ConfigError("feature indexes must be 1.." + std::to_string(kNumFeatures) + " without gaps");
    }
    if (!names.insert(rows[i].name).second) throw ConfigError("duplicate feature name '" + rows[i].name + "'");
  }
  const auto remainders = std::count_if(rows.begin(), rows.end(), [](const auto& r) { return r.remainder; });
  if (remainders != 1) throw ConfigError("feature manifest needs exactly one 'remainder' row");

  FeatureSpec spec;
  constexpr std::size_t kUnassigned = static_cast<std::size_t>(-1);
  spec.feature_of_label_.assign(inventory.size(), kUnassigned);
  std::size_t remainder_pos = 0;
  for (std::size_t f = 0; f < rows.size(); ++f) {
    if (rows[f].remainder) {
      remainder_pos = f;
      continue;
    }
    for (int label : rows[f].labels) {
      auto& slot = spec.feature_of_label_[static_cast<std::size_t>(label) - 1];
      if (slot != kUnassigned) {
        throw ConfigError("label index " + std::to_string(label) + " assigned to both '" + rows[slot].name +
                          "' and '" + rows[f].name + "'");
      }
      slot = f;
    }
    std::sort(rows[f].labels.begin(), rows[f].labels.end());
  }
  for (std::size_t i = 0; i < spec.feature_of_label_.size(); ++i) {
    if (spec.feature_of_label_[i] == kUnassigned) {
      spec.feature_of_label_[i] = remainder_pos;
      rows[remainder_pos].labels.push_back(static_cast<int>(i) + 1);
    }
  }
  spec.features_ = std::move(rows);
  return spec;
}

FeatureSpec FeatureSpec::load(const std::filesystem::path& path, const LabelInventory& inventory) {
  return parse(detail::read_file(path), inventory);
}

std::optional<std::size_t> FeatureSpec::find(std::string_view name) const {
  for (std::size_t i = 0; i < features_.size(); ++i)
    if (features_[i].name == name) return i;
  return std::nullopt;
}

std::size_t FeatureSpec::feature_of_label(int label) const {
  if (label < 1 || static_cast<std::size_t>(label) > feature_of_label_.size()) {
    throw ConfigError("label index out of range: " + std::to_string(label));
  }
  return feature_of_label_[static_cast<std::size_t>(label) - 1];
}

std::string FeatureSpec::serialize() const {
  std::string out;
  for (const auto& f : features_) {
    out += std::to_string(f.index) + '\t' + f.name + '\t';
    if (f.remainder) {
      out += "remainder";
    } else {
      for (std::size_t i = 0; i < f.labels.size(); ++i) {
        if (i > 0) out += ',';
        out += std::to_string(f.labels[i]);
      }
    }
    out += '\n';
  }
  return out;
}

std::size_t label_count(const FeatureSpec& spec, std::size_t feature) {
  if (feature < 1 || feature > spec.size()) {
    throw ConfigError("feature index out of range: " + std::to_string(feature));
  }
  return spec.features()[feature - 1].labels.size();
}

std::vector<std::string> parse_gazetteer_entries(std::string_view text) {
  std::vector<std::string> entries;
  for (std::string_view raw : detail::lines(text)) {
    const std::string_view line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    std::string entry;
    for (auto word : detail::split_ws(line)) {
      if (!entry.empty()) entry += ' ';
      entry += normalize(word);
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

MultiwordSplit split_multiword(std::span<const std::string> entries) {
  MultiwordSplit out;
  for (const auto& entry : entries) {
    const auto words = detail::split_ws(entry);
    if (words.empty()) throw ConfigError("empty gazetteer entry");
    out.first_words.emplace(words.front());
    for (std::size_t i = 1; i < words.size(); ++i) out.rest_words.emplace(words[i]);
  }
  return out;
}

std::vector<Gazetteer> gazetteers_from_entries(
    const FeatureSpec& spec, const std::map<std::string, std::vector<std::string>>& entries_by_feature) {
  std::vector<Gazetteer> out(spec.size());
  for (std::size_t f = 0; f < spec.size(); ++f) out[f].feature_name = spec.features()[f].name;

  for (const auto& [name, entries] : entries_by_feature) {
    const auto feature = spec.find(name);
    if (!feature) throw ConfigError("gazetteer '" + name + "' names no feature in the manifest");

    std::optional<std::size_t> partner;
    if (name.size() > 2 && name.ends_with("_1")) partner = spec.find(name.substr(0, name.size() - 2) + "_2");

    if (partner) {
      auto split = split_multiword(entries);
      out[*feature].keywords.merge(split.first_words);
      out[*partner].keywords.merge(split.rest_words);
    } else {
      for (const auto& entry : entries) {
        const auto words = detail::split_ws(entry);
        if (words.empty()) throw ConfigError("empty entry in gazetteer '" + name + "'");
        for (auto w : words) out[*feature].keywords.emplace(w);
      }
    }
  }
  return out;
}

std::vector<Gazetteer> load_gazetteer_dir(const std::filesystem::path& dir, const FeatureSpec& spec) {
  if (!std::filesystem::is_directory(dir)) throw ConfigError("gazetteer directory not found: " + dir.string());
  std::map<std::string, std::vector<std::string>> entries;
  for (const auto& item : std::filesystem::directory_iterator(dir)) {
    if (!item.is_regular_file() || item.path().extension() != ".txt") continue;
    const std::string name = item.path().stem().string();
    if (!spec.find(name)) {
      throw ConfigError("gazetteer file " + item.path().string() + " names no feature in the manifest");
    }
    entries[name] = parse_gazetteer_entries(detail::read_file(item.path()));
  }
  return gazetteers_from_entries(spec, entries);
}

std::vector<double> parse_weights(std::string_view text, const FeatureSpec& spec) {
  std::vector<double> weights(spec.size(), 1.0);
  std::size_t line_no = 0;
  for (std::string_view raw : detail::lines(text)) {
    ++line_no;
    const std::string_view line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = tab_or_ws_fields(line);
    if (fields.size() != 2) throw ParseError("expected 'name weight'", line_no);
    const auto feature = spec.find(fields[0]);
    if (!feature) throw ParseError("unknown feature '" + std::string(fields[0]) + "'", line_no);
    double w = 0.0;
    auto [ptr, ec] = std::from_chars(fields[1].data(), fields[1].data() + fields[1].size(), w);
    if (ec != std::errc() || ptr != fields[1].data() + fields[1].size() || !(w > 0.0) || !std::isfinite(w)) {
      throw ParseError("weight must be a positive number, got '" + std::string(fields[1]) + "'", line_no);
    }
    weights[*feature] = w;
  }
  return weights;
}

FeatureRegistry::FeatureRegistry(FeatureSpec spec, std::vector<std::set<std::string>> keyword_sets,
                                 std::vector<double> weights)
    : spec_(std::move(spec)), keyword_sets_(std::move(keyword_sets)), weights_(std::move(weights)) {
  if (keyword_sets_.size() != spec_.size()) throw ConfigError("one keyword set per feature required");
  if (weights_.empty()) weights_.assign(spec_.size(), 1.0);
  if (weights_.size() != spec_.size()) throw ConfigError("one weight per feature required");
  for (double w : weights_) {
    if (!(w > 0.0) || !std::isfinite(w)) throw ConfigError("feature weights must be positive and finite");
  }
  label_counts_.reserve(spec_.size());
  for (const auto& f : spec_.features()) label_counts_.push_back(static_cast<double>(f.labels.size()));
  for (std::size_t j = 0; j < keyword_sets_.size(); ++j) {
    for (const auto& word : keyword_sets_[j]) masks_[word] |= FeatureMask{1} << j;
  }
}

std::size_t FeatureRegistry::total_keywords() const noexcept {
  std::size_t n = 0;
  for (const auto& s : keyword_sets_) n += s.size();
  return n;
}

FeatureMask FeatureRegistry::mask(std::string_view word) const {
  auto it = masks_.find(normalize(word));
  return it == masks_.end() ? 0 : it->second;
}

std::array<bool, kNumFeatures> FeatureRegistry::membership(std::string_view word) const {
  const FeatureMask m = mask(word);
  std::array<bool, kNumFeatures> out{};
  for (std::size_t j = 0; j < kNumFeatures; ++j) out[j] = (m >> j) & 1U;
  return out;
}

FeatureRegistry build_keyword_sets(const FeatureSpec& spec, std::span<const Gazetteer> gazetteers,
                                   const Corpus* corpus, std::vector<double> weights) {
  std::vector<std::set<std::string>> sets(spec.size());
  for (const auto& g : gazetteers) {
    const auto feature = spec.find(g.feature_name);
    if (!feature) throw ConfigError("gazetteer '" + g.feature_name + "' names no feature in the manifest");
    for (const auto& word : g.keywords) {
      if (word.empty()) throw ConfigError("empty keyword in gazetteer '" + g.feature_name + "'");
      sets[*feature].insert(normalize(word));
    }
  }
  if (corpus != nullptr) {
    for (const auto& s : corpus->sentences)
      for (const auto& t : s.tokens) sets[spec.feature_of_label(t.label)].insert(t.norm);
  }
  return FeatureRegistry(spec, std::move(sets), std::move(weights));
}

}  // namespace slotfill
