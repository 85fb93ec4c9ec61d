#include <charconv>
#include <string>

#include "slotfill/error.hpp"
#include "slotfill/feature_registry.hpp"
#include "text_util.hpp"

namespace slotfill {

namespace {

constexpr std::string_view kRegistryMagic = "SLOTFILL-REGISTRY v1";

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

// Layout: magic line, then `[manifest]`, `[weights]` and `[keywords]`
// sections. Keyword rows are `feature_name<TAB>word`.
std::string serialize_registry(const FeatureRegistry& registry) {
  std::string out(kRegistryMagic);
  out += "\n[manifest]\n";
  out += registry.spec().serialize();
  out += "[weights]\n";
  for (std::size_t j = 0; j < registry.size(); ++j) {
    out += registry.spec().features()[j].name + '\t' + format_double(registry.weights()[j]) + '\n';
  }
  out += "[keywords]\n";
  for (std::size_t j = 0; j < registry.size(); ++j) {
    for (const auto& word : registry.keyword_set(j)) {
      out += registry.spec().features()[j].name + '\t' + word + '\n';
    }
  }
  return out;
}

FeatureRegistry parse_registry(std::string_view text, const LabelInventory& inventory) {
  const auto lines = detail::lines(text);
  if (lines.empty() || detail::trim(lines[0]) != kRegistryMagic) {
    throw ParseError("not a feature registry file (missing '" + std::string(kRegistryMagic) + "')", 1);
  }
  std::string manifest, weights;
  std::vector<std::pair<std::string, std::string>> keywords;
  std::string_view section;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::string_view line = detail::trim(lines[i]);
    if (line.empty()) continue;
    if (line.front() == '[') {
      section = line;
      continue;
    }
    if (section == "[manifest]") {
      manifest.append(line).push_back('\n');
    } else if (section == "[weights]") {
      weights.append(line).push_back('\n');
    } else if (section == "[keywords]") {
      const auto tab = line.find('\t');
      if (tab == std::string_view::npos) throw ParseError("expected 'feature<TAB>word'", i + 1);
      keywords.emplace_back(line.substr(0, tab), line.substr(tab + 1));
    } else {
      throw ParseError("content outside a section", i + 1);
    }
  }
  FeatureSpec spec = FeatureSpec::parse(manifest, inventory);
  std::vector<double> w = parse_weights(weights, spec);
  std::vector<std::set<std::string>> sets(spec.size());
  for (const auto& [name, word] : keywords) {
    const auto feature = spec.find(name);
    if (!feature) throw ParseError("keyword row names unknown feature '" + name + "'");
    sets[*feature].insert(word);
  }
  return FeatureRegistry(std::move(spec), std::move(sets), std::move(w));
}

void save_registry(const FeatureRegistry& registry, const std::filesystem::path& path) {
  detail::write_file(path, serialize_registry(registry));
}

FeatureRegistry load_registry(const std::filesystem::path& path, const LabelInventory& inventory) {
  return parse_registry(detail::read_file(path), inventory);
}

}  // namespace slotfill
