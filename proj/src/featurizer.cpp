#include "slotfill/featurizer.hpp"

#include <cstdio>

#include "slotfill/error.hpp"

namespace slotfill {

FeatureVector normalized_feature_vector(FeatureMask membership, std::span<const double> counts,
                                        std::span<const double> weights) {
  if (counts.size() != kNumFeatures || weights.size() != kNumFeatures) {
    throw ConfigError("feature vector needs " + std::to_string(kNumFeatures) + " counts and weights");
  }
  FeatureVector v{};
  double total = 0.0;
  for (std::size_t j = 0; j < kNumFeatures; ++j) {
    if ((membership >> j) & 1U) {
      v[j] = weights[j] * counts[j];
      total += v[j];
    }
  }
  if (total <= 0.0) return FeatureVector{};
  for (double& c : v) c /= total;
  return v;
}

FeatureVector feature_vector(const FeatureRegistry& registry, std::string_view word) {
  return normalized_feature_vector(registry.mask(word), registry.label_counts(), registry.weights());
}

std::vector<FeatureVector> featurize_sentence(const FeatureRegistry& registry, const Sentence& sentence) {
  std::vector<FeatureVector> out;
  out.reserve(sentence.size());
  for (const auto& t : sentence.tokens) out.push_back(feature_vector(registry, t.norm));
  return out;
}

std::string format_feature_line(std::string_view word, const FeatureVector& v) {
  std::string out(word);
  out += '\t';
  char buf[32];
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (j > 0) out += ',';
    std::snprintf(buf, sizeof buf, "%.6f", v[j]);
    out += buf;
  }
  return out;
}

}  // namespace slotfill
