#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "slotfill/corpus.hpp"
#include "slotfill/feature_registry.hpp"

namespace slotfill {

/// Normalized word feature vector. All zeros when the word is in no keyword set,
/// otherwise non-negative components summing to 1.
using FeatureVector = std::array<double, kNumFeatures>;

/// component_j = w_j n_j x_j / sum_k w_k n_k x_k, or all zeros when the
/// denominator vanishes. `counts` and `weights` hold kNumFeatures entries.
FeatureVector normalized_feature_vector(FeatureMask membership, std::span<const double> counts,
                                        std::span<const double> weights);

FeatureVector feature_vector(const FeatureRegistry& registry, std::string_view word);

std::vector<FeatureVector> featurize_sentence(const FeatureRegistry& registry, const Sentence& sentence);

/// `word<TAB>c1,...,c18` with six decimals.
std::string format_feature_line(std::string_view word, const FeatureVector& v);

}  // namespace slotfill
