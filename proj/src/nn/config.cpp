#include "slotfill/nn/config.hpp"

#include "slotfill/error.hpp"
#include "slotfill/feature_registry.hpp"

namespace slotfill::nn {

std::string_view to_string(Variant v) { return v == Variant::Bidir ? "bidir" : "past"; }

Variant parse_variant(std::string_view text) {
  if (text == "past") return Variant::Past;
  if (text == "bidir") return Variant::Bidir;
  throw ConfigError("variant must be 'past' or 'bidir', got '" + std::string(text) + "'");
}

void NetConfig::validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError("invalid network config: " + what);
  };
  require(embed_dim > 0, "embed_dim must be positive");
  require(context_length > 0, "context_length must be positive");
  require(filter_width > 0, "filter_width must be positive");
  require(filter_width <= context_length, "filter_width must not exceed context_length");
  require(num_filters > 0, "num_filters must be positive");
  require(num_labels > 0, "num_labels must be positive");
  require(feature_dim == 0 || feature_dim == kNumFeatures,
          "feature_dim must be 0 or " + std::to_string(kNumFeatures));
  require(use_features == (feature_dim == kNumFeatures), "feature_dim must be set iff use_features");
  require(learning_rate > 0.0, "learning_rate must be positive");
  require(batch_size > 0, "batch_size must be positive");
}

}  // namespace slotfill::nn
