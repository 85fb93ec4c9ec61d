#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace slotfill::nn {

enum class Variant { Past, Bidir };

std::string_view to_string(Variant v);
Variant parse_variant(std::string_view text);

/// Network shape and training hyperparameters.
struct NetConfig {
  std::size_t embed_dim = 100;
  std::size_t feature_dim = 0;  // 0, or kNumFeatures when use_features
  std::size_t context_length = 7;
  std::size_t filter_width = 5;
  std::size_t num_filters = 100;
  std::size_t num_labels = 0;
  Variant variant = Variant::Past;
  bool use_features = false;
  std::uint64_t seed = 42;
  double learning_rate = 0.01;
  std::size_t epochs = 30;
  std::size_t batch_size = 16;

  /// Throws ConfigError on the first violated constraint.
  void validate() const;

  std::size_t directions() const noexcept { return variant == Variant::Bidir ? 2 : 1; }
  std::size_t input_depth() const noexcept { return embed_dim + feature_dim; }
  std::size_t conv_positions() const noexcept { return context_length - filter_width + 1; }
  std::size_t filter_size() const noexcept { return filter_width * input_depth(); }
  std::size_t pooled_size() const noexcept { return directions() * num_filters; }
};

inline constexpr double kMomentum = 0.9;
inline constexpr double kInitRange = 0.05;

}  // namespace slotfill::nn
