#include <gtest/gtest.h>

#include <cmath>

#include "slotfill/error.hpp"
#include "slotfill/nn/model.hpp"
#include "slotfill/synth.hpp"
#include "test_util.hpp"

namespace slotfill::nn {
namespace {

struct Setup {
  SyntheticBundle bundle;
  FeatureRegistry registry;
};

Setup make_setup(std::size_t sentences, std::uint64_t seed) {
  auto cfg = default_synth_config();
  cfg.train_sentences = sentences;
  cfg.test_sentences = 0;
  auto bundle = gen_synthetic(cfg, seed);
  auto registry = testing::synthetic_registry(bundle);
  return {std::move(bundle), std::move(registry)};
}

Model small_model(const Setup& s, bool features, Variant variant, std::size_t epochs) {
  NetConfig c;
  c.embed_dim = 16;
  c.num_filters = 16;
  c.use_features = features;
  c.feature_dim = features ? kNumFeatures : 0;
  c.variant = variant;
  c.num_labels = s.bundle.labels.size();
  c.epochs = epochs;
  c.learning_rate = 0.05;
  return init_model(c, Vocabulary::build(s.bundle.train, 0), s.bundle.labels);
}

TEST(Fit, LossDecreases) {
  const auto s = make_setup(30, 7);
  auto m = small_model(s, true, Variant::Past, 10);
  const auto report = fit(m, s.bundle.train, &s.registry);
  ASSERT_EQ(report.epoch_loss.size(), 10u);
  EXPECT_LT(report.epoch_loss.back(), report.epoch_loss.front() * 0.5);
  EXPECT_TRUE(parameters_finite(m.params));
}

TEST(Fit, SameSeedSameTrajectoryAndModel) {
  const auto s = make_setup(20, 3);
  for (auto variant : {Variant::Past, Variant::Bidir}) {
    auto a = small_model(s, true, variant, 3);
    auto b = small_model(s, true, variant, 3);
    const auto ra = fit(a, s.bundle.train, &s.registry);
    const auto rb = fit(b, s.bundle.train, &s.registry);
    EXPECT_EQ(ra.epoch_loss, rb.epoch_loss);
    EXPECT_TRUE(a.params == b.params);
  }
}

TEST(Fit, SerialAndParallelKernelsTrainIdentically) {
  const auto s = make_setup(20, 5);
  auto a = small_model(s, true, Variant::Bidir, 2);
  auto b = small_model(s, true, Variant::Bidir, 2);
  FitOptions serial;
  serial.parallel = false;
  EXPECT_EQ(fit(a, s.bundle.train, &s.registry).epoch_loss, fit(b, s.bundle.train, &s.registry, serial).epoch_loss);
  EXPECT_TRUE(a.params == b.params);
}

TEST(Fit, DifferentSeedDifferentModel) {
  const auto s = make_setup(20, 3);
  auto a = small_model(s, false, Variant::Past, 1);
  auto b = a;
  b.config.seed = a.config.seed + 1;
  fit(a, s.bundle.train, nullptr);
  fit(b, s.bundle.train, nullptr);
  EXPECT_FALSE(a.params == b.params);
}

TEST(Fit, HugeLearningRateRaisesNumericError) {
  const auto s = make_setup(20, 3);
  auto m = small_model(s, true, Variant::Past, 30);
  m.config.learning_rate = 1e38;  // first update overflows float
  try {
    fit(m, s.bundle.train, &s.registry);
    FAIL() << "expected NumericError";
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("epoch"), std::string::npos);
  }
}

TEST(Fit, NanParameterRaisesNumericError) {
  const auto s = make_setup(10, 3);
  auto m = small_model(s, false, Variant::Past, 1);
  std::fill(m.params.classifier_bias.begin(), m.params.classifier_bias.end(), std::nanf(""));
  EXPECT_FALSE(parameters_finite(m.params));
  EXPECT_THROW(fit(m, s.bundle.train, nullptr), NumericError);
}

TEST(Fit, EarlyStopCallback) {
  const auto s = make_setup(10, 3);
  auto m = small_model(s, false, Variant::Past, 30);
  FitOptions opt;
  opt.after_epoch = [](std::size_t epoch, double, const Model&) { return epoch < 2; };
  EXPECT_EQ(fit(m, s.bundle.train, nullptr, opt).epoch_loss.size(), 3u);
}

TEST(Fit, EmptyCorpusIsAnError) {
  const auto s = make_setup(10, 3);
  auto m = small_model(s, false, Variant::Past, 1);
  EXPECT_THROW(fit(m, Corpus{}, nullptr), ConfigError);
}

// Post-overfit argmax equals gold on the training sentences.
TEST(Fit, OverfitsASmallCorpus) {
  const auto s = make_setup(15, 9);
  auto m = small_model(s, true, Variant::Bidir, 150);
  FitOptions opt;
  opt.after_epoch = [&](std::size_t, double, const Model& model) {
    return evaluate(model, &s.registry, s.bundle.train).token_accuracy < 1.0;
  };
  fit(m, s.bundle.train, &s.registry, opt);
  for (const auto& sent : s.bundle.train.sentences) {
    const auto labels = predict_labels(m, sent, &s.registry);
    for (std::size_t i = 0; i < sent.size(); ++i) EXPECT_EQ(labels[i], sent.tokens[i].label);
  }
}

}  // namespace
}  // namespace slotfill::nn
