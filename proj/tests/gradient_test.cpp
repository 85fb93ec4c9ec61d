#include <gtest/gtest.h>

#include "gradient_oracle.hpp"
#include "slotfill/error.hpp"

namespace slotfill::testing {
namespace {

TEST(GradientOracle, EveryParameterMatchesCentralDifferences) {
  std::size_t kinks = 0;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const auto pr = random_problem(seed);
    const auto r = check_gradient(pr);
    ASSERT_LE(r.parameters, 5000u);
    EXPECT_EQ(r.compared, r.parameters) << "seed " << seed;
    EXPECT_LE(r.max_rel_error, 1e-3) << "seed " << seed;
    kinks += r.kinks;
  }
  RecordProperty("kinks", static_cast<int>(kinks));
}

// The oracle must notice a wrong gradient, or the test above proves nothing.
TEST(GradientOracle, DetectsAPerturbedGradient) {
  auto pr = random_problem(5);
  const auto good = nn::loss_and_gradients<double>(pr.params, pr.cfg, pr.data, pr.batch).gradients;
  double numeric = 0.0;
  {
    auto work = pr.params;
    const double h = 1e-3;
    work.classifier_bias[0] += h;
    const double up = nn::mean_loss<double>(work, pr.cfg, pr.data, pr.batch);
    work.classifier_bias[0] -= 2 * h;
    const double down = nn::mean_loss<double>(work, pr.cfg, pr.data, pr.batch);
    numeric = (up - down) / (2 * h);
  }
  EXPECT_LE(relative_error(good.classifier_bias[0], numeric), 1e-3);
  EXPECT_GT(relative_error(good.classifier_bias[0] * 1.01 + 1e-3, numeric), 1e-3);
}

TEST(GradientOracle, FloatAndDoubleGradientsAgree) {
  const auto pr = random_problem(12);
  const auto d = nn::loss_and_gradients<double>(pr.params, pr.cfg, pr.data, pr.batch);
  const auto pf = pr.params.cast<float>();
  const auto f = nn::loss_and_gradients<float>(pf, pr.cfg, pr.data, pr.batch);
  EXPECT_NEAR(f.loss, d.loss, 1e-4);
  std::vector<double> a, b;
  d.gradients.for_each_tensor([&](const std::vector<double>& t) { a.insert(a.end(), t.begin(), t.end()); });
  f.gradients.for_each_tensor([&](const std::vector<float>& t) { b.insert(b.end(), t.begin(), t.end()); });
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-4);
}

TEST(LossAndGradients, RejectsBadBatches) {
  auto pr = random_problem(3);
  EXPECT_THROW(nn::loss_and_gradients<double>(pr.params, pr.cfg, pr.data, {}), ConfigError);
  pr.data[0].classes[0] = static_cast<int>(pr.cfg.num_labels);
  EXPECT_THROW(nn::loss_and_gradients<double>(pr.params, pr.cfg, pr.data, pr.batch), ConfigError);
}

}  // namespace
}  // namespace slotfill::testing
