#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "slotfill/feature_registry.hpp"
#include "slotfill/nn/kernels.hpp"
#include "slotfill/nn/network.hpp"
#include "slotfill/random.hpp"

namespace slotfill::testing {

struct GradientProblem {
  nn::NetConfig cfg;
  nn::Parameters<double> params;
  std::vector<nn::EncodedSentence> data;
  std::vector<nn::SampleRef> batch;
};

/// Small random network, data and batch. Parameters are drawn wider than the
/// training init so that activations are not all near zero.
inline GradientProblem random_problem(std::uint64_t seed) {
  Rng rng(seed);
  GradientProblem pr;
  auto& c = pr.cfg;
  c.embed_dim = 2 + rng.below(4);
  c.use_features = rng.below(2) == 1;
  c.feature_dim = c.use_features ? kNumFeatures : 0;
  c.context_length = 2 + rng.below(5);
  c.filter_width = 1 + rng.below(c.context_length);
  c.num_filters = 2 + rng.below(4);
  c.num_labels = 3 + rng.below(6);
  c.variant = rng.below(2) ? nn::Variant::Bidir : nn::Variant::Past;
  c.validate();
  const std::size_t vocab = 4 + rng.below(6);

  pr.params = nn::Parameters<double>::zeros(c, vocab);
  pr.params.for_each_tensor([&](std::vector<double>& t) {
    for (auto& v : t) v = rng.uniform(-0.5, 0.5);
  });

  const std::size_t sentences = 1 + rng.below(3);
  for (std::size_t s = 0; s < sentences; ++s) {
    nn::EncodedSentence es;
    const std::size_t n = 1 + rng.below(6);
    for (std::size_t t = 0; t < n; ++t) {
      es.ids.push_back(static_cast<int>(rng.below(vocab)));
      es.classes.push_back(static_cast<int>(rng.below(c.num_labels)));
      if (c.use_features) {
        std::vector<double> f(kNumFeatures);
        double total = 0.0;
        for (auto& v : f) total += (v = rng.below(3) == 0 ? rng.unit() : 0.0);
        for (auto& v : f) v = total > 0 ? v / total : 0.0;
        es.features.insert(es.features.end(), f.begin(), f.end());
      }
      pr.batch.push_back({static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(t)});
    }
    pr.data.push_back(std::move(es));
  }
  return pr;
}

/// ReLU gates and max-pool winners of every sample: the piecewise-linear
/// region the loss is smooth in.
inline std::vector<std::uint32_t> activation_pattern(const GradientProblem& pr, const nn::Parameters<double>& p) {
  std::vector<std::uint32_t> out;
  nn::Trace<double> tr;
  for (const auto& ref : pr.batch) {
    nn::forward(p, pr.cfg, pr.data[ref.sentence], ref.position, -1, tr);
    for (std::size_t i = 0; i < tr.pooled.size(); ++i) {
      out.push_back(tr.pooled[i] > 0.0 ? tr.best[i] + 1 : 0);
    }
  }
  return out;
}

struct GradientCheck {
  std::size_t parameters = 0;
  std::size_t compared = 0;
  std::size_t kinks = 0;  // needed a smaller step than the nominal one
  double max_rel_error = 0.0;
};

inline double relative_error(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-8});
}

/// Central differences of the mean loss, one parameter at a time, against
/// the analytic gradient.
inline GradientCheck check_gradient(const GradientProblem& pr, double step = 1e-3) {
  GradientCheck out;
  const auto analytic = nn::loss_and_gradients<double>(pr.params, pr.cfg, pr.data, pr.batch).gradients;
  const auto base = activation_pattern(pr, pr.params);

  std::vector<double> flat_analytic;
  analytic.for_each_tensor([&](const std::vector<double>& t) { flat_analytic.insert(flat_analytic.end(), t.begin(), t.end()); });

  nn::Parameters<double> work = pr.params;
  std::size_t idx = 0;
  work.for_each_tensor([&](std::vector<double>& t) {
    for (auto& v : t) {
      const double orig = v;
      ++out.parameters;
      // Shrink the step while the interval straddles a kink.
      bool resolved = false;
      for (double h = step; h >= 1e-7; h /= 10) {
        v = orig + h;
        const double up = nn::mean_loss<double>(work, pr.cfg, pr.data, pr.batch);
        const bool up_same = activation_pattern(pr, work) == base;
        v = orig - h;
        const double down = nn::mean_loss<double>(work, pr.cfg, pr.data, pr.batch);
        const bool down_same = activation_pattern(pr, work) == base;
        v = orig;
        if (!up_same || !down_same) {
          if (h == step) ++out.kinks;
          continue;
        }
        out.max_rel_error = std::max(out.max_rel_error, relative_error(flat_analytic[idx], (up - down) / (2 * h)));
        resolved = true;
        break;
      }
      if (resolved) ++out.compared;
      ++idx;
    }
  });
  return out;
}

}  // namespace slotfill::testing
