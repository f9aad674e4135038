/*
 * Copyright 2026 The featrank Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "featrank/errors.hpp"
#include "learners.hpp"

namespace featrank {

double Tree::predict(const double* x) const {
  int node = 0;
  while (nodes[static_cast<std::size_t>(node)].feature >= 0) {
    const auto& n = nodes[static_cast<std::size_t>(node)];
    node = x[n.feature] <= n.threshold ? n.left : n.right;
  }
  return nodes[static_cast<std::size_t>(node)].value;
}

std::size_t Tree::leaf_count() const {
  return static_cast<std::size_t>(std::count_if(
      nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.feature < 0; }));
}

namespace internal {
namespace {

constexpr double kMinGain = 1e-12;

struct GiniCriterion {
  std::span<const int> labels;

  struct Acc {
    std::size_t n = 0;
    std::size_t pos = 0;
  };
  void add(Acc& a, std::size_t row) const {
    ++a.n;
    a.pos += static_cast<std::size_t>(labels[row]);
  }
  static Acc minus(const Acc& a, const Acc& b) { return {a.n - b.n, a.pos - b.pos}; }
  // n times the Gini impurity.
  static double cost(const Acc& a) {
    if (a.n == 0) return 0.0;
    const double pos = static_cast<double>(a.pos);
    const double neg = static_cast<double>(a.n - a.pos);
    return 2.0 * pos * neg / static_cast<double>(a.n);
  }
  static double leaf(const Acc& a) {
    return static_cast<double>(a.pos) / static_cast<double>(a.n);
  }
  static bool pure(const Acc& a) { return a.pos == 0 || a.pos == a.n; }
};

struct SquaredErrorCriterion {
  std::span<const double> gradient;
  std::span<const double> hessian;

  struct Acc {
    std::size_t n = 0;
    double g = 0.0;
    double h = 0.0;
  };
  void add(Acc& a, std::size_t row) const {
    ++a.n;
    a.g += gradient[row];
    a.h += hessian[row];
  }
  static Acc minus(const Acc& a, const Acc& b) {
    return {a.n - b.n, a.g - b.g, a.h - b.h};
  }
  // Squared error up to a constant shared by every split of the node.
  static double cost(const Acc& a) {
    return a.n == 0 ? 0.0 : -a.g * a.g / static_cast<double>(a.n);
  }
  static double leaf(const Acc& a) { return a.h > 1e-12 ? a.g / a.h : 0.0; }
  static bool pure(const Acc&) { return false; }
};

template <typename Criterion>
class Growth {
 public:
  Growth(const Matrix& inputs,
         const std::vector<std::vector<std::size_t>>& order,
         std::span<const std::size_t> sample, const Criterion& criterion,
         const TreeConfig& config, Rng* rng)
      : inputs_(inputs), sample_(sample), criterion_(criterion),
        config_(config), rng_(rng) {
    const std::size_t m = sample.size();
    const std::size_t d = inputs.cols;
    // Positions of each row in the sample (CSR layout).
    std::vector<std::size_t> start(inputs.rows + 1, 0);
    for (std::size_t r : sample) ++start[r + 1];
    std::partial_sum(start.begin(), start.end(), start.begin());
    std::vector<std::uint32_t> positions(m);
    {
      std::vector<std::size_t> fill(start.begin(), start.end() - 1);
      for (std::size_t p = 0; p < m; ++p) {
        positions[fill[sample[p]]++] = static_cast<std::uint32_t>(p);
      }
    }
    lists_.assign(d, std::vector<std::uint32_t>(m));
    for (std::size_t f = 0; f < d; ++f) {
      std::size_t idx = 0;
      for (std::size_t r : order[f]) {
        for (std::size_t q = start[r]; q < start[r + 1]; ++q) {
          lists_[f][idx++] = positions[q];
        }
      }
    }
    goes_left_.assign(m, 0);
    buffer_.resize(m);
    features_.resize(d);
    std::iota(features_.begin(), features_.end(), std::size_t{0});
  }

  Tree run() {
    if (sample_.empty()) throw ComputeError("cannot grow a tree on no rows");
    grow(0, sample_.size(), 0);
    return std::move(tree_);
  }

 private:
  double value(std::uint32_t pos, std::size_t f) const {
    return inputs_.at(sample_[pos], f);
  }

  int grow(std::size_t begin, std::size_t end, int depth) {
    typename Criterion::Acc total;
    for (std::size_t t = begin; t < end; ++t) {
      criterion_.add(total, sample_[lists_[0][t]]);
    }
    const int id = static_cast<int>(tree_.nodes.size());
    tree_.nodes.push_back(TreeNode{-1, 0.0, -1, -1, Criterion::leaf(total)});

    const std::size_t n = end - begin;
    const bool depth_left = config_.max_depth <= 0 || depth < config_.max_depth;
    if (!depth_left || n < 2 * config_.min_leaf || n < 2 ||
        Criterion::pure(total)) {
      return id;
    }

    const std::size_t d = inputs_.cols;
    std::size_t n_candidates = d;
    if (config_.max_features > 0 && config_.max_features < d && rng_) {
      n_candidates = config_.max_features;
      std::iota(features_.begin(), features_.end(), std::size_t{0});
      for (std::size_t i = 0; i < n_candidates; ++i) {
        std::swap(features_[i], features_[i + rng_->index(d - i)]);
      }
      std::sort(features_.begin(), features_.begin() + static_cast<long>(n_candidates));
    }

    const double parent_cost = Criterion::cost(total);
    double best_gain = kMinGain;
    int best_feature = -1;
    std::size_t best_split = 0;
    double best_threshold = 0.0;
    for (std::size_t c = 0; c < n_candidates; ++c) {
      const std::size_t f = features_[c];
      const auto& list = lists_[f];
      typename Criterion::Acc left;
      for (std::size_t t = begin; t + 1 < end; ++t) {
        criterion_.add(left, sample_[list[t]]);
        const double v = value(list[t], f);
        const double next = value(list[t + 1], f);
        if (!(v < next)) continue;
        const std::size_t nl = t - begin + 1;
        if (nl < config_.min_leaf) continue;
        if (n - nl < config_.min_leaf) break;
        const auto right = Criterion::minus(total, left);
        const double gain =
            parent_cost - Criterion::cost(left) - Criterion::cost(right);
        if (gain > best_gain) {
          best_gain = gain;
          best_feature = static_cast<int>(f);
          best_split = t;
          double threshold = v + 0.5 * (next - v);
          if (!(threshold < next)) threshold = v;
          best_threshold = threshold;
        }
      }
    }
    if (best_feature < 0) return id;

    const auto& chosen = lists_[static_cast<std::size_t>(best_feature)];
    for (std::size_t t = begin; t < end; ++t) goes_left_[chosen[t]] = t <= best_split;
    const std::size_t mid = best_split + 1;
    for (std::size_t f = 0; f < d; ++f) {
      auto& list = lists_[f];
      std::size_t l = begin, r = mid;
      for (std::size_t t = begin; t < end; ++t) {
        const std::uint32_t p = list[t];
        buffer_[goes_left_[p] ? l++ : r++] = p;
      }
      std::copy(buffer_.begin() + static_cast<long>(begin),
                buffer_.begin() + static_cast<long>(end),
                list.begin() + static_cast<long>(begin));
    }

    const int left_id = grow(begin, mid, depth + 1);
    const int right_id = grow(mid, end, depth + 1);
    auto& node = tree_.nodes[static_cast<std::size_t>(id)];
    node.feature = best_feature;
    node.threshold = best_threshold;
    node.left = left_id;
    node.right = right_id;
    return id;
  }

  const Matrix& inputs_;
  std::span<const std::size_t> sample_;
  Criterion criterion_;
  TreeConfig config_;
  Rng* rng_;
  std::vector<std::vector<std::uint32_t>> lists_;
  std::vector<std::uint8_t> goes_left_;
  std::vector<std::uint32_t> buffer_;
  std::vector<std::size_t> features_;
  Tree tree_;
};

TreeConfig tree_config(const Params& params) {
  TreeConfig config;
  config.max_depth = static_cast<int>(params.at("max_depth"));
  config.min_leaf = static_cast<std::size_t>(params.at("min_leaf"));
  return config;
}

}  // namespace

TreeGrower::TreeGrower(const Matrix& inputs)
    : inputs_(inputs), order_(inputs.cols) {
  for (std::size_t f = 0; f < inputs.cols; ++f) {
    auto& order = order_[f];
    order.resize(inputs.rows);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return inputs.at(a, f) < inputs.at(b, f);
    });
  }
}

Tree TreeGrower::grow_classifier(std::span<const std::size_t> sample,
                                 std::span<const int> labels,
                                 const TreeConfig& config, Rng* rng) const {
  return Growth<GiniCriterion>(inputs_, order_, sample, GiniCriterion{labels},
                               config, rng)
      .run();
}

Tree TreeGrower::grow_regressor(std::span<const std::size_t> sample,
                                std::span<const double> gradient,
                                std::span<const double> hessian,
                                const TreeConfig& config, Rng* rng) const {
  return Growth<SquaredErrorCriterion>(inputs_, order_, sample,
                                       SquaredErrorCriterion{gradient, hessian},
                                       config, rng)
      .run();
}

TreeParams fit_tree(const Matrix& inputs, std::span<const int> labels,
                    const Params& params) {
  std::vector<std::size_t> sample(inputs.rows);
  std::iota(sample.begin(), sample.end(), std::size_t{0});
  TreeGrower grower(inputs);
  return TreeParams{grower.grow_classifier(sample, labels, tree_config(params),
                                           nullptr)};
}

ForestParams fit_forest(const Matrix& inputs, std::span<const int> labels,
                        const Params& params, std::uint64_t seed) {
  const std::size_t n = inputs.rows;
  const auto n_trees = static_cast<std::size_t>(params.at("n_trees"));
  TreeConfig config = tree_config(params);
  const double max_features = params.at("max_features");
  config.max_features =
      max_features > 0
          ? static_cast<std::size_t>(max_features)
          : std::max<std::size_t>(
                1, static_cast<std::size_t>(
                       std::floor(std::sqrt(static_cast<double>(inputs.cols)))));

  TreeGrower grower(inputs);
  ForestParams forest;
  forest.trees.resize(n_trees);
  std::vector<std::size_t> sample(n);
  // Each tree draws from its own stream, so trees are order-free.
  for (std::size_t b = 0; b < n_trees; ++b) {
    Rng rng(derive_seed(seed, "forest_tree", b));
    for (auto& s : sample) s = rng.index(n);
    forest.trees[b] = grower.grow_classifier(sample, labels, config, &rng);
  }
  return forest;
}

GbtParams fit_gbt(const Matrix& inputs, std::span<const int> labels,
                  const Params& params, std::uint64_t seed) {
  const std::size_t n = inputs.rows;
  const auto rounds = static_cast<std::size_t>(params.at("n_rounds"));
  const double subsample = params.at("subsample");
  TreeConfig config = tree_config(params);

  GbtParams gbt;
  gbt.shrinkage = params.at("shrinkage");
  const double pos = std::accumulate(labels.begin(), labels.end(), 0.0);
  const double prior = std::clamp(pos / static_cast<double>(n), 1e-6, 1 - 1e-6);
  gbt.base_score = std::log(prior / (1.0 - prior));

  std::vector<double> margin(n, gbt.base_score);
  std::vector<double> gradient(n), hessian(n);
  auto mean_loss = [&] {
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      loss += softplus(margin[i]) - labels[i] * margin[i];
    }
    return loss / static_cast<double>(n);
  };
  gbt.training_loss.push_back(mean_loss());

  TreeGrower grower(inputs);
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  const std::size_t sub_n = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(subsample * static_cast<double>(n))));
  for (std::size_t round = 0; round < rounds; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      const double p = sigmoid(margin[i]);
      gradient[i] = labels[i] - p;
      hessian[i] = p * (1.0 - p);
    }
    std::vector<std::size_t> sample = all;
    if (sub_n < n) {
      Rng rng(derive_seed(seed, "gbt_round", round));
      rng.shuffle(std::span<std::size_t>(sample));
      sample.resize(sub_n);
      std::sort(sample.begin(), sample.end());
    }
    Tree tree = grower.grow_regressor(sample, gradient, hessian, config, nullptr);
    for (std::size_t i = 0; i < n; ++i) {
      margin[i] += gbt.shrinkage * tree.predict(inputs.row(i));
    }
    gbt.trees.push_back(std::move(tree));
    gbt.training_loss.push_back(mean_loss());
  }
  return gbt;
}

double predict_gbt(const GbtParams& gbt, const double* x) {
  double margin = gbt.base_score;
  for (const auto& tree : gbt.trees) margin += gbt.shrinkage * tree.predict(x);
  return sigmoid(margin);
}

double predict_forest(const ForestParams& forest, const double* x) {
  if (forest.trees.empty()) return 0.0;
  std::size_t votes = 0;
  for (const auto& tree : forest.trees) votes += tree.predict(x) >= 0.5 ? 1 : 0;
  return static_cast<double>(votes) / static_cast<double>(forest.trees.size());
}

}  // namespace internal
}  // namespace featrank
