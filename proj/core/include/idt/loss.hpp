#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "idt/miner.hpp"

namespace idt {

inline constexpr double kDefaultLossMargin = 0.3;

// Throws InvalidArgument on zero-norm input or mismatched dimensions.
double cosine_sim(std::span<const double> x, std::span<const double> y);

// 1 - cosine_sim(x, y)
double cosine_distance(std::span<const double> x, std::span<const double> y);

// value plus the gradient with respect to each input vector, in argument
// order (anchor, positive, negatives...).
struct LossResult {
  double value = 0.0;
  std::vector<std::vector<double>> grads;
};

// max(d(a, p) - d(a, n) + margin, 0) with d the cosine distance.
LossResult triplet_loss(std::span<const double> anchor, std::span<const double> positive,
                        std::span<const double> negative, double margin = kDefaultLossMargin);

// Sum of the triplet hinge over every negative.
LossResult multi_negative_loss(std::span<const double> anchor, std::span<const double> positive,
                               std::span<const std::vector<double>> negatives,
                               double margin = kDefaultLossMargin);

enum class LossKind { Triplet, MultiNegative };

// Batch objective over mined triplets.
//   Triplet:       mean of the per-triplet hinge over all mined triplets.
//   MultiNegative: triplets grouped by (anchor, positive); mean over pairs of
//                  the multi-negative loss with that pair's mined negatives.
// grads maps batch index -> gradient of the batch objective.
struct BatchLoss {
  double value = 0.0;
  std::size_t terms = 0;
  std::map<std::size_t, std::vector<double>> grads;
};

BatchLoss batch_loss(std::span<const SentenceEmbedding> embeddings,
                     std::span<const Triplet> triplets, double margin, LossKind kind);

}  // namespace idt
