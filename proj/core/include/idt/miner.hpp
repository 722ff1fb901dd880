#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <vector>

#include "idt/corpus.hpp"
#include "idt/encoder.hpp"
#include "idt/matrix.hpp"

namespace idt {

// Indices into a batch. anchor and positive share a label, negative does not.
struct Triplet {
  std::size_t anchor = 0;
  std::size_t positive = 0;
  std::size_t negative = 0;

  auto operator<=>(const Triplet&) const = default;
};

struct Batch {
  std::vector<SentenceEmbedding> embeddings;
  std::vector<Label> labels;
  std::vector<Role> roles;

  std::size_t size() const { return embeddings.size(); }

  // Throws InvalidArgument unless the lists are parallel, hold at least two
  // entries and every embedding has the same dimension.
  void validate() const;
};

inline constexpr double kDefaultMinerMargin = 0.4;

// M(i, j) = ||v_i - v_j||_2, exactly symmetric with a zero diagonal.
Matrix pairwise_euclidean(const Batch& batch);

// Every (a, p, n) with labels[a] == labels[p], a != p, labels[n] != labels[a],
// in lexicographic order. Anchor and positive appear in both orders.
std::vector<Triplet> valid_triplets(std::span<const Label> labels);

// The valid triplets that still violate the miner margin:
//   M(a, n) - M(a, p) < miner_margin
// Triplets already separated by at least the margin are dropped.
std::vector<Triplet> mine(const Batch& batch, double miner_margin = kDefaultMinerMargin);

// Same predicate over a precomputed distance matrix.
std::vector<Triplet> mine(const Matrix& distances, std::span<const Label> labels,
                          double miner_margin);

}  // namespace idt
