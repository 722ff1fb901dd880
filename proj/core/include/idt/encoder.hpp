#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "idt/matrix.hpp"
#include "idt/vocab.hpp"

namespace idt {

// y = weight * x + bias, weight is dim x dim.
struct Projection {
  Matrix weight;
  std::vector<double> bias;

  bool operator==(const Projection&) const = default;
};

// Bag-of-embeddings sentence encoder: mean of token rows, optionally
// followed by an affine projection.
struct EncoderParams {
  Matrix embeddings;  // vocab_size x dim
  std::optional<Projection> projection;

  std::size_t dim() const { return embeddings.cols(); }
  std::size_t vocab_size() const { return embeddings.rows(); }

  // Throws InvalidArgument on dim < 2, shape mismatches or non-finite entries.
  void validate() const;

  bool operator==(const EncoderParams&) const = default;
};

struct SentenceEmbedding {
  std::vector<double> vector;
  std::size_t source_len = 0;
};

// Embedding entries uniform in [-0.5/dim, 0.5/dim]; projection starts as the
// identity with zero bias.
EncoderParams init_params(std::uint64_t seed, std::size_t vocab_size, std::size_t dim,
                          bool use_projection);

// Mean-pooled (and projected) embedding. Throws InvalidArgument on an empty
// id list or an id outside the table.
SentenceEmbedding embed(const EncoderParams& params, std::span<const TokenId> ids);

// Gradient buffers shaped like EncoderParams.
struct EncoderGrads {
  Matrix embeddings;
  std::optional<Projection> projection;

  EncoderGrads() = default;
  explicit EncoderGrads(const EncoderParams& params);

  void zero();
};

// Accumulates the gradient of a loss with respect to the parameters, given
// its gradient with respect to embed(params, ids).vector:
//   d/d row(t)  += (W^T g) / len   for every occurrence of t in ids
//   d/d W       += g (x) mean
//   d/d bias    += g
void backprop(const EncoderParams& params, std::span<const TokenId> ids,
              std::span<const double> grad, EncoderGrads& acc);

}  // namespace idt
