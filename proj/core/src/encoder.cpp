#include "idt/encoder.hpp"

#include <cmath>
#include <string>

#include "idt/error.hpp"
#include "idt/rng.hpp"

namespace idt {

void EncoderParams::validate() const {
  const std::size_t d = dim();
  if (d < 2) throw InvalidArgument("embedding dimension must be at least 2");
  if (vocab_size() < 1) throw InvalidArgument("embedding table has no rows");
  const auto all_finite = [](std::span<const double> v) {
    for (double x : v) {
      if (!std::isfinite(x)) return false;
    }
    return true;
  };
  if (!all_finite(embeddings.values())) throw InvalidArgument("non-finite embedding entry");
  if (projection) {
    if (projection->weight.rows() != d || projection->weight.cols() != d ||
        projection->bias.size() != d) {
      throw InvalidArgument("projection shape does not match dimension " + std::to_string(d));
    }
    if (!all_finite(projection->weight.values()) || !all_finite(projection->bias)) {
      throw InvalidArgument("non-finite projection entry");
    }
  }
}

EncoderParams init_params(std::uint64_t seed, std::size_t vocab_size, std::size_t dim,
                          bool use_projection) {
  if (dim < 2) throw InvalidArgument("embedding dimension must be at least 2");
  if (vocab_size < 1) throw InvalidArgument("vocab_size must be at least 1");
  Rng rng(seed);
  const double half = 0.5 / static_cast<double>(dim);
  EncoderParams p;
  p.embeddings = Matrix(vocab_size, dim);
  for (double& x : p.embeddings.values()) x = rng.uniform(-half, half);
  if (use_projection) {
    Projection proj{Matrix(dim, dim), std::vector<double>(dim, 0.0)};
    for (std::size_t i = 0; i < dim; ++i) proj.weight(i, i) = 1.0;
    p.projection = std::move(proj);
  }
  return p;
}

namespace {

std::vector<double> mean_rows(const EncoderParams& params, std::span<const TokenId> ids) {
  if (ids.empty()) throw InvalidArgument("cannot embed an empty token list");
  const std::size_t d = params.dim();
  std::vector<double> mean(d, 0.0);
  for (TokenId id : ids) {
    if (id >= params.vocab_size()) {
      throw InvalidArgument("token id " + std::to_string(id) + " outside embedding table");
    }
    const auto row = params.embeddings.row(id);
    for (std::size_t k = 0; k < d; ++k) mean[k] += row[k];
  }
  const double inv = 1.0 / static_cast<double>(ids.size());
  for (double& x : mean) x *= inv;
  return mean;
}

}  // namespace

SentenceEmbedding embed(const EncoderParams& params, std::span<const TokenId> ids) {
  std::vector<double> mean = mean_rows(params, ids);
  if (!params.projection) return {std::move(mean), ids.size()};
  const auto& proj = *params.projection;
  const std::size_t d = params.dim();
  std::vector<double> out(proj.bias);
  for (std::size_t i = 0; i < d; ++i) {
    const auto w = proj.weight.row(i);
    double acc = 0.0;
    for (std::size_t k = 0; k < d; ++k) acc += w[k] * mean[k];
    out[i] += acc;
  }
  return {std::move(out), ids.size()};
}

EncoderGrads::EncoderGrads(const EncoderParams& params)
    : embeddings(params.vocab_size(), params.dim()) {
  if (params.projection) {
    projection = Projection{Matrix(params.dim(), params.dim()),
                            std::vector<double>(params.dim(), 0.0)};
  }
}

void EncoderGrads::zero() {
  for (double& x : embeddings.values()) x = 0.0;
  if (projection) {
    for (double& x : projection->weight.values()) x = 0.0;
    for (double& x : projection->bias) x = 0.0;
  }
}

void backprop(const EncoderParams& params, std::span<const TokenId> ids,
              std::span<const double> grad, EncoderGrads& acc) {
  const std::size_t d = params.dim();
  if (grad.size() != d) {
    throw InvalidArgument("gradient has dimension " + std::to_string(grad.size()) +
                          ", expected " + std::to_string(d));
  }
  if (acc.embeddings.rows() != params.vocab_size() || acc.embeddings.cols() != d ||
      acc.projection.has_value() != params.projection.has_value()) {
    throw InvalidArgument("gradient accumulator does not match parameters");
  }
  std::vector<double> pooled_grad(grad.begin(), grad.end());
  if (params.projection) {
    const auto mean = mean_rows(params, ids);
    const auto& w = params.projection->weight;
    auto& gw = acc.projection->weight;
    auto& gb = acc.projection->bias;
    for (std::size_t k = 0; k < d; ++k) pooled_grad[k] = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      gb[i] += grad[i];
      for (std::size_t k = 0; k < d; ++k) {
        gw(i, k) += grad[i] * mean[k];
        pooled_grad[k] += w(i, k) * grad[i];
      }
    }
  } else if (ids.empty()) {
    throw InvalidArgument("cannot backprop through an empty token list");
  }
  const double inv = 1.0 / static_cast<double>(ids.size());
  for (TokenId id : ids) {
    if (id >= params.vocab_size()) {
      throw InvalidArgument("token id " + std::to_string(id) + " outside embedding table");
    }
    auto row = acc.embeddings.row(id);
    for (std::size_t k = 0; k < d; ++k) row[k] += pooled_grad[k] * inv;
  }
}

}  // namespace idt
