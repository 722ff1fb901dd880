#include "idt/miner.hpp"

#include <cmath>
#include <string>

#include "idt/error.hpp"

namespace idt {

void Batch::validate() const {
  if (labels.size() != embeddings.size() || roles.size() != embeddings.size()) {
    throw InvalidArgument("batch lists are not parallel");
  }
  if (embeddings.size() < 2) throw InvalidArgument("batch needs at least two sentences");
  const std::size_t d = embeddings.front().vector.size();
  for (const auto& e : embeddings) {
    if (e.vector.size() != d) {
      throw InvalidArgument("batch embeddings differ in dimension (" + std::to_string(d) +
                            " vs " + std::to_string(e.vector.size()) + ")");
    }
  }
}

Matrix pairwise_euclidean(const Batch& batch) {
  batch.validate();
  const std::size_t n = batch.size();
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& vi = batch.embeddings[i].vector;
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto& vj = batch.embeddings[j].vector;
      double acc = 0.0;
      for (std::size_t k = 0; k < vi.size(); ++k) {
        const double diff = vi[k] - vj[k];
        acc += diff * diff;
      }
      m(i, j) = m(j, i) = std::sqrt(acc);
    }
  }
  return m;
}

std::vector<Triplet> valid_triplets(std::span<const Label> labels) {
  std::vector<Triplet> out;
  const std::size_t n = labels.size();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t p = 0; p < n; ++p) {
      if (p == a || labels[p] != labels[a]) continue;
      for (std::size_t neg = 0; neg < n; ++neg) {
        if (labels[neg] != labels[a]) out.push_back({a, p, neg});
      }
    }
  }
  return out;
}

std::vector<Triplet> mine(const Batch& batch, double miner_margin) {
  return mine(pairwise_euclidean(batch), batch.labels, miner_margin);
}

std::vector<Triplet> mine(const Matrix& distances, std::span<const Label> labels,
                          double miner_margin) {
  if (!(miner_margin >= 0.0)) throw InvalidArgument("miner margin must be non-negative");
  const std::size_t n = labels.size();
  if (distances.rows() != n || distances.cols() != n) {
    throw InvalidArgument("distance matrix does not match label count");
  }
  std::vector<Triplet> out;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t p = 0; p < n; ++p) {
      if (p == a || labels[p] != labels[a]) continue;
      const double d_ap = distances(a, p);
      for (std::size_t neg = 0; neg < n; ++neg) {
        if (labels[neg] != labels[a] && distances(a, neg) - d_ap < miner_margin) {
          out.push_back({a, p, neg});
        }
      }
    }
  }
  return out;
}

}  // namespace idt
