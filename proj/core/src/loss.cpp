#include "idt/loss.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "idt/error.hpp"

namespace idt {

namespace {

double norm(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return std::sqrt(acc);
}

double dot(std::span<const double> x, std::span<const double> y) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
  return acc;
}

struct CosineTerm {
  double value;
  double nx, ny;
};

CosineTerm cosine_term(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw InvalidArgument("cosine of vectors with dimensions " + std::to_string(x.size()) +
                          " and " + std::to_string(y.size()));
  }
  const double nx = norm(x), ny = norm(y);
  if (nx == 0.0 || ny == 0.0) throw InvalidArgument("cosine similarity of a zero vector");
  return {dot(x, y) / (nx * ny), nx, ny};
}

// Adds weight * d cos(x, y) / dx to gx and likewise for y.
void add_cosine_grad(const CosineTerm& c, std::span<const double> x, std::span<const double> y,
                     double weight, std::vector<double>& gx, std::vector<double>& gy) {
  const double inv = 1.0 / (c.nx * c.ny);
  const double sx = c.value / (c.nx * c.nx);
  const double sy = c.value / (c.ny * c.ny);
  for (std::size_t k = 0; k < x.size(); ++k) {
    gx[k] += weight * (y[k] * inv - sx * x[k]);
    gy[k] += weight * (x[k] * inv - sy * y[k]);
  }
}

}  // namespace

double cosine_sim(std::span<const double> x, std::span<const double> y) {
  return cosine_term(x, y).value;
}

double cosine_distance(std::span<const double> x, std::span<const double> y) {
  return 1.0 - cosine_sim(x, y);
}

LossResult multi_negative_loss(std::span<const double> anchor, std::span<const double> positive,
                               std::span<const std::vector<double>> negatives, double margin) {
  if (negatives.empty()) throw InvalidArgument("multi-negative loss needs at least one negative");
  if (!(margin >= 0.0)) throw InvalidArgument("loss margin must be non-negative");
  const std::size_t d = anchor.size();
  LossResult r;
  r.grads.assign(2 + negatives.size(), std::vector<double>(d, 0.0));
  const CosineTerm ap = cosine_term(anchor, positive);
  double positive_weight = 0.0;
  for (std::size_t j = 0; j < negatives.size(); ++j) {
    const CosineTerm an = cosine_term(anchor, negatives[j]);
    // d(a,p) - d(a,n) + m = cos(a,n) - cos(a,p) + m
    const double hinge = an.value - ap.value + margin;
    if (hinge <= 0.0) continue;
    r.value += hinge;
    add_cosine_grad(an, anchor, negatives[j], 1.0, r.grads[0], r.grads[2 + j]);
    positive_weight -= 1.0;
  }
  if (positive_weight != 0.0) {
    add_cosine_grad(ap, anchor, positive, positive_weight, r.grads[0], r.grads[1]);
  }
  return r;
}

LossResult triplet_loss(std::span<const double> anchor, std::span<const double> positive,
                        std::span<const double> negative, double margin) {
  const std::vector<std::vector<double>> negatives{{negative.begin(), negative.end()}};
  return multi_negative_loss(anchor, positive, negatives, margin);
}

BatchLoss batch_loss(std::span<const SentenceEmbedding> embeddings,
                     std::span<const Triplet> triplets, double margin, LossKind kind) {
  BatchLoss out;
  if (triplets.empty()) return out;
  const auto vec = [&](std::size_t i) -> const std::vector<double>& {
    if (i >= embeddings.size()) throw InvalidArgument("triplet index outside batch");
    return embeddings[i].vector;
  };
  const auto accumulate = [&](std::size_t index, const std::vector<double>& g, double scale) {
    auto [it, fresh] = out.grads.try_emplace(index, g.size(), 0.0);
    for (std::size_t k = 0; k < g.size(); ++k) it->second[k] += scale * g[k];
  };

  if (kind == LossKind::Triplet) {
    const double scale = 1.0 / static_cast<double>(triplets.size());
    for (const auto& t : triplets) {
      const LossResult r = triplet_loss(vec(t.anchor), vec(t.positive), vec(t.negative), margin);
      out.value += scale * r.value;
      accumulate(t.anchor, r.grads[0], scale);
      accumulate(t.positive, r.grads[1], scale);
      accumulate(t.negative, r.grads[2], scale);
    }
    out.terms = triplets.size();
    return out;
  }

  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> by_pair;
  for (const auto& t : triplets) by_pair[{t.anchor, t.positive}].push_back(t.negative);
  const double scale = 1.0 / static_cast<double>(by_pair.size());
  for (const auto& [pair, negative_ids] : by_pair) {
    std::vector<std::vector<double>> negatives;
    for (std::size_t n : negative_ids) negatives.push_back(vec(n));
    const LossResult r = multi_negative_loss(vec(pair.first), vec(pair.second), negatives, margin);
    out.value += scale * r.value;
    accumulate(pair.first, r.grads[0], scale);
    accumulate(pair.second, r.grads[1], scale);
    for (std::size_t j = 0; j < negative_ids.size(); ++j) {
      accumulate(negative_ids[j], r.grads[2 + j], scale);
    }
  }
  out.terms = by_pair.size();
  return out;
}

}  // namespace idt
