#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>

#include "idt/error.hpp"
#include "idt/loss.hpp"
#include "oracles.hpp"

using namespace idt;

using Vec = std::vector<double>;

namespace {

Vec random_vec(std::mt19937_64& gen, std::size_t dim) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec v(dim);
  for (double& x : v) x = normal(gen);
  return v;
}

// Checks every gradient of f(inputs) against central differences.
void expect_gradients_match(std::vector<Vec>& inputs,
                            const std::function<LossResult()>& loss) {
  const LossResult r = loss();
  ASSERT_EQ(r.grads.size(), inputs.size());
  const auto value = [&] { return loss().value; };
  for (std::size_t v = 0; v < inputs.size(); ++v) {
    for (std::size_t k = 0; k < inputs[v].size(); ++k) {
      const double numeric = oracle::central_difference(value, &inputs[v][k]);
      EXPECT_LT(oracle::relative_error(r.grads[v][k], numeric), 1e-4)
          << "input " << v << " entry " << k;
    }
  }
}

}  // namespace

TEST(CosineSim, Examples) {
  const Vec x{1, 2, 3}, y{4, 5, 6};
  EXPECT_NEAR(cosine_sim(x, x), 1.0, 1e-15);
  EXPECT_EQ(cosine_sim(Vec{1, 0}, Vec{0, 1}), 0.0);
  EXPECT_NEAR(cosine_sim(x, y), static_cast<double>(oracle::cosine(x, y)), 1e-12);
  EXPECT_NEAR(cosine_distance(x, y), 1.0 - static_cast<double>(oracle::cosine(x, y)), 1e-12);
}

TEST(CosineSim, RejectsZeroAndMismatch) {
  EXPECT_THROW(cosine_sim(Vec{0, 0}, Vec{1, 0}), InvalidArgument);
  EXPECT_THROW(cosine_sim(Vec{1, 0}, Vec{1, 0, 0}), InvalidArgument);
}

TEST(TripletLoss, HingeFloorWhenAnchorEqualsPositive) {
  const Vec a{1, 2}, n{-2, 1};
  const auto r = triplet_loss(a, a, n, 0.3);
  EXPECT_EQ(r.value, 0.0);
  for (const auto& g : r.grads)
    for (double x : g) EXPECT_EQ(x, 0.0);
}

TEST(TripletLoss, ArithmeticExample) {
  // cos(a,p) = 0.2 -> d = 0.8; cos(a,n) = 0.8 -> d = 0.2.
  const Vec a{1, 0}, p{0.2, std::sqrt(1 - 0.04)}, n{0.8, 0.6};
  EXPECT_NEAR(triplet_loss(a, p, n, 0.3).value, 0.9, 1e-12);
}

TEST(TripletLoss, MatchesOracleValue) {
  std::mt19937_64 gen(2);
  for (int t = 0; t < 100; ++t) {
    const Vec a = random_vec(gen, 5), p = random_vec(gen, 5), n = random_vec(gen, 5);
    const double m = 0.5 * (gen() % 1000) / 1000.0;
    EXPECT_NEAR(triplet_loss(a, p, n, m).value, oracle::hinge(a, p, n, m), 1e-12);
  }
}

TEST(TripletLoss, GradientsMatchFiniteDifferences) {
  std::mt19937_64 gen(3);
  int active = 0, inactive = 0;
  while (active + inactive < 60) {
    std::vector<Vec> in{random_vec(gen, 4), random_vec(gen, 4), random_vec(gen, 4)};
    const double m = 0.6 * (gen() % 1000) / 1000.0;
    const double h = oracle::hinge_argument(in[0], in[1], in[2], m);
    if (std::abs(h) < 1e-3) continue;  // stay off the kink
    (h > 0 ? active : inactive)++;
    expect_gradients_match(in, [&] { return triplet_loss(in[0], in[1], in[2], m); });
  }
  EXPECT_GT(active, 10);
  EXPECT_GT(inactive, 10);
}

TEST(TripletLoss, ScaleInvariantValue) {
  std::mt19937_64 gen(4);
  for (int t = 0; t < 30; ++t) {
    Vec a = random_vec(gen, 6), p = random_vec(gen, 6), n = random_vec(gen, 6);
    const double base = triplet_loss(a, p, n, 0.3).value;
    for (double& x : a) x *= 3.5;
    for (double& x : p) x *= 3.5;
    for (double& x : n) x *= 3.5;
    EXPECT_NEAR(triplet_loss(a, p, n, 0.3).value, base, 1e-12);
  }
}

TEST(TripletLoss, PositiveIffHingeActive) {
  std::mt19937_64 gen(6);
  for (int t = 0; t < 200; ++t) {
    const Vec a = random_vec(gen, 3), p = random_vec(gen, 3), n = random_vec(gen, 3);
    const auto r = triplet_loss(a, p, n, 0.3);
    const double raw = cosine_distance(a, p) - cosine_distance(a, n) + 0.3;
    EXPECT_EQ(r.value > 0, raw > 0);
    if (r.value == 0) {
      for (const auto& g : r.grads)
        for (double x : g) EXPECT_EQ(x, 0.0);
    }
  }
}

TEST(MultiNegativeLoss, SingleNegativeEqualsTriplet) {
  std::mt19937_64 gen(7);
  const Vec a = random_vec(gen, 4), p = random_vec(gen, 4), n = random_vec(gen, 4);
  const auto single = triplet_loss(a, p, n, 0.3);
  const auto multi = multi_negative_loss(a, p, std::vector<Vec>{n}, 0.3);
  EXPECT_EQ(multi.value, single.value);
  EXPECT_EQ(multi.grads, single.grads);
}

TEST(MultiNegativeLoss, IdenticalNegativesScale) {
  const Vec a{1, 0.2}, p{0.3, 1}, n{0.9, 0.4};
  const double one = triplet_loss(a, p, n, 0.3).value;
  ASSERT_GT(one, 0.0);
  EXPECT_NEAR(multi_negative_loss(a, p, std::vector<Vec>(4, n), 0.3).value, 4 * one, 1e-12);
}

TEST(MultiNegativeLoss, EqualsSumOfTriplets) {
  std::mt19937_64 gen(8);
  for (int t = 0; t < 20; ++t) {
    const Vec a = random_vec(gen, 5), p = random_vec(gen, 5);
    std::vector<Vec> negs;
    for (int k = 0; k < 5; ++k) negs.push_back(random_vec(gen, 5));
    const auto multi = multi_negative_loss(a, p, negs, 0.4);
    double sum = 0;
    Vec ga(5, 0.0), gp(5, 0.0);
    for (std::size_t k = 0; k < negs.size(); ++k) {
      const auto r = triplet_loss(a, p, negs[k], 0.4);
      sum += r.value;
      for (std::size_t i = 0; i < 5; ++i) {
        ga[i] += r.grads[0][i];
        gp[i] += r.grads[1][i];
        EXPECT_NEAR(multi.grads[2 + k][i], r.grads[2][i], 1e-12);
      }
    }
    EXPECT_NEAR(multi.value, sum, 1e-12);
    for (std::size_t i = 0; i < 5; ++i) {
      EXPECT_NEAR(multi.grads[0][i], ga[i], 1e-12);
      EXPECT_NEAR(multi.grads[1][i], gp[i], 1e-12);
    }
  }
}

TEST(MultiNegativeLoss, GradientsMatchFiniteDifferences) {
  std::mt19937_64 gen(9);
  int done = 0;
  while (done < 60) {
    std::vector<Vec> in;
    for (int k = 0; k < 5; ++k) in.push_back(random_vec(gen, 4));
    const double m = 0.6 * (gen() % 1000) / 1000.0;
    bool near_kink = false;
    for (int k = 2; k < 5; ++k) near_kink |= std::abs(oracle::hinge_argument(in[0], in[1], in[k], m)) < 1e-3;
    if (near_kink) continue;
    ++done;
    expect_gradients_match(in, [&] {
      const std::vector<Vec> negs(in.begin() + 2, in.end());
      return multi_negative_loss(in[0], in[1], negs, m);
    });
  }
}

TEST(MultiNegativeLoss, RejectsEmptyNegatives) {
  EXPECT_THROW(multi_negative_loss(Vec{1, 0}, Vec{0, 1}, std::vector<Vec>{}, 0.3),
               InvalidArgument);
}

TEST(BatchLoss, TripletKindIsMeanOverTriplets) {
  std::mt19937_64 gen(10);
  std::vector<SentenceEmbedding> e;
  for (int i = 0; i < 6; ++i) e.push_back({random_vec(gen, 3), 1});
  const std::vector<Triplet> ts{{0, 1, 2}, {1, 0, 2}, {0, 1, 3}, {4, 5, 0}};
  const auto r = batch_loss(e, ts, 0.3, LossKind::Triplet);
  double expected = 0;
  for (const auto& t : ts) {
    expected += oracle::hinge(e[t.anchor].vector, e[t.positive].vector, e[t.negative].vector, 0.3);
  }
  EXPECT_NEAR(r.value, expected / 4, 1e-12);
  EXPECT_EQ(r.terms, 4u);
}

TEST(BatchLoss, MultiNegativeKindIsMeanOverPairs) {
  std::mt19937_64 gen(11);
  std::vector<SentenceEmbedding> e;
  for (int i = 0; i < 6; ++i) e.push_back({random_vec(gen, 3), 1});
  const std::vector<Triplet> ts{{0, 1, 2}, {0, 1, 3}, {1, 0, 2}, {4, 5, 0}, {4, 5, 1}};
  const auto r = batch_loss(e, ts, 0.3, LossKind::MultiNegative);
  double expected = 0;
  for (const auto& t : ts) {
    expected += oracle::hinge(e[t.anchor].vector, e[t.positive].vector, e[t.negative].vector, 0.3);
  }
  EXPECT_NEAR(r.value, expected / 3, 1e-12);
  EXPECT_EQ(r.terms, 3u);
}

TEST(BatchLoss, GradientsMatchFiniteDifferences) {
  std::mt19937_64 gen(12);
  std::vector<SentenceEmbedding> e;
  for (int i = 0; i < 6; ++i) e.push_back({random_vec(gen, 3), 1});
  const std::vector<Triplet> ts{{0, 1, 2}, {0, 1, 3}, {1, 0, 2}, {4, 5, 0}, {5, 4, 1}};
  for (LossKind kind : {LossKind::Triplet, LossKind::MultiNegative}) {
    const auto r = batch_loss(e, ts, 0.5, kind);
    const auto value = [&] { return batch_loss(e, ts, 0.5, kind).value; };
    for (const auto& [index, g] : r.grads) {
      for (std::size_t k = 0; k < g.size(); ++k) {
        const double numeric = oracle::central_difference(value, &e[index].vector[k]);
        EXPECT_LT(oracle::relative_error(g[k], numeric), 1e-4);
      }
    }
  }
}

TEST(BatchLoss, EmptyTripletListIsZero) {
  const std::vector<SentenceEmbedding> e{{{1, 0}, 1}, {{0, 1}, 1}};
  const auto r = batch_loss(e, {}, 0.3, LossKind::Triplet);
  EXPECT_EQ(r.value, 0.0);
  EXPECT_TRUE(r.grads.empty());
}
