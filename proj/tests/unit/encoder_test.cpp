#include <gtest/gtest.h>

#include <algorithm>
#include <limits>
#include <random>

#include "idt/encoder.hpp"
#include "idt/error.hpp"
#include "idt/loss.hpp"
#include "oracles.hpp"

using namespace idt;

namespace {

EncoderParams random_params(std::uint64_t seed, std::size_t vocab, std::size_t dim,
                            bool projection) {
  EncoderParams p = init_params(seed, vocab, dim, projection);
  std::mt19937_64 gen(seed + 1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double& x : p.embeddings.values()) x = u(gen);
  if (projection) {
    for (double& x : p.projection->weight.values()) x = u(gen);
    for (double& x : p.projection->bias) x = u(gen);
  }
  return p;
}

}  // namespace

TEST(InitParams, DeterministicAndBounded) {
  const auto a = init_params(5, 400, 32, false);
  EXPECT_EQ(a, init_params(5, 400, 32, false));
  EXPECT_NE(a, init_params(6, 400, 32, false));
  EXPECT_FALSE(a.projection.has_value());
  ASSERT_GE(a.embeddings.values().size(), 10000u);
  for (double x : a.embeddings.values()) {
    EXPECT_GE(x, -0.5 / 32);
    EXPECT_LE(x, 0.5 / 32);
  }
  EXPECT_THROW(init_params(1, 10, 1, false), InvalidArgument);
}

TEST(InitParams, ProjectionStartsAsIdentity) {
  const auto p = init_params(1, 10, 4, true);
  ASSERT_TRUE(p.projection.has_value());
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(p.projection->bias[i], 0.0);
    for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(p.projection->weight(i, j), i == j ? 1.0 : 0.0);
  }
}

TEST(Embed, SingleTokenIsItsRow) {
  const auto p = random_params(2, 5, 3, false);
  const std::vector<TokenId> ids{3};
  const auto e = embed(p, ids);
  EXPECT_EQ(e.source_len, 1u);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(e.vector[k], p.embeddings(3, k));
}

TEST(Embed, TwoTokensAverage) {
  const auto p = random_params(2, 5, 3, false);
  const std::vector<TokenId> ids{1, 4};
  const auto e = embed(p, ids);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_DOUBLE_EQ(e.vector[k], (p.embeddings(1, k) + p.embeddings(4, k)) / 2);
  }
}

TEST(Embed, IdentityProjectionMatchesNone) {
  auto with = init_params(9, 7, 5, true);
  auto without = init_params(9, 7, 5, false);
  EXPECT_EQ(with.embeddings, without.embeddings);
  const std::vector<TokenId> ids{0, 2, 2, 6};
  EXPECT_EQ(embed(with, ids).vector, embed(without, ids).vector);
}

TEST(Embed, PermutationInvariant) {
  const auto p = random_params(3, 20, 6, true);
  std::vector<TokenId> ids{1, 5, 9, 9, 13, 0, 19};
  const auto base = embed(p, ids).vector;
  std::mt19937 gen(1);
  for (int t = 0; t < 20; ++t) {
    std::shuffle(ids.begin(), ids.end(), gen);
    const auto v = embed(p, ids).vector;
    for (std::size_t k = 0; k < v.size(); ++k) EXPECT_NEAR(v[k], base[k], 1e-14);
  }
}

TEST(Embed, RejectsEmptyAndOutOfRange) {
  const auto p = init_params(1, 4, 2, false);
  EXPECT_THROW(embed(p, std::vector<TokenId>{}), InvalidArgument);
  EXPECT_THROW(embed(p, std::vector<TokenId>{4}), InvalidArgument);
}

TEST(Backprop, OneTokenGetsWholeGradient) {
  const auto p = random_params(4, 3, 2, false);
  EncoderGrads acc(p);
  const std::vector<double> g{0.5, -2.0};
  backprop(p, std::vector<TokenId>{1}, g, acc);
  EXPECT_EQ(acc.embeddings(1, 0), 0.5);
  EXPECT_EQ(acc.embeddings(1, 1), -2.0);
  EXPECT_EQ(acc.embeddings(0, 0), 0.0);
}

TEST(Backprop, RepeatedTokenCountsTwice) {
  const auto p = random_params(4, 3, 2, false);
  EncoderGrads acc(p);
  const std::vector<double> g{0.5, -2.0};
  backprop(p, std::vector<TokenId>{2, 2}, g, acc);
  EXPECT_DOUBLE_EQ(acc.embeddings(2, 0), 0.5);
  EXPECT_DOUBLE_EQ(acc.embeddings(2, 1), -2.0);
}

TEST(Backprop, RejectsDimensionMismatch) {
  const auto p = random_params(4, 3, 2, false);
  EncoderGrads acc(p);
  EXPECT_THROW(backprop(p, std::vector<TokenId>{0}, std::vector<double>{1.0}, acc),
               InvalidArgument);
}

// d/dtheta of <w, embed(ids)> for a fixed random w, against central
// differences on every parameter.
TEST(Backprop, MatchesFiniteDifferences) {
  for (bool projection : {false, true}) {
    auto p = random_params(projection ? 21 : 20, 6, 4, projection);
    const std::vector<TokenId> ids{0, 3, 3, 5, 1};
    const std::vector<double> w{0.3, -1.1, 0.7, 2.0};
    const auto f = [&] {
      const auto e = embed(p, ids).vector;
      double s = 0;
      for (std::size_t k = 0; k < w.size(); ++k) s += w[k] * e[k];
      return s;
    };
    EncoderGrads acc(p);
    backprop(p, ids, w, acc);
    const auto check = [&](std::span<double> params, std::span<const double> grads) {
      for (std::size_t i = 0; i < params.size(); ++i) {
        const double numeric = oracle::central_difference(f, &params[i]);
        EXPECT_LT(oracle::relative_error(grads[i], numeric), 1e-4) << "entry " << i;
      }
    };
    check(p.embeddings.values(), acc.embeddings.values());
    if (projection) {
      check(p.projection->weight.values(), acc.projection->weight.values());
      check(p.projection->bias, acc.projection->bias);
    }
  }
}

TEST(EncoderGrads, ZeroClearsEverything) {
  const auto p = random_params(4, 3, 2, true);
  EncoderGrads acc(p);
  backprop(p, std::vector<TokenId>{0, 1}, std::vector<double>{1.0, 1.0}, acc);
  acc.zero();
  for (double x : acc.embeddings.values()) EXPECT_EQ(x, 0.0);
  for (double x : acc.projection->weight.values()) EXPECT_EQ(x, 0.0);
  for (double x : acc.projection->bias) EXPECT_EQ(x, 0.0);
}

TEST(EncoderParams, ValidateCatchesBadState) {
  auto p = init_params(1, 3, 2, true);
  EXPECT_NO_THROW(p.validate());
  p.embeddings(0, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(p.validate(), InvalidArgument);
  p = init_params(1, 3, 2, true);
  p.projection->bias.push_back(0.0);
  EXPECT_THROW(p.validate(), InvalidArgument);
}
