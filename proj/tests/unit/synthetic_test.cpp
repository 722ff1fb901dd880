#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "idt/error.hpp"
#include "idt/synthetic.hpp"
#include "idt/vocab.hpp"

using namespace idt;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(Synthetic, SameSeedGivesByteIdenticalFiles) {
  const auto dir = std::filesystem::temp_directory_path();
  std::string first[3];
  for (int run = 0; run < 2; ++run) {
    const auto data = gen_synthetic({});
    save_corpus(dir / "idt_syn_train.jsonl", data.train.groups);
    save_corpus(dir / "idt_syn_held.jsonl", data.heldout.groups);
    save_eval_pairs(dir / "idt_syn_pairs.tsv", data.eval_pairs);
    const std::string now[3] = {slurp(dir / "idt_syn_train.jsonl"),
                                slurp(dir / "idt_syn_held.jsonl"),
                                slurp(dir / "idt_syn_pairs.tsv")};
    for (int k = 0; k < 3; ++k) {
      if (run == 0) first[k] = now[k];
      else EXPECT_EQ(first[k], now[k]);
    }
  }
}

TEST(Synthetic, DifferentSeedsDiffer) {
  SyntheticOptions a, b;
  b.seed = 8;
  EXPECT_NE(gen_synthetic(a).train.groups, gen_synthetic(b).train.groups);
}

TEST(Synthetic, DefaultShape) {
  const auto data = gen_synthetic({});
  EXPECT_EQ(data.train.groups.size(), 200u);
  EXPECT_EQ(data.heldout.groups.size(), 50u);
  // 3 idiom pairs per held-out group with one incorrect paraphrase, plus one sts pair.
  EXPECT_EQ(data.eval_pairs.size(), 50u * 4);
  std::set<std::string> words;
  for (const auto& s : data.train.derived) {
    for (const auto& t : tokenize(s.text)) words.insert(t);
  }
  EXPECT_GT(words.size(), 400u);
  EXPECT_LT(words.size(), 600u);
}

TEST(Synthetic, GroupsSatisfyInvariants) {
  SyntheticOptions o;
  o.n_incorrect = 4;
  const auto data = gen_synthetic(o);
  for (const auto* corpus : {&data.train, &data.heldout}) {
    for (const auto& g : corpus->groups) {
      EXPECT_NO_THROW(validate_group(g));
      EXPECT_EQ(g.incorrect_paraphrases.size(), 4u);
      EXPECT_EQ(g.correct_paraphrases.size(), 1u);
      // Two-word expression.
      EXPECT_EQ(tokenize(g.ie_surface).size(), 2u);
      std::set<std::string> distinct(g.incorrect_paraphrases.begin(), g.incorrect_paraphrases.end());
      EXPECT_EQ(distinct.size(), g.incorrect_paraphrases.size());
    }
  }
}

TEST(Synthetic, ParaphrasesDifferFromMweOnlyAtTheSpan) {
  const auto data = gen_synthetic({});
  for (const auto& g : data.train.groups) {
    const auto mwe = tokenize(g.mwe_sentence);
    const auto cor = tokenize(g.correct_paraphrases.front());
    // Two expression words become one synonym.
    EXPECT_EQ(cor.size() + 1, mwe.size());
  }
}

TEST(Synthetic, GoldScores) {
  const auto data = gen_synthetic({});
  std::size_t ones = 0;
  for (std::size_t i = 0; i < data.eval_pairs.size(); ++i) {
    const auto& p = data.eval_pairs[i];
    if (p.subset == Subset::Sts) {
      EXPECT_GT(p.gold_score, 0.0);
      EXPECT_LT(p.gold_score, 1.0);
      continue;
    }
    if (p.gold_score == 1.0) {
      ++ones;
      EXPECT_NE(p.sentence1.find("ID"), std::string::npos);
      // The next two pairs share one low score.
      ASSERT_LT(i + 2, data.eval_pairs.size());
      EXPECT_EQ(data.eval_pairs[i + 1].gold_score, data.eval_pairs[i + 2].gold_score);
    } else {
      EXPECT_GE(p.gold_score, 0.1);
      EXPECT_LE(p.gold_score, 0.4);
    }
  }
  EXPECT_EQ(ones, data.heldout.groups.size());
}

TEST(Synthetic, RejectsInvalidSizes) {
  SyntheticOptions o;
  o.n_groups = 0;
  EXPECT_THROW(gen_synthetic(o), InvalidArgument);
  o = {};
  o.vocab_size = 49;
  EXPECT_THROW(gen_synthetic(o), InvalidArgument);
  o = {};
  o.n_incorrect = 0;
  EXPECT_THROW(gen_synthetic(o), InvalidArgument);
  o = {};
  o.n_idioms = 200;
  EXPECT_THROW(gen_synthetic(o), InvalidArgument);
}

TEST(Synthetic, SmallestValidConfig) {
  SyntheticOptions o;
  o.n_groups = 1;
  o.vocab_size = 50;
  const auto data = gen_synthetic(o);
  EXPECT_EQ(data.train.groups.size(), 1u);
  EXPECT_EQ(data.heldout.groups.size(), 1u);
}
