#include "idt/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "idt/error.hpp"
#include "idt/loss.hpp"

namespace idt {

namespace {

SentenceEmbedding embed_sentence(const EncoderParams& params, const Vocab& vocab,
                                 std::string_view sentence) {
  const auto ids = encode_text(vocab, sentence);
  if (ids.empty()) {
    throw InvalidArgument("sentence has no tokens: \"" + std::string(sentence) + "\"");
  }
  return embed(params, ids);
}

std::optional<double> cell_rho(const std::vector<double>& pred, const std::vector<double>& gold) {
  if (pred.size() < 2) return std::nullopt;
  return spearman(pred, gold);
}

CellScores score_cells(std::span<const EvalPair> pairs, std::span<const double> pred,
                       const std::string* language) {
  std::vector<double> pi, gi, ps, gs, pa, ga;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    if (language && pairs[k].language != *language) continue;
    const bool idiom = pairs[k].subset == Subset::Idiom;
    (idiom ? pi : ps).push_back(pred[k]);
    (idiom ? gi : gs).push_back(pairs[k].gold_score);
    pa.push_back(pred[k]);
    ga.push_back(pairs[k].gold_score);
  }
  CellScores c;
  c.n_idiom = pi.size();
  c.n_sts = ps.size();
  c.n_all = pa.size();
  c.rho_idiom = cell_rho(pi, gi);
  c.rho_sts = cell_rho(ps, gs);
  c.rho_all = cell_rho(pa, ga);
  return c;
}

}  // namespace

double score_pair(const EncoderParams& params, const Vocab& vocab, std::string_view s1,
                  std::string_view s2) {
  const auto e1 = embed_sentence(params, vocab, s1);
  const auto e2 = embed_sentence(params, vocab, s2);
  return cosine_sim(e1.vector, e2.vector);
}

std::vector<double> fractional_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    // Positions i..j-1 hold ranks i+1..j.
    const double rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

double spearman(std::span<const double> pred, std::span<const double> gold) {
  if (pred.size() != gold.size()) {
    throw InvalidArgument("spearman inputs differ in length (" + std::to_string(pred.size()) +
                          " vs " + std::to_string(gold.size()) + ")");
  }
  if (pred.size() < 2) throw InvalidArgument("spearman needs at least two items");
  for (double v : pred) {
    if (!std::isfinite(v)) throw InvalidArgument("spearman input contains a non-finite value");
  }
  const auto rx = fractional_ranks(pred);
  const auto ry = fractional_ranks(gold);
  const double n = static_cast<double>(rx.size());
  const double mean = (n + 1.0) / 2.0;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double dx = rx[i] - mean, dy = ry[i] - mean;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw InvalidArgument("spearman of a constant input is undefined");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

Awareness awareness(const EncoderParams& params, const Vocab& vocab, const RawGroup& group) {
  validate_group(group);
  const auto mwe = embed_sentence(params, vocab,
                                  preprocess_ie(group.mwe_sentence, group.ie_surface, group.group_id));
  const auto cor = embed_sentence(params, vocab, group.correct_paraphrases.front());
  Awareness a;
  a.gap1 = 1.0 - cosine_sim(mwe.vector, cor.vector);
  for (const auto& s : group.incorrect_paraphrases) {
    const auto inc = embed_sentence(params, vocab, s);
    a.gap2.push_back(
        std::abs(cosine_sim(mwe.vector, inc.vector) - cosine_sim(cor.vector, inc.vector)));
  }
  return a;
}

AwarenessSummary summarize_awareness(const EncoderParams& params, const Vocab& vocab,
                                     std::span<const RawGroup> groups) {
  AwarenessSummary s;
  std::size_t n_gap2 = 0;
  for (const auto& g : groups) {
    const Awareness a = awareness(params, vocab, g);
    s.gap1_mean += a.gap1;
    for (double v : a.gap2) s.gap2_mean += v;
    n_gap2 += a.gap2.size();
  }
  s.groups = groups.size();
  if (s.groups > 0) s.gap1_mean /= static_cast<double>(s.groups);
  if (n_gap2 > 0) s.gap2_mean /= static_cast<double>(n_gap2);
  return s;
}

EvalReport evaluate(const EncoderParams& params, const Vocab& vocab,
                    std::span<const EvalPair> pairs, std::span<const RawGroup> groups,
                    std::size_t threads) {
  if (pairs.empty()) throw InvalidArgument("no evaluation pairs");
  std::vector<double> pred(pairs.size());
  const auto score_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      pred[k] = score_pair(params, vocab, pairs[k].sentence1, pairs[k].sentence2);
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(threads, 1, pairs.size());
  if (workers == 1) {
    score_range(0, pairs.size());
  } else {
    std::vector<std::exception_ptr> errors(workers);
    {
      std::vector<std::jthread> pool;
      const std::size_t chunk = (pairs.size() + workers - 1) / workers;
      for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = std::min(pairs.size(), w * chunk);
        const std::size_t end = std::min(pairs.size(), begin + chunk);
        pool.emplace_back([&, w, begin, end] {
          try {
            score_range(begin, end);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  EvalReport report;
  report.overall = score_cells(pairs, pred, nullptr);
  std::vector<std::string> languages;
  for (const auto& p : pairs) languages.push_back(p.language);
  std::sort(languages.begin(), languages.end());
  languages.erase(std::unique(languages.begin(), languages.end()), languages.end());
  for (const auto& lang : languages) report.per_language[lang] = score_cells(pairs, pred, &lang);
  if (!groups.empty()) report.awareness = summarize_awareness(params, vocab, groups);
  return report;
}

}  // namespace idt
