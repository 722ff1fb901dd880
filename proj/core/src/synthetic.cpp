#include "idt/synthetic.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <set>
#include <string_view>

#include "idt/error.hpp"
#include "idt/rng.hpp"

namespace idt {

namespace {

// Words that never touch any expression's component list.
constexpr std::size_t kMinDistractors = 8;

std::size_t idiom_cap(std::size_t vocab_size) {
  return vocab_size > 4 * kMinDistractors ? (vocab_size - 2 * kMinDistractors) / 4 : 1;
}

std::vector<std::string> make_words(Rng& rng, std::size_t n) {
  static constexpr std::string_view kOnsets = "bdfgklmnprstvz";
  static constexpr std::string_view kVowels = "aeiou";
  std::set<std::string> seen;
  std::vector<std::string> words;
  words.reserve(n);
  while (words.size() < n) {
    const std::size_t syllables = 2 + rng.below(2);
    std::string w;
    for (std::size_t s = 0; s < syllables; ++s) {
      w.push_back(kOnsets[rng.below(kOnsets.size())]);
      w.push_back(kVowels[rng.below(kVowels.size())]);
    }
    if (seen.insert(w).second) words.push_back(std::move(w));
  }
  return words;
}

std::string render(const std::vector<std::string_view>& words) {
  std::string out;
  for (const auto w : words) {
    if (!out.empty()) out.push_back(' ');
    out.append(w);
  }
  if (!out.empty() && out[0] >= 'a' && out[0] <= 'z') out[0] = static_cast<char>(out[0] - 'a' + 'A');
  out.push_back('.');
  return out;
}

double round4(double v) { return std::round(v * 1e4) / 1e4; }

struct Idiom {
  std::size_t first = 0;   // index into words
  std::size_t second = 0;
  std::size_t synonym = 0;
  std::string surface;
};

struct Built {
  RawGroup group;
  double low_score = 0.0;
};

class Generator {
 public:
  explicit Generator(const SyntheticOptions& o) : opts_(o), rng_(o.seed) {
    const std::size_t n_idioms = o.resolved_idioms();
    Rng word_rng = rng_.fork(1);
    words_ = make_words(word_rng, o.vocab_size);

    // The last n_idioms words are synonyms; the rest form the filler pool.
    const std::size_t n_filler = o.vocab_size - n_idioms;
    std::vector<std::size_t> filler(n_filler);
    for (std::size_t i = 0; i < n_filler; ++i) filler[i] = i;
    Rng idiom_rng = rng_.fork(2);
    // Partial shuffle: the first 2 * n_idioms entries become components.
    for (std::size_t i = 0; i < 2 * n_idioms; ++i) {
      std::swap(filler[i], filler[i + idiom_rng.below(n_filler - i)]);
    }
    std::set<std::size_t> components;
    for (std::size_t k = 0; k < n_idioms; ++k) {
      Idiom ie{filler[2 * k], filler[2 * k + 1], n_filler + k, {}};
      ie.surface = words_[ie.first] + " " + words_[ie.second];
      components.insert(ie.first);
      components.insert(ie.second);
      idioms_.push_back(std::move(ie));
    }
    for (std::size_t i = 0; i < n_filler; ++i) {
      filler_.push_back(i);
      if (!components.contains(i)) distractors_.push_back(i);
    }
  }

  SyntheticData run() {
    SyntheticData data;
    Rng train_rng = rng_.fork(3);
    std::vector<RawGroup> train;
    for (std::size_t g = 0; g < opts_.n_groups; ++g) {
      train.push_back(build(train_rng, g % idioms_.size(), "syn-" + id_suffix(g)).group);
    }
    data.train = make_corpus(std::move(train));

    Rng held_rng = rng_.fork(4);
    Rng sts_rng = rng_.fork(5);
    std::vector<RawGroup> held;
    for (std::size_t g = 0; g < opts_.resolved_heldout(); ++g) {
      const std::size_t ie = held_rng.below(idioms_.size());
      Built b = build(held_rng, ie, "heldout-" + id_suffix(g));
      add_idiom_pairs(b, data.eval_pairs);
      held.push_back(std::move(b.group));
    }
    for (std::size_t g = 0; g < opts_.resolved_heldout(); ++g) {
      data.eval_pairs.push_back(sts_pair(sts_rng));
    }
    data.heldout = make_corpus(std::move(held));
    return data;
  }

 private:
  static std::string id_suffix(std::size_t g) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%04zu", g);
    return buf;
  }

  std::size_t pick(Rng& rng, const std::vector<std::size_t>& pool) const {
    return pool[rng.below(pool.size())];
  }

  // Filler context that avoids the expression's own component words.
  std::vector<std::size_t> context(Rng& rng, const Idiom& ie, std::size_t len) const {
    std::vector<std::size_t> out;
    while (out.size() < len) {
      const std::size_t w = pick(rng, filler_);
      if (w != ie.first && w != ie.second) out.push_back(w);
    }
    return out;
  }

  Built build(Rng& rng, std::size_t ie_index, std::string group_id) const {
    const Idiom& ie = idioms_[ie_index];
    const std::size_t span = opts_.max_context - opts_.min_context + 1;
    Built b;
    RawGroup& g = b.group;
    g.group_id = std::move(group_id);
    g.language = opts_.language;
    g.ie_surface = ie.surface;

    std::vector<std::size_t> ctx;
    std::size_t pos = 0;
    // Retry in the rare case the surface also matches across a word
    // boundary earlier in the sentence.
    while (true) {
      const std::size_t len = opts_.min_context + rng.below(span);
      pos = rng.below(len + 1);
      ctx = context(rng, ie, len);
      const auto sentence = with_span(ctx, pos, {words_[ie.first], words_[ie.second]});
      std::string lowered = sentence;
      lowered[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(lowered[0])));
      if (lowered.find(ie.surface) == char_offset(ctx, pos)) {
        g.mwe_sentence = sentence;
        break;
      }
    }
    g.correct_paraphrases.push_back(with_span(ctx, pos, {words_[ie.synonym]}));

    const bool literal = rng.below(2) == 0;
    std::set<std::size_t> used;
    for (std::size_t j = 0; j < opts_.n_incorrect; ++j) {
      std::size_t rep = 0;
      if (literal && j < 2) {
        rep = j == 0 ? ie.first : ie.second;
      } else {
        do {
          rep = pick(rng, distractors_);
        } while (used.contains(rep));
      }
      used.insert(rep);
      g.incorrect_paraphrases.push_back(with_span(ctx, pos, {words_[rep]}));
    }
    b.low_score = round4(literal ? rng.uniform(0.10, 0.25) : rng.uniform(0.25, 0.40));
    return b;
  }

  std::size_t char_offset(const std::vector<std::size_t>& ctx, std::size_t pos) const {
    std::size_t off = 0;
    for (std::size_t i = 0; i < pos; ++i) off += words_[ctx[i]].size() + 1;
    return off;
  }

  std::string with_span(const std::vector<std::size_t>& ctx, std::size_t pos,
                        const std::vector<std::string_view>& span) const {
    std::vector<std::string_view> out;
    for (std::size_t i = 0; i < pos; ++i) out.push_back(words_[ctx[i]]);
    out.insert(out.end(), span.begin(), span.end());
    for (std::size_t i = pos; i < ctx.size(); ++i) out.push_back(words_[ctx[i]]);
    return render(out);
  }

  void add_idiom_pairs(const Built& b, std::vector<EvalPair>& out) const {
    const RawGroup& g = b.group;
    const std::string mwe = preprocess_ie(g.mwe_sentence, g.ie_surface, g.group_id);
    const std::string& cor = g.correct_paraphrases.front();
    out.push_back({mwe, cor, 1.0, Subset::Idiom, g.language});
    for (const auto& inc : g.incorrect_paraphrases) {
      out.push_back({mwe, inc, b.low_score, Subset::Idiom, g.language});
      out.push_back({cor, inc, b.low_score, Subset::Idiom, g.language});
    }
  }

  // Plain sentence pair: k of the L words replaced, gold = 1 - k / L.
  EvalPair sts_pair(Rng& rng) const {
    const std::size_t span = opts_.max_context - opts_.min_context + 1;
    const std::size_t len = std::max<std::size_t>(2, opts_.min_context + rng.below(span));
    std::vector<std::size_t> a(len);
    for (auto& w : a) w = pick(rng, distractors_);
    std::vector<std::size_t> order(len);
    for (std::size_t i = 0; i < len; ++i) order[i] = i;
    const std::size_t k = 1 + rng.below(len - 1);
    std::vector<std::size_t> b = a;
    for (std::size_t i = 0; i < k; ++i) {
      std::swap(order[i], order[i + rng.below(len - i)]);
      std::size_t w = 0;
      do {
        w = pick(rng, distractors_);
      } while (w == a[order[i]]);
      b[order[i]] = w;
    }
    const auto words = [&](const std::vector<std::size_t>& ids) {
      std::vector<std::string_view> out;
      for (auto i : ids) out.push_back(words_[i]);
      return render(out);
    };
    const double gold = round4(1.0 - static_cast<double>(k) / static_cast<double>(len));
    return {words(a), words(b), gold, Subset::Sts, opts_.language};
  }

  const SyntheticOptions& opts_;
  Rng rng_;
  std::vector<std::string> words_;
  std::vector<Idiom> idioms_;
  std::vector<std::size_t> filler_;
  std::vector<std::size_t> distractors_;
};

}  // namespace

std::size_t SyntheticOptions::resolved_heldout() const {
  return n_heldout != 0 ? n_heldout : std::max<std::size_t>(1, n_groups / 4);
}

std::size_t SyntheticOptions::resolved_idioms() const {
  if (n_idioms != 0) return n_idioms;
  return std::clamp<std::size_t>(n_groups / 10, 1, idiom_cap(vocab_size));
}

SyntheticData gen_synthetic(const SyntheticOptions& options) {
  if (options.n_groups < 1) throw InvalidArgument("n_groups must be at least 1");
  if (options.vocab_size < 50) throw InvalidArgument("vocab_size must be at least 50");
  if (options.n_incorrect < 1) throw InvalidArgument("n_incorrect must be at least 1");
  if (options.min_context < 1 || options.max_context < options.min_context) {
    throw InvalidArgument("context lengths must satisfy 1 <= min_context <= max_context");
  }
  const std::size_t n_idioms = options.resolved_idioms();
  if (3 * n_idioms + std::max(kMinDistractors, options.n_incorrect + 1) > options.vocab_size) {
    throw InvalidArgument("vocab_size " + std::to_string(options.vocab_size) +
                          " is too small for " + std::to_string(n_idioms) + " idioms and " +
                          std::to_string(options.n_incorrect) + " incorrect paraphrases");
  }
  return Generator(options).run();
}

}  // namespace idt
