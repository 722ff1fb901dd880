#include "idt/trainer.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <thread>

#include "idt/checkpoint.hpp"
#include "idt/error.hpp"
#include "idt/miner.hpp"

namespace idt {

void TrainConfig::validate() const {
  if (batch_size < 4) throw InvalidArgument("batch_size must be at least 4");
  if (!(loss_margin >= 0.0)) throw InvalidArgument("loss_margin must be non-negative");
  if (!(miner_margin >= 0.0)) throw InvalidArgument("miner_margin must be non-negative");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw InvalidArgument("learning_rate must be positive and finite");
  }
  if (dim < 2) throw InvalidArgument("dim must be at least 2");
  if (threads < 1) throw InvalidArgument("threads must be at least 1");
}

std::vector<BatchSlice> make_batches(std::span<const LabeledSentence> sentences,
                                     std::size_t batch_size) {
  if (batch_size < 1) throw InvalidArgument("batch_size must be positive");
  std::vector<BatchSlice> out;
  for (std::size_t begin = 0; begin < sentences.size(); begin += batch_size) {
    const BatchSlice slice{begin, std::min(sentences.size(), begin + batch_size)};
    if (slice.size() < batch_size) {
      std::map<Label, std::size_t> counts;
      for (std::size_t i = slice.begin; i < slice.end; ++i) ++counts[sentences[i].label];
      const bool has_pair = std::any_of(counts.begin(), counts.end(),
                                        [](const auto& kv) { return kv.second >= 2; });
      if (!has_pair || counts.size() < 2) break;
    }
    out.push_back(slice);
  }
  return out;
}

namespace {

// Flat views over every parameter array, in a fixed order.
std::vector<std::span<double>> views(Matrix& m, std::optional<Projection>& p) {
  std::vector<std::span<double>> v{m.values()};
  if (p) {
    v.push_back(p->weight.values());
    v.push_back(p->bias);
  }
  return v;
}

std::vector<std::span<const double>> views(const Matrix& m, const std::optional<Projection>& p) {
  std::vector<std::span<const double>> v{m.values()};
  if (p) {
    v.push_back(p->weight.values());
    v.push_back(p->bias);
  }
  return v;
}

bool same_shape(const std::vector<std::span<double>>& a,
                const std::vector<std::span<const double>>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != b[i].size()) return false;
  }
  return true;
}

}  // namespace

void optimizer_step(EncoderParams& params, const EncoderGrads& grads, OptimizerState& state,
                    const TrainConfig& config) {
  auto theta = views(params.embeddings, params.projection);
  const auto g = views(grads.embeddings, grads.projection);
  if (!same_shape(theta, g)) throw InvalidArgument("gradient shape does not match parameters");
  for (const auto& block : g) {
    for (double x : block) {
      if (!std::isfinite(x)) throw InvalidArgument("non-finite gradient entry");
    }
  }
  const double lr = config.learning_rate;
  if (config.optimizer == OptimizerKind::Sgd) {
    for (std::size_t b = 0; b < theta.size(); ++b) {
      for (std::size_t i = 0; i < theta[b].size(); ++i) theta[b][i] -= lr * g[b][i];
    }
    return;
  }

  if (state.first_moment.embeddings.rows() != params.vocab_size() ||
      state.first_moment.embeddings.cols() != params.dim()) {
    state = OptimizerState{0, EncoderGrads(params), EncoderGrads(params)};
  }
  auto m = views(state.first_moment.embeddings, state.first_moment.projection);
  auto v = views(state.second_moment.embeddings, state.second_moment.projection);
  if (!same_shape(m, g) || !same_shape(v, g)) {
    throw InvalidArgument("optimizer state shape does not match parameters");
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(kAdamBeta1, t);
  const double c2 = 1.0 - std::pow(kAdamBeta2, t);
  for (std::size_t b = 0; b < theta.size(); ++b) {
    for (std::size_t i = 0; i < theta[b].size(); ++i) {
      const double gi = g[b][i];
      m[b][i] = kAdamBeta1 * m[b][i] + (1.0 - kAdamBeta1) * gi;
      v[b][i] = kAdamBeta2 * v[b][i] + (1.0 - kAdamBeta2) * gi * gi;
      theta[b][i] -= lr * (m[b][i] / c1) / (std::sqrt(v[b][i] / c2) + kAdamEpsilon);
    }
  }
}

Vocab build_corpus_vocab(std::span<const LabeledSentence> sentences, std::size_t min_count) {
  std::vector<std::vector<std::string>> tokens;
  tokens.reserve(sentences.size());
  for (const auto& s : sentences) tokens.push_back(tokenize(s.text));
  return build_vocab(tokens, min_count);
}

namespace {

void embed_range(const EncoderParams& params, const std::vector<std::vector<TokenId>>& ids,
                 BatchSlice slice, std::vector<SentenceEmbedding>& out, std::size_t threads) {
  out.assign(slice.size(), {});
  const auto run = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t k = lo; k < hi; ++k) out[k] = embed(params, ids[slice.begin + k]);
  };
  const std::size_t workers = std::clamp<std::size_t>(threads, 1, slice.size());
  if (workers == 1) {
    run(0, slice.size());
    return;
  }
  std::vector<std::jthread> pool;
  const std::size_t chunk = (slice.size() + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = std::min(slice.size(), w * chunk);
    pool.emplace_back(run, lo, std::min(slice.size(), lo + chunk));
  }
}

std::filesystem::path checkpoint_path(const std::filesystem::path& dir, std::size_t epoch) {
  char name[32];
  std::snprintf(name, sizeof name, "epoch-%04zu.idt", epoch);
  return dir / name;
}

}  // namespace

TrainResult train(std::span<const LabeledSentence> sentences, const Vocab& vocab,
                  const TrainConfig& config, std::span<const RawGroup> validation,
                  const EpochCallback& on_epoch) {
  config.validate();
  if (sentences.empty()) throw DataError("training corpus is empty");

  std::vector<std::vector<TokenId>> ids;
  ids.reserve(sentences.size());
  for (const auto& s : sentences) {
    ids.push_back(encode_text(vocab, s.text));
    if (ids.back().empty()) {
      throw DataError("group " + s.group_id + ": " + std::string(to_string(s.role)) +
                      " sentence has no tokens: \"" + s.text + "\"");
    }
  }

  TrainResult result;
  result.params = init_params(config.seed, vocab.size(), config.dim, config.use_projection);
  EncoderParams& params = result.params;
  TrainReport& report = result.report;

  const auto wants_checkpoint = [&](std::size_t epoch) {
    return !config.checkpoint_dir.empty() &&
           std::find(config.checkpoint_epochs.begin(), config.checkpoint_epochs.end(), epoch) !=
               config.checkpoint_epochs.end();
  };
  const auto maybe_checkpoint = [&](std::size_t epoch) {
    if (!wants_checkpoint(epoch)) return;
    std::filesystem::create_directories(config.checkpoint_dir);
    const auto path = checkpoint_path(config.checkpoint_dir, epoch);
    save_checkpoint(path, vocab, params);
    report.checkpoints.push_back(path);
  };

  if (!validation.empty()) report.initial_validation = summarize_awareness(params, vocab, validation);
  maybe_checkpoint(0);

  const auto batches = make_batches(sentences, config.batch_size);
  OptimizerState state{0, EncoderGrads(params), EncoderGrads(params)};
  EncoderGrads grads(params);
  Batch batch;

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    EpochStats stats;
    stats.epoch = epoch;
    double loss_sum = 0.0;
    for (std::size_t b = 0; b < batches.size(); ++b) {
      const BatchSlice slice = batches[b];
      embed_range(params, ids, slice, batch.embeddings, config.threads);
      batch.labels.clear();
      batch.roles.clear();
      for (std::size_t i = slice.begin; i < slice.end; ++i) {
        batch.labels.push_back(sentences[i].label);
        batch.roles.push_back(sentences[i].role);
      }
      if (batch.size() < 2) continue;
      // An overflowing norm makes every distance NaN and the miner would silently keep nothing.
      for (const auto& e : batch.embeddings) {
        double sq = 0.0;
        for (double x : e.vector) sq += x * x;
        if (!std::isfinite(sq)) {
          throw DivergenceError("non-finite embedding at epoch " + std::to_string(epoch) +
                                    ", batch " + std::to_string(b),
                                epoch, b);
        }
      }
      const auto triplets = mine(batch, config.miner_margin);
      if (triplets.empty()) continue;

      const BatchLoss loss = batch_loss(batch.embeddings, triplets, config.loss_margin,
                                        config.loss_kind);
      if (!std::isfinite(loss.value)) {
        throw DivergenceError("non-finite loss at epoch " + std::to_string(epoch) + ", batch " +
                                  std::to_string(b),
                              epoch, b);
      }
      grads.zero();
      for (const auto& [index, g] : loss.grads) {
        backprop(params, ids[slice.begin + index], g, grads);
      }
      try {
        optimizer_step(params, grads, state, config);
      } catch (const InvalidArgument& e) {
        throw DivergenceError(std::string(e.what()) + " at epoch " + std::to_string(epoch) +
                                  ", batch " + std::to_string(b),
                              epoch, b);
      }
      loss_sum += loss.value;
      stats.mined_triplets += triplets.size();
      ++stats.active_batches;
    }
    if (stats.active_batches > 0) {
      stats.mean_loss = loss_sum / static_cast<double>(stats.active_batches);
    }
    if (!validation.empty()) stats.validation = summarize_awareness(params, vocab, validation);
    report.epochs.push_back(stats);
    maybe_checkpoint(epoch);
    if (on_epoch) on_epoch(stats);
  }
  return result;
}

}  // namespace idt
