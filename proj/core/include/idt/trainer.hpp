#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "idt/corpus.hpp"
#include "idt/encoder.hpp"
#include "idt/evaluator.hpp"
#include "idt/loss.hpp"
#include "idt/vocab.hpp"

namespace idt {

enum class OptimizerKind { Sgd, Adam };

struct TrainConfig {
  std::size_t batch_size = 64;
  std::size_t epochs = 25;
  double loss_margin = kDefaultLossMargin;
  double miner_margin = kDefaultMinerMargin;
  double learning_rate = 1e-3;
  OptimizerKind optimizer = OptimizerKind::Adam;
  std::uint64_t seed = 0;
  LossKind loss_kind = LossKind::Triplet;
  std::size_t dim = 32;
  bool use_projection = false;
  // Worker threads for the per-batch forward pass; results do not depend on it.
  std::size_t threads = 1;

  // Epochs (0 = initialization) after which a checkpoint is written to
  // checkpoint_dir as epoch-NNNN.idt. Ignored when checkpoint_dir is empty.
  std::filesystem::path checkpoint_dir;
  std::vector<std::size_t> checkpoint_epochs;

  // Throws InvalidArgument when a field is out of range.
  void validate() const;
};

inline constexpr double kAdamBeta1 = 0.9;
inline constexpr double kAdamBeta2 = 0.999;
inline constexpr double kAdamEpsilon = 1e-8;

// Half-open range of sentence indices.
struct BatchSlice {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool operator==(const BatchSlice&) const = default;
};

// Consecutive slices in corpus order. The final short slice is kept only if
// it can form at least one valid triplet.
std::vector<BatchSlice> make_batches(std::span<const LabeledSentence> sentences,
                                     std::size_t batch_size);

struct OptimizerState {
  std::size_t step = 0;
  EncoderGrads first_moment;
  EncoderGrads second_moment;
};

// SGD: theta -= lr * g. Adam: bias-corrected moments with the constants
// above. Throws InvalidArgument on a non-finite gradient entry or a shape
// mismatch.
void optimizer_step(EncoderParams& params, const EncoderGrads& grads, OptimizerState& state,
                    const TrainConfig& config);

struct EpochStats {
  std::size_t epoch = 0;
  // Mean batch loss over batches that mined at least one triplet.
  double mean_loss = 0.0;
  std::size_t mined_triplets = 0;
  std::size_t active_batches = 0;
  std::optional<AwarenessSummary> validation;
};

struct TrainReport {
  std::optional<AwarenessSummary> initial_validation;
  std::vector<EpochStats> epochs;
  std::vector<std::filesystem::path> checkpoints;
};

struct TrainResult {
  TrainReport report;
  EncoderParams params;
};

// Vocabulary over a labeled stream, tokenized with tokenize().
Vocab build_corpus_vocab(std::span<const LabeledSentence> sentences, std::size_t min_count = 1);

// For each epoch and each batch: embed, mine, batch loss, optimizer step.
// Batches that mine nothing leave the parameters untouched and do not count
// towards the epoch loss. Validation groups, when given, are scored after
// initialization and after every epoch. Throws DivergenceError on a
// non-finite loss, DataError on a sentence with no tokens. on_epoch, when
// set, sees each epoch's stats as soon as they are final.
using EpochCallback = std::function<void(const EpochStats&)>;

TrainResult train(std::span<const LabeledSentence> sentences, const Vocab& vocab,
                  const TrainConfig& config, std::span<const RawGroup> validation = {},
                  const EpochCallback& on_epoch = {});

}  // namespace idt
