#include "cli.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <vector>

#include "CLI11.hpp"
#include "idt/checkpoint.hpp"
#include "idt/corpus.hpp"
#include "idt/error.hpp"
#include "idt/evaluator.hpp"
#include "idt/miner.hpp"
#include "idt/pairs.hpp"
#include "idt/synthetic.hpp"
#include "idt/trainer.hpp"
#include "manifest.hpp"
#include "report_json.hpp"

namespace idt::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Shared {
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  bool quiet = false;
  std::string manifest;
};

void add_shared(CLI::App& cmd, Shared& shared) {
  cmd.add_option("--seed", shared.seed, "Seed for every random draw")->capture_default_str();
  cmd.add_option("--threads", shared.threads, "Worker threads (results do not depend on it)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd.add_flag("--quiet", shared.quiet, "Suppress progress output");
  cmd.add_option("--manifest", shared.manifest, "Where to write the run manifest");
}

json shared_json(const Shared& s) { return {{"seed", s.seed}, {"threads", s.threads}}; }

// <dir>/<stem>.manifest.json next to a file output.
fs::path manifest_beside(const fs::path& output) {
  fs::path p = output.parent_path() / output.stem();
  p += ".manifest.json";
  return p;
}

std::string fmt(double v, int precision = 4) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(precision) << v;
  return s.str();
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : "n/a"; }

std::string sci(double v) {
  std::ostringstream s;
  s << std::scientific << std::setprecision(3) << v;
  return s.str();
}

// ---------------------------------------------------------------- gen

struct GenArgs {
  std::string out;
  std::size_t groups = 200;
  std::size_t vocab_size = 500;
  std::size_t incorrect = 1;
  std::size_t heldout = 0;
  std::size_t idioms = 0;
  std::string language = "en";
};

void run_gen(const GenArgs& a, const Shared& shared, std::ostream& out) {
  RunManifest manifest("gen");
  SyntheticOptions opts;
  opts.seed = shared.seed;
  opts.n_groups = a.groups;
  opts.vocab_size = a.vocab_size;
  opts.n_incorrect = a.incorrect;
  opts.n_heldout = a.heldout;
  opts.n_idioms = a.idioms;
  opts.language = a.language;
  const SyntheticData data = gen_synthetic(opts);

  const fs::path dir = a.out;
  fs::create_directories(dir);
  save_corpus(dir / "train.jsonl", data.train.groups);
  save_corpus(dir / "heldout.jsonl", data.heldout.groups);
  save_eval_pairs(dir / "pairs.tsv", data.eval_pairs);

  manifest.config() = shared_json(shared);
  manifest.config().update({{"groups", a.groups},
                            {"vocab_size", a.vocab_size},
                            {"incorrect", a.incorrect},
                            {"heldout", opts.resolved_heldout()},
                            {"idioms", opts.resolved_idioms()},
                            {"language", a.language},
                            {"out", a.out}});
  manifest.add_output("train", dir / "train.jsonl");
  manifest.add_output("heldout", dir / "heldout.jsonl");
  manifest.add_output("pairs", dir / "pairs.tsv");
  manifest.write(shared.manifest.empty() ? dir / "manifest.json" : fs::path(shared.manifest));
  if (!shared.quiet) {
    out << "wrote " << data.train.groups.size() << " train groups, "
        << data.heldout.groups.size() << " held-out groups, " << data.eval_pairs.size()
        << " eval pairs to " << dir.string() << '\n';
  }
}

// ---------------------------------------------------------------- train

struct TrainArgs {
  std::string corpus;
  std::string out;
  std::string validation;
  std::string optimizer = "adam";
  std::string loss = "triplet";
  std::string projection = "off";
  std::size_t min_count = 1;
  TrainConfig config;
};

void run_train(TrainArgs a, const Shared& shared, std::ostream& err) {
  RunManifest manifest("train");
  TrainConfig& c = a.config;
  c.seed = shared.seed;
  c.threads = shared.threads;
  c.optimizer = a.optimizer == "sgd" ? OptimizerKind::Sgd : OptimizerKind::Adam;
  c.loss_kind = a.loss == "triplet" ? LossKind::Triplet : LossKind::MultiNegative;
  c.use_projection = a.projection == "on";
  const fs::path dir = a.out;
  if (!c.checkpoint_epochs.empty()) c.checkpoint_dir = dir / "checkpoints";
  c.validate();

  const Corpus corpus = load_corpus(a.corpus);
  manifest.add_input("corpus", a.corpus);
  std::vector<RawGroup> validation;
  if (!a.validation.empty()) {
    validation = load_corpus(a.validation).groups;
    manifest.add_input("validation", a.validation);
  }
  const Vocab vocab = build_corpus_vocab(corpus.derived, a.min_count);
  fs::create_directories(dir);
  const auto t0 = std::chrono::steady_clock::now();
  const auto log_epoch = [&](const EpochStats& e) {
    if (shared.quiet) return;
    err << "epoch " << e.epoch << '/' << c.epochs << "  loss " << sci(e.mean_loss)
        << "  triplets " << e.mined_triplets;
    if (e.validation) err << "  gap2 " << fmt(e.validation->gap2_mean);
    err << std::endl;
  };
  const TrainResult result = train(corpus.derived, vocab, c, validation, log_epoch);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  save_checkpoint(dir / "model.idt", vocab, result.params);

  json report;
  report["config"] = to_json(c);
  report["config"]["min_count"] = a.min_count;
  report["sentences"] = corpus.derived.size();
  report["vocab_size"] = vocab.size();
  report["model"] = "model.idt";
  report["initial_validation"] =
      result.report.initial_validation ? to_json(*result.report.initial_validation) : json(nullptr);
  report["epochs"] = json::array();
  for (const auto& e : result.report.epochs) report["epochs"].push_back(to_json(e));
  report["checkpoints"] = json::array();
  for (const auto& p : result.report.checkpoints) {
    report["checkpoints"].push_back(fs::relative(p, dir).generic_string());
  }
  write_json(dir / "report.json", report);

  manifest.config() = shared_json(shared);
  manifest.config().update(to_json(c));
  manifest.config().update({{"corpus", a.corpus},
                            {"validation", a.validation},
                            {"out", a.out},
                            {"min_count", a.min_count},
                            {"train_seconds", seconds}});
  manifest.add_output("model", dir / "model.idt");
  manifest.add_output("report", dir / "report.json");
  manifest.write(shared.manifest.empty() ? dir / "manifest.json" : fs::path(shared.manifest));

  if (!shared.quiet) {
    err << "trained " << c.epochs << " epochs in " << fmt(seconds, 2) << " s; model at "
        << (dir / "model.idt").string() << '\n';
  }
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
  std::string model;
  std::string pairs;
  std::string report;
  std::string groups;
};

void run_eval(const EvalArgs& a, const Shared& shared, std::ostream& out) {
  RunManifest manifest("eval");
  const Model model = load_checkpoint(a.model);
  manifest.add_input("model", a.model);
  const auto pairs = load_eval_pairs(a.pairs);
  manifest.add_input("pairs", a.pairs);
  std::vector<RawGroup> groups;
  if (!a.groups.empty()) {
    groups = load_corpus(a.groups).groups;
    manifest.add_input("groups", a.groups);
  }
  const EvalReport report = evaluate(model.params, model.vocab, pairs, groups, shared.threads);
  write_json(a.report, to_json(report));

  manifest.config() = shared_json(shared);
  manifest.config().update({{"model", a.model}, {"pairs", a.pairs}, {"groups", a.groups},
                            {"report", a.report}});
  manifest.add_output("report", a.report);
  manifest.write(shared.manifest.empty() ? manifest_beside(a.report) : fs::path(shared.manifest));
  if (!shared.quiet) {
    out << "rho idiom " << fmt(report.overall.rho_idiom) << "  sts " << fmt(report.overall.rho_sts)
        << "  all " << fmt(report.overall.rho_all) << "  (" << report.overall.n_all << " pairs)\n";
    if (report.awareness) {
      out << "awareness gap1 " << fmt(report.awareness->gap1_mean) << "  gap2 "
          << fmt(report.awareness->gap2_mean) << '\n';
    }
  }
}

// ---------------------------------------------------------------- mine

struct MineArgs {
  std::string model;
  std::string corpus;
  std::string out;
  std::size_t batch_size = 64;
  double miner_margin = kDefaultMinerMargin;
};

void run_mine(const MineArgs& a, const Shared& shared, std::ostream& out) {
  RunManifest manifest("mine");
  if (a.batch_size < 4) throw InvalidArgument("batch_size must be at least 4");
  const Model model = load_checkpoint(a.model);
  manifest.add_input("model", a.model);
  const Corpus corpus = load_corpus(a.corpus);
  manifest.add_input("corpus", a.corpus);

  std::ostringstream tsv;
  tsv << "anchor_idx\tpositive_idx\tnegative_idx\td_ap\td_an\n";
  tsv << std::setprecision(17);
  std::size_t total = 0;
  for (const BatchSlice slice : make_batches(corpus.derived, a.batch_size)) {
    Batch batch;
    for (std::size_t i = slice.begin; i < slice.end; ++i) {
      const auto& s = corpus.derived[i];
      const auto ids = encode_text(model.vocab, s.text);
      if (ids.empty()) {
        throw DataError("group " + s.group_id + ": sentence has no tokens: \"" + s.text + "\"");
      }
      batch.embeddings.push_back(embed(model.params, ids));
      batch.labels.push_back(s.label);
      batch.roles.push_back(s.role);
    }
    if (batch.size() < 2) continue;
    const Matrix dist = pairwise_euclidean(batch);
    for (const Triplet& t : mine(dist, batch.labels, a.miner_margin)) {
      tsv << slice.begin + t.anchor << '\t' << slice.begin + t.positive << '\t'
          << slice.begin + t.negative << '\t' << dist(t.anchor, t.positive) << '\t'
          << dist(t.anchor, t.negative) << '\n';
      ++total;
    }
  }
  {
    std::ofstream f(a.out, std::ios::binary | std::ios::trunc);
    if (!f) throw DataError("cannot write " + a.out);
    f << tsv.str();
  }
  manifest.config() = shared_json(shared);
  manifest.config().update({{"model", a.model}, {"corpus", a.corpus}, {"out", a.out},
                            {"batch_size", a.batch_size}, {"miner_margin", a.miner_margin}});
  manifest.add_output("triplets", a.out);
  manifest.write(shared.manifest.empty() ? manifest_beside(a.out) : fs::path(shared.manifest));
  if (!shared.quiet) out << "mined " << total << " triplets to " << a.out << '\n';
}

// ---------------------------------------------------------------- score

struct ScoreArgs {
  std::string model;
  std::string s1;
  std::string s2;
  std::string pairs;
  std::string out;
};

void run_score(const ScoreArgs& a, const Shared& shared, std::ostream& out, std::ostream& err) {
  RunManifest manifest("score");
  const Model model = load_checkpoint(a.model);
  manifest.add_input("model", a.model);
  const bool single = !a.s1.empty() || !a.s2.empty();
  if (single == !a.pairs.empty()) {
    throw InvalidArgument("give either --s1 and --s2, or --pairs");
  }

  std::ostringstream result;
  result << std::setprecision(17);
  if (single) {
    result << score_pair(model.params, model.vocab, a.s1, a.s2) << '\n';
  } else {
    const auto pairs = load_eval_pairs(a.pairs);
    manifest.add_input("pairs", a.pairs);
    result << "sentence1\tsentence2\tgold_score\tsubset\tlanguage\tscore\n";
    for (const auto& p : pairs) {
      result << p.sentence1 << '\t' << p.sentence2 << '\t' << p.gold_score << '\t'
             << to_string(p.subset) << '\t' << p.language << '\t'
             << score_pair(model.params, model.vocab, p.sentence1, p.sentence2) << '\n';
    }
  }

  manifest.config() = shared_json(shared);
  manifest.config().update({{"model", a.model}, {"pairs", a.pairs}, {"out", a.out},
                            {"s1", a.s1}, {"s2", a.s2}});
  if (a.out.empty()) {
    out << result.str();
  } else {
    std::ofstream f(a.out, std::ios::binary | std::ios::trunc);
    if (!f) throw DataError("cannot write " + a.out);
    f << result.str();
    manifest.add_output("scores", a.out);
  }
  if (!shared.manifest.empty()) {
    manifest.write(shared.manifest);
  } else if (!a.out.empty()) {
    manifest.write(manifest_beside(a.out));
  } else if (!shared.quiet) {
    // Nowhere to put a file; the manifest goes to the diagnostic stream.
    err << manifest.finish().dump() << '\n';
  }
}

}  // namespace

int dispatch(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app("Idiom-aware sentence embeddings: synthetic data, training, evaluation", "idt");
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);

  Shared shared;

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic idiom corpus and eval pairs");
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();
  gen_cmd->add_option("--groups", gen.groups, "Training groups")->capture_default_str();
  gen_cmd->add_option("--vocab-size", gen.vocab_size, "Distinct words")->capture_default_str();
  gen_cmd->add_option("--incorrect", gen.incorrect, "Incorrect paraphrases per group")
      ->capture_default_str();
  gen_cmd->add_option("--heldout", gen.heldout, "Held-out groups (0 = groups / 4)")
      ->capture_default_str();
  gen_cmd->add_option("--idioms", gen.idioms, "Distinct expressions (0 = groups / 10)")
      ->capture_default_str();
  gen_cmd->add_option("--language", gen.language, "Language tag")->capture_default_str();
  add_shared(*gen_cmd, shared);

  TrainArgs tr;
  auto* train_cmd = app.add_subcommand("train", "Train an encoder on a corpus");
  train_cmd->add_option("--corpus", tr.corpus, "Training corpus (JSONL)")
      ->required()
      ->check(CLI::ExistingFile);
  train_cmd->add_option("--out", tr.out, "Output directory")->required();
  train_cmd->add_option("--batch-size", tr.config.batch_size, "Sentences per batch")->capture_default_str();
  train_cmd->add_option("--epochs", tr.config.epochs, "Passes over the corpus")->capture_default_str();
  train_cmd->add_option("--loss-margin", tr.config.loss_margin, "Hinge margin on cosine distance")->capture_default_str();
  train_cmd->add_option("--miner-margin", tr.config.miner_margin, "Keep triplets with d(a,n) - d(a,p) below this")->capture_default_str();
  train_cmd->add_option("--lr", tr.config.learning_rate, "Learning rate")->capture_default_str();
  train_cmd->add_option("--optimizer", tr.optimizer, "Update rule")
      ->check(CLI::IsMember({"sgd", "adam"}))
      ->capture_default_str();
  train_cmd->add_option("--loss", tr.loss, "Batch objective")
      ->check(CLI::IsMember({"triplet", "multi-negative"}))
      ->capture_default_str();
  train_cmd->add_option("--dim", tr.config.dim, "Embedding width")->capture_default_str();
  train_cmd->add_option("--projection", tr.projection, "Linear layer after pooling")
      ->check(CLI::IsMember({"on", "off"}))
      ->capture_default_str();
  train_cmd->add_option("--min-count", tr.min_count, "Vocabulary frequency cutoff")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train_cmd->add_option("--validation", tr.validation,
                        "Held-out groups (JSONL) scored for awareness every epoch")
      ->check(CLI::ExistingFile);
  train_cmd->add_option("--checkpoint-epochs", tr.config.checkpoint_epochs,
                        "Epochs to checkpoint, e.g. 0,8,10 (0 = initialization)")
      ->delimiter(',');
  add_shared(*train_cmd, shared);

  EvalArgs ev;
  auto* eval_cmd = app.add_subcommand("eval", "Spearman rho and awareness gaps for a model");
  eval_cmd->add_option("--model", ev.model, "Checkpoint")->required();
  eval_cmd->add_option("--pairs", ev.pairs, "Eval pairs (TSV)")->required();
  eval_cmd->add_option("--report", ev.report, "Report path (JSON)")->required();
  eval_cmd->add_option("--groups", ev.groups, "Groups (JSONL) for awareness gaps");
  add_shared(*eval_cmd, shared);

  MineArgs mn;
  auto* mine_cmd = app.add_subcommand("mine", "Dump the triplets the miner keeps for a model");
  mine_cmd->add_option("--model", mn.model, "Checkpoint")->required();
  mine_cmd->add_option("--corpus", mn.corpus, "Corpus (JSONL)")->required();
  mine_cmd->add_option("--out", mn.out, "Triplet TSV")->required();
  mine_cmd->add_option("--batch-size", mn.batch_size, "Sentences per batch")->capture_default_str();
  mine_cmd->add_option("--miner-margin", mn.miner_margin, "Keep triplets with d(a,n) - d(a,p) below this")->capture_default_str();
  add_shared(*mine_cmd, shared);

  ScoreArgs sc;
  auto* score_cmd = app.add_subcommand("score", "Cosine similarity of sentence pairs");
  score_cmd->add_option("--model", sc.model, "Checkpoint")->required();
  score_cmd->add_option("--s1", sc.s1, "First sentence");
  score_cmd->add_option("--s2", sc.s2, "Second sentence");
  score_cmd->add_option("--pairs", sc.pairs, "Eval pairs (TSV) to score");
  score_cmd->add_option("--out", sc.out, "Write scores here instead of stdout");
  add_shared(*score_cmd, shared);

  if (args.empty()) {
    err << app.help();
    return kExitUsage;
  }
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const auto chosen = app.get_subcommands();
    out << (chosen.empty() ? app.help() : chosen.front()->help());
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << tool_version() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const auto chosen = app.get_subcommands();
    err << (chosen.empty() ? app.help() : chosen.front()->help());
    return kExitUsage;
  }

  try {
    if (gen_cmd->parsed()) run_gen(gen, shared, out);
    if (train_cmd->parsed()) run_train(tr, shared, err);
    if (eval_cmd->parsed()) run_eval(ev, shared, out);
    if (mine_cmd->parsed()) run_mine(mn, shared, out);
    if (score_cmd->parsed()) run_score(sc, shared, out, err);
  } catch (const DivergenceError& e) {
    err << "error: training diverged: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}

int dispatch(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return dispatch(args, std::cout, std::cerr);
}

}  // namespace idt::cli
