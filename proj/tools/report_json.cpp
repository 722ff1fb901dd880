#include "report_json.hpp"

namespace idt::cli {

using nlohmann::json;

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

json to_json(const AwarenessSummary& s) {
  return {{"gap1_mean", s.gap1_mean}, {"gap2_mean", s.gap2_mean}, {"groups", s.groups}};
}

json to_json(const CellScores& c) {
  return {{"rho_idiom", optional_number(c.rho_idiom)},
          {"rho_sts", optional_number(c.rho_sts)},
          {"rho_all", optional_number(c.rho_all)},
          {"counts", {{"idiom", c.n_idiom}, {"sts", c.n_sts}, {"all", c.n_all}}}};
}

json to_json(const EvalReport& r) {
  json out = to_json(r.overall);
  json langs = json::object();
  for (const auto& [lang, cell] : r.per_language) langs[lang] = to_json(cell);
  out["per_language"] = std::move(langs);
  out["awareness_gap1_mean"] = r.awareness ? json(r.awareness->gap1_mean) : json(nullptr);
  out["awareness_gap2_mean"] = r.awareness ? json(r.awareness->gap2_mean) : json(nullptr);
  out["awareness_groups"] = r.awareness ? json(r.awareness->groups) : json(nullptr);
  out["correct_reference"] = r.correct_reference;
  return out;
}

json to_json(const TrainConfig& c) {
  return {{"batch_size", c.batch_size},
          {"epochs", c.epochs},
          {"loss_margin", c.loss_margin},
          {"miner_margin", c.miner_margin},
          {"learning_rate", c.learning_rate},
          {"optimizer", c.optimizer == OptimizerKind::Adam ? "adam" : "sgd"},
          {"loss", c.loss_kind == LossKind::Triplet ? "triplet" : "multi-negative"},
          {"seed", c.seed},
          {"dim", c.dim},
          {"projection", c.use_projection},
          {"checkpoint_epochs", c.checkpoint_epochs}};
}

json to_json(const EpochStats& s) {
  return {{"epoch", s.epoch},
          {"mean_loss", s.mean_loss},
          {"mined_triplets", s.mined_triplets},
          {"active_batches", s.active_batches},
          {"validation", s.validation ? to_json(*s.validation) : json(nullptr)}};
}

}  // namespace idt::cli
