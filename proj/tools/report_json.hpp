#pragma once

#include "idt/evaluator.hpp"
#include "idt/trainer.hpp"
#include "json.hpp"

namespace idt::cli {

nlohmann::json to_json(const AwarenessSummary& s);
nlohmann::json to_json(const CellScores& c);
// Flat keys: rho_idiom, rho_sts, rho_all, counts, per_language,
// awareness_gap1_mean, awareness_gap2_mean, correct_reference.
nlohmann::json to_json(const EvalReport& r);
nlohmann::json to_json(const TrainConfig& c);
nlohmann::json to_json(const EpochStats& s);

}  // namespace idt::cli
