#pragma once

#include <filesystem>

#include "idt/encoder.hpp"
#include "idt/vocab.hpp"

namespace idt {

// On-disk layout:
//   "IDT1"
//   u32 little-endian byte length of the JSON header
//   JSON header {"dim", "has_projection", "vocab": [tokens...]}
//   f32 little-endian, row-major: embeddings, then projection weight and
//   bias when present.
//
// Parameters are held in double precision in memory and rounded to float on
// save, so a loaded model reproduces the saved file byte for byte.
struct Model {
  Vocab vocab;
  EncoderParams params;
};

// Writes to a temporary sibling and renames it into place.
void save_checkpoint(const std::filesystem::path& path, const Vocab& vocab,
                     const EncoderParams& params);

// Throws DataError on a missing file, bad magic or truncated payload.
Model load_checkpoint(const std::filesystem::path& path);

}  // namespace idt
