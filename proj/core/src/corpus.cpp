#include "idt/corpus.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "idt/error.hpp"
#include "idt/text.hpp"
#include "json.hpp"

namespace idt {

using nlohmann::json;

std::string_view to_string(Role role) {
  switch (role) {
    case Role::Mwe: return "MWE";
    case Role::Correct: return "CORRECT";
    case Role::Incorrect: return "INCORRECT";
  }
  return "?";
}

std::string ie_token(std::string_view ie_surface) {
  std::string folded;
  for (char c : ie_surface) {
    if (text::is_word_byte(c)) folded.push_back(c);
  }
  return "ID" + text::to_lower(folded) + "ID";
}

std::string preprocess_ie(std::string_view sentence, std::string_view ie_surface,
                          std::string_view group_id) {
  const std::size_t at =
      ie_surface.empty() ? std::string_view::npos : text::find_case_insensitive(sentence, ie_surface);
  if (at == std::string_view::npos) {
    std::ostringstream msg;
    msg << "expression \"" << ie_surface << "\" not found in MWE sentence";
    if (!group_id.empty()) msg << " of group " << group_id;
    throw DataError(msg.str());
  }
  std::string out;
  out.reserve(sentence.size() + 4);
  out.append(sentence.substr(0, at));
  out.append(ie_token(ie_surface));
  out.append(sentence.substr(at + ie_surface.size()));
  return out;
}

void validate_group(const RawGroup& g) {
  const auto fail = [&](std::string_view field, std::string_view why) {
    std::ostringstream msg;
    msg << "group " << (g.group_id.empty() ? "<unnamed>" : g.group_id) << ": field " << field
        << ' ' << why;
    throw DataError(msg.str());
  };
  if (g.group_id.empty()) fail("group_id", "is empty");
  if (g.ie_surface.empty()) fail("ie_surface", "is empty");
  if (ie_token(g.ie_surface).size() == 4) fail("ie_surface", "has no alphanumeric characters");
  if (text::find_case_insensitive(g.mwe_sentence, g.ie_surface) == std::string::npos) {
    fail("mwe_sentence", "does not contain ie_surface \"" + g.ie_surface + "\"");
  }
  if (g.correct_paraphrases.empty()) fail("correct_paraphrases", "is empty");
  if (g.incorrect_paraphrases.empty()) fail("incorrect_paraphrases", "is empty");
  const std::set<std::string> correct(g.correct_paraphrases.begin(), g.correct_paraphrases.end());
  for (const auto& s : g.incorrect_paraphrases) {
    if (correct.contains(s)) fail("incorrect_paraphrases", "repeats a correct paraphrase: \"" + s + "\"");
  }
}

std::vector<LabeledSentence> relabel(std::span<const RawGroup> groups) {
  std::vector<LabeledSentence> out;
  Label next = 0;
  for (const auto& g : groups) {
    const Label shared = next++;
    out.push_back({preprocess_ie(g.mwe_sentence, g.ie_surface, g.group_id), shared, g.group_id,
                   Role::Mwe});
    for (const auto& s : g.correct_paraphrases) {
      out.push_back({s, shared, g.group_id, Role::Correct});
    }
    for (const auto& s : g.incorrect_paraphrases) {
      out.push_back({s, next++, g.group_id, Role::Incorrect});
    }
  }
  return out;
}

std::vector<LabeledSentence> relabel(std::span<const LabeledSentence> sentences) {
  std::vector<LabeledSentence> out(sentences.begin(), sentences.end());
  Label next = 0;
  Label shared = 0;
  bool have_shared = false;
  const std::string* current_group = nullptr;
  for (auto& s : out) {
    if (current_group == nullptr || s.group_id != *current_group) {
      current_group = &s.group_id;
      have_shared = false;
    }
    if (s.role == Role::Incorrect) {
      s.label = next++;
    } else {
      if (!have_shared) {
        shared = next++;
        have_shared = true;
      }
      s.label = shared;
    }
  }
  return out;
}

Corpus make_corpus(std::vector<RawGroup> groups) {
  std::set<std::string> seen;
  for (const auto& g : groups) {
    validate_group(g);
    if (!seen.insert(g.group_id).second) {
      throw DataError("group " + g.group_id + ": field group_id is not unique");
    }
  }
  Corpus corpus;
  corpus.derived = relabel(groups);
  corpus.groups = std::move(groups);
  return corpus;
}

namespace {

std::string string_field(const json& obj, const char* key, std::size_t line) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw DataError("line " + std::to_string(line) + ": missing field " + key);
  }
  if (!it->is_string()) {
    throw DataError("line " + std::to_string(line) + ": field " + key + " must be a string");
  }
  return it->get<std::string>();
}

std::vector<std::string> string_list_field(const json& obj, const char* key, std::size_t line) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw DataError("line " + std::to_string(line) + ": missing field " + key);
  }
  if (!it->is_array()) {
    throw DataError("line " + std::to_string(line) + ": field " + key + " must be an array of strings");
  }
  std::vector<std::string> out;
  for (const auto& v : *it) {
    if (!v.is_string()) {
      throw DataError("line " + std::to_string(line) + ": field " + key +
                      " must be an array of strings");
    }
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace

Corpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus file " + path.string());
  std::vector<RawGroup> groups;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw DataError(path.string() + ": line " + std::to_string(line_no) + ": malformed JSON (" +
                      e.what() + ")");
    }
    if (!obj.is_object()) {
      throw DataError(path.string() + ": line " + std::to_string(line_no) + ": expected a JSON object");
    }
    RawGroup g;
    g.group_id = string_field(obj, "group_id", line_no);
    g.language = string_field(obj, "language", line_no);
    g.ie_surface = string_field(obj, "ie_surface", line_no);
    g.mwe_sentence = string_field(obj, "mwe_sentence", line_no);
    g.correct_paraphrases = string_list_field(obj, "correct_paraphrases", line_no);
    g.incorrect_paraphrases = string_list_field(obj, "incorrect_paraphrases", line_no);
    groups.push_back(std::move(g));
  }
  return make_corpus(std::move(groups));
}

void save_corpus(const std::filesystem::path& path, std::span<const RawGroup> groups) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write corpus file " + path.string());
  for (const auto& g : groups) {
    // Key order is fixed by json's sorted object storage.
    json obj = {{"group_id", g.group_id},
                {"language", g.language},
                {"ie_surface", g.ie_surface},
                {"mwe_sentence", g.mwe_sentence},
                {"correct_paraphrases", g.correct_paraphrases},
                {"incorrect_paraphrases", g.incorrect_paraphrases}};
    out << obj.dump() << '\n';
  }
  if (!out) throw DataError("failed writing corpus file " + path.string());
}

}  // namespace idt
